#pragma once

#include <stdexcept>
#include <string>

namespace atlas {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// energy-capture
struct SourceUnavailable : Error { using Error::Error; };
struct TraceFormatError : Error { using Error::Error; };
struct InvalidCounter : Error { using Error::Error; };
struct AlreadySampling : Error { using Error::Error; };
struct SamplingLost : Error { using Error::Error; };
struct WindowOutOfRange : Error { using Error::Error; };

// proc-telemetry
struct ProcessNotFound : Error { using Error::Error; };
struct AccessDenied : Error { using Error::Error; };
struct CounterRegression : Error { using Error::Error; };

// grid-data
struct FormatError : Error { using Error::Error; };
struct MixSumError : Error { using Error::Error; };
struct OrderError : Error { using Error::Error; };
struct RegionNotFound : Error { using Error::Error; };

// footprint-models
struct UnknownSource : Error { using Error::Error; };
struct InvalidQuantity : Error { using Error::Error; };

// sustainability-analysis
struct InvalidCount : Error { using Error::Error; };
struct InvalidDuration : Error { using Error::Error; };

// workload-harness
struct ConnectorUnhealthy : Error { using Error::Error; };
struct QueryFailed : Error { using Error::Error; };

// reporting
struct MetricUnavailable : Error { using Error::Error; };
struct WriteError : Error { using Error::Error; };

// cli / configuration
struct ConfigError : Error { using Error::Error; };

}  // namespace atlas
