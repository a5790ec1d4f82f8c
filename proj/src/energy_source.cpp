#include "atlas/energy_source.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "atlas/errors.hpp"

namespace fs = std::filesystem;

namespace atlas {

namespace {

constexpr const char* kDefaultPowercapRoot = "/sys/class/powercap";

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw SourceUnavailable("cannot read " + path.string());
    std::string text;
    std::getline(in, text);
    return text;
}

std::uint64_t read_u64_file(const fs::path& path) {
    std::string text = read_text_file(path);
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        throw SourceUnavailable("non-numeric value in " + path.string() + ": '" + text + "'");
    }
}

// Parses "package-<n>" into n; returns -1 when the name is something else.
int package_index(const std::string& zone_name) {
    constexpr const char* prefix = "package-";
    if (zone_name.rfind(prefix, 0) != 0) return -1;
    try {
        return std::stoi(zone_name.substr(std::string(prefix).size()));
    } catch (const std::exception&) {
        return -1;
    }
}

struct RaplZone {
    DomainKind kind;
    int domain_id;
    fs::path energy_file;
    std::uint64_t max_range_uj;
};

class RaplSource final : public EnergySource {
public:
    explicit RaplSource(const std::string& root) {
        fs::path root_path(root);
        std::error_code ec;
        if (!fs::is_directory(root_path, ec) || ec) {
            throw SourceUnavailable("powercap root missing or unreadable: " + root);
        }
        for (const auto& entry : fs::directory_iterator(root_path, ec)) {
            const std::string stem = entry.path().filename().string();
            // Top-level zones are intel-rapl:<i>; subzones carry a second colon.
            if (stem.rfind("intel-rapl:", 0) != 0 || std::count(stem.begin(), stem.end(), ':') != 1)
                continue;
            int pkg = package_index(read_text_file(entry.path() / "name"));
            if (pkg < 0) continue;
            add_zone(DomainKind::package, pkg, entry.path());
            for (const auto& sub : fs::directory_iterator(entry.path())) {
                const std::string sub_stem = sub.path().filename().string();
                if (sub_stem.rfind(stem + ":", 0) != 0) continue;
                if (read_text_file(sub.path() / "name") == "dram")
                    add_zone(DomainKind::dram, pkg, sub.path());
            }
        }
        if (ec) throw SourceUnavailable("cannot enumerate powercap root: " + root);
        if (zones_.empty()) throw SourceUnavailable("no package domains under " + root);
        sort_zones();
    }

    const std::vector<DomainInfo>& domains() const override { return infos_; }

    std::vector<DomainCounter> read() override {
        std::int64_t now = clock_.now_ns();
        std::vector<DomainCounter> out;
        out.reserve(zones_.size());
        for (const auto& z : zones_) {
            std::uint64_t uj = read_u64_file(z.energy_file);
            out.push_back(DomainCounter{z.kind, z.domain_id, uj, z.max_range_uj, now});
        }
        return out;
    }

    Clock& clock() override { return clock_; }

private:
    void add_zone(DomainKind kind, int id, const fs::path& zone_path) {
        std::uint64_t range = read_u64_file(zone_path / "max_energy_range_uj");
        if (range == 0) throw SourceUnavailable("zero max_energy_range_uj in " + zone_path.string());
        zones_.push_back(RaplZone{kind, id, zone_path / "energy_uj", range});
    }

    void sort_zones() {
        std::sort(zones_.begin(), zones_.end(), [](const RaplZone& a, const RaplZone& b) {
            if (a.kind != b.kind) return a.kind == DomainKind::package;
            return a.domain_id < b.domain_id;
        });
        for (const auto& z : zones_) infos_.push_back(DomainInfo{z.kind, z.domain_id, z.max_range_uj});
    }

    std::vector<RaplZone> zones_;
    std::vector<DomainInfo> infos_;
    SteadyClock clock_;
};

class ReplaySource final : public EnergySource {
public:
    explicit ReplaySource(const std::string& path)
        : trace_(load_replay_trace(path)), clock_(trace_.span_begin_ns()) {
        for (const auto& d : trace_.domains)
            infos_.push_back(DomainInfo{d.kind, d.domain_id, d.max_range_uj});
    }

    const std::vector<DomainInfo>& domains() const override { return infos_; }

    std::vector<DomainCounter> read() override { return read_at(clock_.now_ns()); }

    std::vector<DomainCounter> read_at(std::int64_t t) override {
        std::vector<DomainCounter> out;
        out.reserve(trace_.domains.size());
        for (const auto& d : trace_.domains) {
            // Step semantics: the latest row at or before t, clamped to the
            // series edges.
            const auto& ts = d.timestamps_ns;
            auto it = std::upper_bound(ts.begin(), ts.end(), t);
            std::size_t idx = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
            out.push_back(DomainCounter{d.kind, d.domain_id, d.cumulative_uj[idx], d.max_range_uj, t});
        }
        return out;
    }

    Clock& clock() override { return clock_; }

    bool virtual_time() const override { return true; }

private:
    EnergyTrace trace_;
    std::vector<DomainInfo> infos_;
    VirtualClock clock_;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

}  // namespace

std::vector<DomainCounter> EnergySource::read_at(std::int64_t) {
    throw std::logic_error("read_at is only available on virtual-time sources");
}

SourceConfig SourceConfig::parse(const std::string& spec) {
    SourceConfig config;
    std::string backend = spec;
    std::string rest;
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        backend = spec.substr(0, colon);
        rest = spec.substr(colon + 1);
    }
    if (backend == "rapl") {
        config.backend = Backend::rapl;
        config.path = rest;
    } else if (backend == "replay") {
        config.backend = Backend::replay;
        if (rest.empty()) throw ConfigError("replay source needs a trace path: replay:<file>");
        config.path = rest;
    } else {
        throw ConfigError("unknown energy source backend '" + backend + "' (expected rapl or replay)");
    }
    return config;
}

EnergyTrace load_replay_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SourceUnavailable("cannot open replay trace: " + path);
    std::string line;
    if (!std::getline(in, line)) throw TraceFormatError("empty replay trace: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp_ns,domain,cumulative_uj,max_range_uj") {
        throw TraceFormatError("bad replay trace header in " + path + ": '" + line + "'");
    }

    EnergyTrace trace;
    std::int64_t prev_ts = std::numeric_limits<std::int64_t>::min();
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw TraceFormatError(path + ":" + std::to_string(row) + ": expected 4 fields");
        }
        DomainCounter sample;
        try {
            sample.timestamp_ns = std::stoll(fields[0]);
            sample.cumulative_uj = std::stoull(fields[2]);
            sample.max_range_uj = std::stoull(fields[3]);
        } catch (const std::exception&) {
            throw TraceFormatError(path + ":" + std::to_string(row) + ": non-numeric field");
        }
        const std::string& domain = fields[1];
        auto dash = domain.rfind('-');
        if (dash == std::string::npos) {
            throw TraceFormatError(path + ":" + std::to_string(row) + ": bad domain '" + domain + "'");
        }
        const std::string kind = domain.substr(0, dash);
        try {
            sample.domain_id = std::stoi(domain.substr(dash + 1));
        } catch (const std::exception&) {
            throw TraceFormatError(path + ":" + std::to_string(row) + ": bad domain index in '" + domain + "'");
        }
        if (kind == "package")
            sample.kind = DomainKind::package;
        else if (kind == "dram")
            sample.kind = DomainKind::dram;
        else
            throw TraceFormatError(path + ":" + std::to_string(row) + ": bad domain '" + domain + "'");
        if (sample.timestamp_ns < prev_ts) {
            throw TraceFormatError(path + ":" + std::to_string(row) + ": rows not sorted by timestamp");
        }
        prev_ts = sample.timestamp_ns;
        try {
            trace.append(sample);
        } catch (const Error& e) {
            throw TraceFormatError(path + ":" + std::to_string(row) + ": " + e.what());
        }
    }
    if (trace.empty()) throw TraceFormatError("replay trace has no samples: " + path);
    return trace;
}

std::unique_ptr<EnergySource> open_energy_source(const SourceConfig& config) {
    if (config.backend == SourceConfig::Backend::replay) {
        return std::make_unique<ReplaySource>(config.path);
    }
    std::string root = config.path.empty() ? kDefaultPowercapRoot : config.path;
    if (const char* env = std::getenv("ATLAS_POWERCAP_ROOT"); env != nullptr && *env != '\0') {
        root = env;
    }
    return std::make_unique<RaplSource>(root);
}

}  // namespace atlas
