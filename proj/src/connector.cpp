#include "atlas/connector.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "atlas/errors.hpp"
#include "atlas/units.hpp"

namespace atlas {

namespace {

std::int64_t ns_from_s(double seconds) { return static_cast<std::int64_t>(seconds * kNsPerSecond); }

StubBehavior stub_behavior_from_json(const nlohmann::json& obj) {
    StubBehavior behavior;
    behavior.duration_s = obj.value("duration_s", 0.001);
    behavior.read_bytes = obj.value("read_bytes", std::uint64_t{0});
    behavior.write_bytes = obj.value("write_bytes", std::uint64_t{0});
    if (obj.contains("row_count")) behavior.row_count = obj["row_count"].get<std::int64_t>();
    behavior.fail = obj.value("fail", false);
    if (behavior.duration_s <= 0) {
        throw ConfigError("stub duration_s must be positive (wall times must be nonzero)");
    }
    return behavior;
}

}  // namespace

StubConnector::StubConnector(StubConnectorConfig config) : config_(std::move(config)) {
    if (config_.default_behavior.duration_s <= 0) {
        throw ConfigError("stub duration_s must be positive");
    }
}

const StubBehavior& StubConnector::behavior_for(const std::string& query_id) const {
    auto it = config_.per_query.find(query_id);
    return it == config_.per_query.end() ? config_.default_behavior : it->second;
}

void StubConnector::probe(Clock& clock) {
    clock.sleep_for(ns_from_s(config_.probe_duration_s));
    if (config_.probe_duration_s > config_.probe_timeout_s) {
        throw ConnectorUnhealthy("stub health query exceeded " +
                                 std::to_string(config_.probe_timeout_s) + " s timeout");
    }
}

ExecutionResult StubConnector::execute(const QueryRequest& request, Clock& clock) {
    const StubBehavior& behavior = behavior_for(request.query_id);
    if (behavior.fail) {
        throw QueryFailed("stub configured to fail query '" + request.query_id + "'");
    }
    clock.sleep_for(ns_from_s(behavior.duration_s));
    ExecutionResult result;
    result.row_count = behavior.row_count;
    result.io = IoDelta{behavior.read_bytes, behavior.write_bytes};
    return result;
}

namespace {

struct SpawnResult {
    int exit_code = -1;
    IoDelta child_io;
    bool io_read = false;
    std::string stderr_tail;
};

// Fork/exec with an errno-reporting pipe; reads the child's /proc io after
// it exits but before it is reaped, so the counters are still present.
SpawnResult spawn_and_wait(const std::vector<std::string>& argv, std::int64_t timeout_ns) {
    int err_pipe[2];
    if (pipe2(err_pipe, O_CLOEXEC) != 0) throw QueryFailed("pipe2 failed");
    char stderr_path[] = "/tmp/atlas-stderr-XXXXXX";
    int stderr_fd = mkstemp(stderr_path);
    if (stderr_fd < 0) {
        close(err_pipe[0]);
        close(err_pipe[1]);
        throw QueryFailed("mkstemp failed");
    }

    std::vector<char*> c_argv;
    c_argv.reserve(argv.size() + 1);
    for (const auto& arg : argv) c_argv.push_back(const_cast<char*>(arg.c_str()));
    c_argv.push_back(nullptr);

    pid_t pid = fork();
    if (pid < 0) {
        close(err_pipe[0]);
        close(err_pipe[1]);
        close(stderr_fd);
        unlink(stderr_path);
        throw QueryFailed("fork failed");
    }
    if (pid == 0) {
        int devnull = open("/dev/null", O_WRONLY);
        if (devnull >= 0) dup2(devnull, STDOUT_FILENO);
        dup2(stderr_fd, STDERR_FILENO);
        execvp(c_argv[0], c_argv.data());
        int saved = errno;
        ssize_t ignored = write(err_pipe[1], &saved, sizeof saved);
        (void)ignored;
        _exit(127);
    }

    close(err_pipe[1]);
    close(stderr_fd);

    SpawnResult result;
    bool timed_out = false;
    auto deadline = std::chrono::steady_clock::now() + std::chrono::nanoseconds(
                                                           timeout_ns > 0 ? timeout_ns : INT64_MAX);
    siginfo_t info{};
    while (true) {
        info.si_pid = 0;
        int rc = waitid(P_PID, static_cast<id_t>(pid), &info, WEXITED | WNOWAIT | WNOHANG);
        if (rc == 0 && info.si_pid == pid) break;
        if (rc != 0 && errno != EINTR) break;
        if (timeout_ns > 0 && std::chrono::steady_clock::now() >= deadline) {
            kill(pid, SIGKILL);
            timed_out = true;
            waitid(P_PID, static_cast<id_t>(pid), &info, WEXITED | WNOWAIT);
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }

    try {
        IoCounters counters = snapshot_io(pid);
        result.child_io = IoDelta{counters.read_bytes, counters.write_bytes};
        result.io_read = true;
    } catch (const Error&) {
        // /proc entry unreadable for the zombie; io stays zero.
    }

    int status = 0;
    waitpid(pid, &status, 0);

    int exec_errno = 0;
    ssize_t n = read(err_pipe[0], &exec_errno, sizeof exec_errno);
    close(err_pipe[0]);

    {
        std::ifstream err_in(stderr_path);
        std::stringstream tail;
        tail << err_in.rdbuf();
        std::string text = tail.str();
        constexpr std::size_t kTailBytes = 2048;
        if (text.size() > kTailBytes) text = text.substr(text.size() - kTailBytes);
        result.stderr_tail = std::move(text);
    }
    unlink(stderr_path);

    if (n == static_cast<ssize_t>(sizeof exec_errno)) {
        throw ConnectorUnhealthy("cannot spawn '" + argv[0] + "': " + std::strerror(exec_errno));
    }
    if (timed_out) {
        result.exit_code = -1;
        return result;
    }
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);
    return result;
}

std::vector<std::string> tokenize_template(const std::string& text) {
    std::vector<std::string> tokens;
    std::stringstream ss(text);
    std::string token;
    while (ss >> token) tokens.push_back(token);
    if (tokens.empty()) throw ConfigError("exec connector command template is empty");
    return tokens;
}

std::vector<std::string> expand_template(const std::vector<std::string>& argv_template,
                                         const std::string& sql_file) {
    std::vector<std::string> argv;
    argv.reserve(argv_template.size());
    for (const auto& token : argv_template) {
        std::string expanded = token;
        std::size_t pos;
        while ((pos = expanded.find("{sql_file}")) != std::string::npos) {
            expanded.replace(pos, 10, sql_file);
        }
        argv.push_back(std::move(expanded));
    }
    return argv;
}

}  // namespace

ExecConnector::ExecConnector(ExecConnectorConfig config)
    : config_(std::move(config)), argv_template_(tokenize_template(config_.command_template)) {}

std::vector<int> ExecConnector::io_pids() const {
    if (config_.pid_file.empty()) return {};
    std::ifstream in(config_.pid_file);
    int pid = 0;
    if (!(in >> pid) || pid <= 0) {
        throw ConfigError("cannot read server pid from " + config_.pid_file);
    }
    return {pid};
}

void ExecConnector::probe(Clock&) {
    char sql_path[] = "/tmp/atlas-probe-XXXXXX";
    int fd = mkstemp(sql_path);
    if (fd < 0) throw ConnectorUnhealthy("cannot create health query file");
    const char* health_sql = "SELECT 1;\n";
    ssize_t ignored = write(fd, health_sql, std::strlen(health_sql));
    (void)ignored;
    close(fd);

    QueryRequest request;
    request.query_id = "health";
    request.sql_text = health_sql;
    request.sql_file = sql_path;
    try {
        std::vector<std::string> argv = expand_template(argv_template_, request.sql_file);
        SpawnResult spawned = spawn_and_wait(argv, ns_from_s(config_.probe_timeout_s));
        unlink(sql_path);
        if (spawned.exit_code == -1) {
            throw ConnectorUnhealthy("health query timed out after " +
                                     std::to_string(config_.probe_timeout_s) + " s");
        }
        if (spawned.exit_code != 0) {
            throw ConnectorUnhealthy("health query exited with code " +
                                     std::to_string(spawned.exit_code) + ": " + spawned.stderr_tail);
        }
    } catch (...) {
        unlink(sql_path);
        throw;
    }
}

ExecutionResult ExecConnector::execute(const QueryRequest& request, Clock&) {
    if (request.sql_file.empty()) {
        throw QueryFailed("exec connector needs a query file for '" + request.query_id + "'");
    }
    std::vector<std::string> argv = expand_template(argv_template_, request.sql_file);
    SpawnResult spawned;
    try {
        spawned = spawn_and_wait(argv, 0);
    } catch (const ConnectorUnhealthy& e) {
        throw QueryFailed(std::string("query '") + request.query_id + "': " + e.what());
    }
    if (spawned.exit_code != 0) {
        throw QueryFailed("query '" + request.query_id + "' exited with code " +
                          std::to_string(spawned.exit_code) + ": " + spawned.stderr_tail);
    }
    ExecutionResult result;
    if (spawned.io_read) result.io = spawned.child_io;
    return result;
}

std::unique_ptr<Connector> make_connector(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
        throw ConfigError("connector spec needs a string 'kind' field");
    }
    const std::string kind = spec["kind"].get<std::string>();
    if (kind == "stub") {
        StubConnectorConfig config;
        if (spec.contains("default")) config.default_behavior = stub_behavior_from_json(spec["default"]);
        if (spec.contains("per_query")) {
            for (const auto& [query_id, behavior] : spec["per_query"].items()) {
                config.per_query[query_id] = stub_behavior_from_json(behavior);
            }
        }
        config.probe_duration_s = spec.value("probe_duration_s", 0.0);
        config.probe_timeout_s = spec.value("probe_timeout_s", 1.0);
        return std::make_unique<StubConnector>(std::move(config));
    }
    if (kind == "exec") {
        ExecConnectorConfig config;
        if (!spec.contains("command") || !spec["command"].is_string()) {
            throw ConfigError("exec connector needs a string 'command' template");
        }
        config.command_template = spec["command"].get<std::string>();
        config.probe_timeout_s = spec.value("probe_timeout_s", 10.0);
        config.pid_file = spec.value("pid_file", std::string());
        return std::make_unique<ExecConnector>(std::move(config));
    }
    throw ConfigError("unknown connector kind '" + kind + "' (expected stub or exec)");
}

}  // namespace atlas
