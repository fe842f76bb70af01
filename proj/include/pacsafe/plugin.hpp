#pragma once

#include <errno.h>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <mutex>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>

#include "pacsafe/errors.hpp"
#include "pacsafe/log.hpp"
#include "pacsafe/safe_set.hpp"
#include "pacsafe/system.hpp"

namespace pacsafe {

// Black-box system served by an external child process speaking
// line-delimited JSON on its standard input/output:
//
//   {"op":"info"}                        -> {"n":int,"n_d":int,"safe_set":{...} [,"name":str]}
//   {"op":"step","x":[...],"d":[...]}    -> {"x_next":[...]}
//   {"op":"sample_d","seed_hint":u64}    -> {"d":[...]}
//
// Any timeout, EOF, or malformed reply aborts the run with PluginError and
// poisons the connection (the child is killed), because a desynchronized
// line protocol cannot be trusted afterwards.  Requests are serialized, so
// the system object can be shared across validation workers.
class PluginSystem final : public BlackBoxSystem {
 public:
  explicit PluginSystem(const std::string& command_line,
                        double timeout_seconds = 5.0)
      : command_(command_line), timeout_seconds_(timeout_seconds) {
    if (command_line.empty()) throw ConfigError("plugin command is empty");
    if (!(timeout_seconds > 0)) {
      throw ConfigError("plugin timeout must be positive");
    }
    // A dying child must surface as EPIPE on write, not kill this process.
    static std::once_flag sigpipe_once;
    std::call_once(sigpipe_once, [] { ::signal(SIGPIPE, SIG_IGN); });
    spawn();
    nlohmann::json info = request({{"op", "info"}});
    try {
      state_dim_ = info.at("n").get<int>();
      disturbance_dim_ = info.at("n_d").get<int>();
      safe_set_ = SafeSet::from_json(info.at("safe_set"));
      name_ = info.value("name", std::string("plugin"));
    } catch (const PluginError&) {
      throw;
    } catch (const std::exception& e) {
      shutdown();
      throw PluginError(std::string("plugin info reply is unusable: ") +
                        e.what());
    }
    if (state_dim_ < 1 || disturbance_dim_ < 0) {
      shutdown();
      throw PluginError("plugin reported nonsensical dimensions");
    }
    if (safe_set_.dim() != state_dim_) {
      shutdown();
      throw PluginError("plugin safe set dimension does not match n");
    }
  }

  ~PluginSystem() override { shutdown(); }
  PluginSystem(const PluginSystem&) = delete;
  PluginSystem& operator=(const PluginSystem&) = delete;

  const std::string& name() const override { return name_; }
  int state_dim() const override { return state_dim_; }
  int disturbance_dim() const override { return disturbance_dim_; }
  const SafeSet& safe_set() const override { return safe_set_; }

  StateVector step(const StateVector& x,
                   const DisturbanceVector& d) const override {
    require_dim(x.size(), static_cast<std::size_t>(state_dim_), "plugin x");
    require_dim(d.size(), static_cast<std::size_t>(disturbance_dim_),
                "plugin d");
    nlohmann::json reply = request({{"op", "step"}, {"x", x}, {"d", d}});
    StateVector next = extract_vector(reply, "x_next",
                                      static_cast<std::size_t>(state_dim_));
    return next;
  }

  DisturbanceVector sample_disturbance(std::uint64_t seed_hint) const override {
    nlohmann::json reply =
        request({{"op", "sample_d"}, {"seed_hint", seed_hint}});
    return extract_vector(reply, "d",
                          static_cast<std::size_t>(disturbance_dim_));
  }

 private:
  void spawn() {
    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
      throw PluginError("could not create plugin pipes");
    }
    const pid_t pid = ::fork();
    if (pid < 0) throw PluginError("could not fork plugin process");
    if (pid == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command_.c_str(),
              static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    child_pid_ = pid;
    child_stdin_ = to_child[1];
    child_stdout_ = from_child[0];
    log_info("plugin started: " + command_);
  }

  void shutdown() {
    std::lock_guard<std::mutex> lk(mu_);
    shutdown_locked();
  }

  void shutdown_locked() {
    if (child_pid_ < 0) return;
    if (child_stdin_ >= 0) ::close(child_stdin_);
    if (child_stdout_ >= 0) ::close(child_stdout_);
    child_stdin_ = child_stdout_ = -1;
    // Give the child a short grace period after EOF, then make sure.
    for (int i = 0; i < 20; ++i) {
      if (::waitpid(child_pid_, nullptr, WNOHANG) != 0) {
        child_pid_ = -1;
        return;
      }
      ::usleep(10000);
    }
    ::kill(child_pid_, SIGKILL);
    ::waitpid(child_pid_, nullptr, 0);
    child_pid_ = -1;
  }

  [[noreturn]] void fail_locked(const std::string& why) const {
    const_cast<PluginSystem*>(this)->shutdown_locked();
    throw PluginError(why);
  }

  nlohmann::json request(const nlohmann::json& req) const {
    std::lock_guard<std::mutex> lk(mu_);
    if (child_pid_ < 0) {
      throw PluginError("plugin process is not running (earlier failure?)");
    }
    std::string line = req.dump();
    line.push_back('\n');
    std::size_t off = 0;
    while (off < line.size()) {
      const ssize_t w =
          ::write(child_stdin_, line.data() + off, line.size() - off);
      if (w < 0) {
        if (errno == EINTR) continue;
        fail_locked("plugin stopped reading requests (write failed)");
      }
      off += static_cast<std::size_t>(w);
    }

    const auto deadline =
        std::chrono::steady_clock::now() +
        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(timeout_seconds_));
    std::string reply;
    for (;;) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        reply = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        break;
      }
      const auto now = std::chrono::steady_clock::now();
      if (now >= deadline) {
        fail_locked("plugin reply timed out after " +
                    std::to_string(timeout_seconds_) + "s");
      }
      const int wait_ms = static_cast<int>(
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
              .count() +
          1);
      struct pollfd pfd{child_stdout_, POLLIN, 0};
      const int pr = ::poll(&pfd, 1, wait_ms);
      if (pr < 0) {
        if (errno == EINTR) continue;
        fail_locked("poll on plugin output failed");
      }
      if (pr == 0) {
        fail_locked("plugin reply timed out after " +
                    std::to_string(timeout_seconds_) + "s");
      }
      char chunk[4096];
      const ssize_t r = ::read(child_stdout_, chunk, sizeof chunk);
      if (r < 0) {
        if (errno == EINTR) continue;
        fail_locked("read from plugin failed");
      }
      if (r == 0) {
        fail_locked("plugin closed its output (crashed or exited)");
      }
      buffer_.append(chunk, static_cast<std::size_t>(r));
    }

    nlohmann::json parsed = nlohmann::json::parse(reply, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      fail_locked("plugin reply is not a JSON object: " +
                  reply.substr(0, 200));
    }
    if (parsed.contains("error")) {
      fail_locked("plugin reported an error: " +
                  parsed.at("error").dump().substr(0, 500));
    }
    return parsed;
  }

  StateVector extract_vector(const nlohmann::json& reply, const char* key,
                             std::size_t expect) const {
    std::lock_guard<std::mutex> lk(mu_);
    if (!reply.contains(key) || !reply.at(key).is_array()) {
      fail_locked(std::string("plugin reply lacks array field '") + key + "'");
    }
    StateVector v;
    try {
      v = reply.at(key).get<StateVector>();
    } catch (const std::exception&) {
      fail_locked(std::string("plugin field '") + key +
                  "' is not a numeric array");
    }
    if (v.size() != expect) {
      fail_locked(std::string("plugin field '") + key + "' has size " +
                  std::to_string(v.size()) + ", expected " +
                  std::to_string(expect));
    }
    for (double c : v) {
      if (!std::isfinite(c)) {
        fail_locked(std::string("plugin field '") + key +
                    "' contains a non-finite value");
      }
    }
    return v;
  }

  std::string command_;
  double timeout_seconds_ = 5.0;
  std::string name_ = "plugin";
  int state_dim_ = 0;
  int disturbance_dim_ = 0;
  SafeSet safe_set_ = SafeSet::box({0.0}, {1.0});

  mutable std::mutex mu_;
  mutable std::string buffer_;
  pid_t child_pid_ = -1;
  int child_stdin_ = -1;
  int child_stdout_ = -1;
};

}  // namespace pacsafe
