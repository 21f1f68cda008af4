#include "itest/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <system_error>

extern char** environ;

namespace itest {

namespace {

[[noreturn]] void throw_errno(const char* what, int err = errno) {
  throw std::system_error(err, std::generic_category(), what);
}

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Fd& operator=(Fd&& other) noexcept {
    if (this != &other) {
      reset();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }
  ~Fd() { reset(); }

  int get() const { return fd_; }
  explicit operator bool() const { return fd_ >= 0; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

std::pair<Fd, Fd> make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw_errno("pipe2");
  return {Fd(fds[0]), Fd(fds[1])};
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::vector<std::string> build_environment(const std::vector<std::pair<std::string, std::string>>& extra) {
  std::vector<std::string> env;
  for (char** e = environ; e && *e; ++e) {
    std::string_view entry(*e);
    const auto key = entry.substr(0, entry.find('='));
    bool overridden = false;
    for (const auto& [k, v] : extra) overridden = overridden || k == key;
    if (!overridden) env.emplace_back(entry);
  }
  for (const auto& [k, v] : extra) env.push_back(k + "=" + v);
  return env;
}

std::vector<char*> c_strings(std::vector<std::string>& strings) {
  std::vector<char*> out;
  for (auto& s : strings) out.push_back(s.data());
  out.push_back(nullptr);
  return out;
}

class SpawnAttributes {
 public:
  SpawnAttributes() {
    if (int rc = posix_spawn_file_actions_init(&actions_); rc != 0) throw_errno("posix_spawn_file_actions_init", rc);
    if (int rc = posix_spawnattr_init(&attr_); rc != 0) {
      posix_spawn_file_actions_destroy(&actions_);
      throw_errno("posix_spawnattr_init", rc);
    }
  }
  ~SpawnAttributes() {
    posix_spawnattr_destroy(&attr_);
    posix_spawn_file_actions_destroy(&actions_);
  }
  SpawnAttributes(const SpawnAttributes&) = delete;
  SpawnAttributes& operator=(const SpawnAttributes&) = delete;

  posix_spawn_file_actions_t* actions() { return &actions_; }
  posix_spawnattr_t* attr() { return &attr_; }

 private:
  posix_spawn_file_actions_t actions_;
  posix_spawnattr_t attr_;
};

}  // namespace

std::optional<std::filesystem::path> find_executable(std::string_view name) {
  if (name.empty()) return std::nullopt;
  auto runnable = [](const std::filesystem::path& p) {
    std::error_code ec;
    return std::filesystem::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string_view::npos) {
    std::filesystem::path p(name);
    if (runnable(p)) return p;
    return std::nullopt;
  }
  const char* path_env = std::getenv("PATH");
  std::string_view dirs = path_env ? path_env : "/usr/local/bin:/usr/bin:/bin";
  while (true) {
    const auto colon = dirs.find(':');
    const auto dir = dirs.substr(0, colon);
    std::filesystem::path candidate = std::filesystem::path(dir.empty() ? "." : std::string(dir)) / std::string(name);
    if (runnable(candidate)) return candidate;
    if (colon == std::string_view::npos) break;
    dirs.remove_prefix(colon + 1);
  }
  return std::nullopt;
}

ProcessResult run_process(const ProcessSpec& spec) {
  ignore_sigpipe();

  auto [in_read, in_write] = make_pipe();
  auto [out_read, out_write] = make_pipe();
  auto [err_read, err_write] = make_pipe();

  SpawnAttributes sa;
  posix_spawn_file_actions_adddup2(sa.actions(), in_read.get(), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(sa.actions(), out_write.get(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(sa.actions(), err_write.get(), STDERR_FILENO);
  if (!spec.cwd.empty()) posix_spawn_file_actions_addchdir_np(sa.actions(), spec.cwd.c_str());
  posix_spawnattr_setflags(sa.attr(), POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(sa.attr(), 0);

  std::vector<std::string> argv_strings{spec.executable.string()};
  argv_strings.insert(argv_strings.end(), spec.args.begin(), spec.args.end());
  auto argv = c_strings(argv_strings);
  auto env_strings = build_environment(spec.env);
  auto envp = c_strings(env_strings);

  const auto started = std::chrono::steady_clock::now();
  pid_t pid = 0;
  if (int rc = posix_spawn(&pid, spec.executable.c_str(), sa.actions(), sa.attr(), argv.data(), envp.data());
      rc != 0) {
    throw_errno("posix_spawn", rc);
  }
  in_read.reset();
  out_write.reset();
  err_write.reset();
  if (spec.stdin_data.empty()) in_write.reset();
  if (in_write) ::fcntl(in_write.get(), F_SETFL, ::fcntl(in_write.get(), F_GETFL) | O_NONBLOCK);

  ProcessResult result;
  std::size_t written = 0;
  const bool has_deadline = spec.timeout.count() > 0;
  const auto deadline = started + spec.timeout;
  bool killed = false;
  char buf[65536];

  while (out_read || err_read) {
    std::vector<pollfd> fds;
    if (out_read) fds.push_back({out_read.get(), POLLIN, 0});
    if (err_read) fds.push_back({err_read.get(), POLLIN, 0});
    if (in_write) fds.push_back({in_write.get(), POLLOUT, 0});

    int wait_ms = -1;
    if (has_deadline && !killed) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      wait_ms = static_cast<int>(std::max<long long>(0, left.count()));
    }
    const int n = ::poll(fds.data(), fds.size(), wait_ms);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("poll");
    }
    if (n == 0) {
      // deadline passed: kill the group, keep draining what was written
      ::kill(-pid, SIGKILL);
      killed = true;
      result.timed_out = true;
      in_write.reset();
      continue;
    }
    for (const pollfd& p : fds) {
      if (p.revents == 0) continue;
      if (in_write && p.fd == in_write.get()) {
        const ssize_t w = ::write(p.fd, spec.stdin_data.data() + written, spec.stdin_data.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        if (w < 0 && errno != EAGAIN && errno != EINTR) in_write.reset();
        if (written == spec.stdin_data.size()) in_write.reset();
        continue;
      }
      Fd& fd = (out_read && p.fd == out_read.get()) ? out_read : err_read;
      std::string& sink = (&fd == &out_read) ? result.out : result.err;
      const ssize_t r = ::read(p.fd, buf, sizeof buf);
      if (r > 0) {
        sink.append(buf, static_cast<std::size_t>(r));
      } else if (r == 0 || (errno != EAGAIN && errno != EINTR)) {
        fd.reset();
      }
    }
  }
  in_write.reset();

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw_errno("waitpid");
  }

  result.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  if (WIFSIGNALED(status)) result.term_signal = WTERMSIG(status);
  return result;
}

}  // namespace itest
