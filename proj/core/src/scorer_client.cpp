#include "retrans/scorer_client.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "retrans/error.hpp"
#include "retrans/tokens.hpp"

namespace retrans {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void protocol_error(const std::string& what, std::string_view raw) {
  throw ProtocolError("scorer protocol error: " + what + "; raw line: " + std::string(raw));
}

}  // namespace

// --- messages ---------------------------------------------------------------

std::string ScorerRequest::to_json() const {
  ordered_json obj;
  obj["src"] = src;
  obj["tgt"] = tgt;
  obj["top"] = top;
  return obj.dump();
}

ScorerRequest ScorerRequest::parse(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    protocol_error(std::string("malformed request: ") + e.what(), line);
  }
  ScorerRequest req;
  try {
    req.src = obj.at("src").get<std::vector<std::string>>();
    req.tgt = obj.at("tgt").get<std::vector<std::string>>();
    req.top = obj.value("top", std::size_t{0});
  } catch (const json::exception& e) {
    protocol_error(std::string("bad request fields: ") + e.what(), line);
  }
  for (const auto* side : {&req.src, &req.tgt}) {
    for (const auto& t : *side) {
      if (!is_valid_token(t)) protocol_error("invalid token \"" + t + "\"", line);
    }
  }
  return req;
}

std::string ScorerResponse::to_json() const {
  ordered_json obj;
  ordered_json items_json = ordered_json::array();
  for (const auto& [token, logprob] : items) items_json.push_back(ordered_json::array({token, logprob}));
  obj["items"] = std::move(items_json);
  obj["eos"] = eos ? ordered_json(*eos) : ordered_json(nullptr);
  return obj.dump();
}

ScorerResponse ScorerResponse::parse(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    protocol_error(std::string("malformed JSON: ") + e.what(), line);
  }
  if (!obj.is_object() || !obj.contains("items") || !obj["items"].is_array() || !obj.contains("eos")) {
    protocol_error("expected {\"items\": [...], \"eos\": logprob}", line);
  }
  ScorerResponse resp;
  for (const auto& item : obj["items"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_number()) {
      protocol_error("each item must be [token, logprob]", line);
    }
    const auto token = item[0].get<std::string>();
    const double logprob = item[1].get<double>();
    if (!is_valid_token(token)) protocol_error("invalid token \"" + token + "\"", line);
    if (!std::isfinite(logprob)) protocol_error("non-finite logprob for \"" + token + "\"", line);
    if (!resp.items.empty() && logprob > resp.items.back().second) {
      protocol_error("items not sorted by descending logprob", line);
    }
    resp.items.emplace_back(token, logprob);
  }
  const json& eos = obj["eos"];
  if (!eos.is_null()) {
    if (!eos.is_number() || !std::isfinite(eos.get<double>())) protocol_error("bad \"eos\" logprob", line);
    resp.eos = eos.get<double>();
  }
  std::vector<std::string> seen;
  for (const auto& it : resp.items) seen.push_back(it.first);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) protocol_error("duplicate item", line);
  if (resp.items.empty() && !resp.eos) protocol_error("response carries no probability mass", line);
  return resp;
}

Distribution ScorerResponse::to_distribution() const {
  double top = eos ? *eos : -INFINITY;
  for (const auto& it : items) top = std::max(top, it.second);
  std::vector<TokenProb> weights;
  weights.reserve(items.size());
  for (const auto& [token, logprob] : items) weights.push_back({token, std::exp(logprob - top)});
  return Distribution::from_weights(std::move(weights), eos ? std::exp(*eos - top) : 0.0);
}

ScorerResponse ScorerResponse::from_distribution(const Distribution& dist, std::size_t top) {
  std::vector<TokenProb> entries;
  for (const auto& e : dist.tokens) {
    if (e.prob > 0.0) entries.push_back(e);
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const TokenProb& a, const TokenProb& b) { return a.prob > b.prob; });
  if (top > 0 && entries.size() > top) entries.resize(top);
  ScorerResponse resp;
  for (const auto& e : entries) resp.items.emplace_back(e.token, std::log(e.prob));
  if (dist.eos > 0.0) resp.eos = std::log(dist.eos);
  return resp;
}

void serve_model(const ScoringModel& model, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string reply;
    try {
      const ScorerRequest req = ScorerRequest::parse(line);
      reply = ScorerResponse::from_distribution(model.next_distribution(req.src, req.tgt), req.top)
                  .to_json();
    } catch (const Error& e) {
      reply = json{{"error", e.what()}}.dump();
    }
    out << reply << '\n' << std::flush;
  }
}

// --- child process ----------------------------------------------------------

struct ExternalScorerModel::Process {
  pid_t pid = -1;
  int fd = -1;
  std::string pending;
  bool broken = false;

  explicit Process(const std::string& command) {
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
      throw IoError(std::string("socketpair: ") + std::strerror(errno));
    }
    pid = ::fork();
    if (pid < 0) {
      ::close(sv[0]);
      ::close(sv[1]);
      throw IoError(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
      // Own process group, so a kill also reaches anything the shell spawned.
      ::setpgid(0, 0);
      ::dup2(sv[1], STDIN_FILENO);
      ::dup2(sv[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(sv[1]);
    fd = sv[0];
  }

  ~Process() {
    if (fd >= 0) {
      ::shutdown(fd, SHUT_WR);
      ::close(fd);
    }
    if (pid > 0) {
      int status = 0;
      for (int i = 0; i < 50; ++i) {
        if (::waitpid(pid, &status, WNOHANG) == pid) return;
        ::usleep(2000);
      }
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
    }
  }

  void send_line(const std::string& line) {
    std::string data = line + "\n";
    std::size_t sent = 0;
    while (sent < data.size()) {
      const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        broken = true;
        throw ProtocolError(std::string("scorer closed its input: ") + std::strerror(errno));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      const auto nl = pending.find('\n');
      if (nl != std::string::npos) {
        std::string line = pending.substr(0, nl);
        pending.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        broken = true;
        throw ProtocolError("scorer timed out after " + std::to_string(timeout.count()) + " ms");
      }
      pollfd p{fd, POLLIN, 0};
      const int r = ::poll(&p, 1, static_cast<int>(left.count()));
      if (r < 0) {
        if (errno == EINTR) continue;
        broken = true;
        throw ProtocolError(std::string("poll: ") + std::strerror(errno));
      }
      if (r == 0) continue;
      char buf[4096];
      const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        broken = true;
        throw ProtocolError(std::string("scorer read failed: ") + std::strerror(errno));
      }
      if (n == 0) {
        broken = true;
        throw ProtocolError("scorer exited before replying");
      }
      pending.append(buf, static_cast<std::size_t>(n));
    }
  }
};

ExternalScorerModel::ExternalScorerModel(std::string command, ScorerOptions options)
    : command_(std::move(command)), options_(options), process_(std::make_unique<Process>(command_)) {}

ExternalScorerModel::~ExternalScorerModel() = default;

std::string ExternalScorerModel::exchange(const std::string& request_line) const {
  std::lock_guard lock(mutex_);
  if (process_->broken) throw ProtocolError("scorer process unusable after an earlier failure");
  process_->send_line(request_line);
  return process_->read_line(options_.timeout);
}

Distribution ExternalScorerModel::next_distribution(std::span<const std::string> source_prefix,
                                                    std::span<const std::string> target_prefix) const {
  ScorerRequest req;
  req.src.assign(source_prefix.begin(), source_prefix.end());
  req.tgt.assign(target_prefix.begin(), target_prefix.end());
  req.top = options_.top;
  return ScorerResponse::parse(exchange(req.to_json())).to_distribution();
}

std::string ExternalScorerModel::describe() const { return "external(" + command_ + ")"; }

}  // namespace retrans
