#include "stylemine/serve.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <deque>
#include <functional>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "stylemine/error.hpp"
#include "stylemine/parallel.hpp"
#include "stylemine/tokenize.hpp"

namespace stylemine {
namespace {

using nlohmann::json;

// Raised for a request that parsed but is semantically invalid.
struct RequestError {
  std::string message;
};

class JobQueue {
 public:
  void push(std::function<void()> job) {
    {
      std::lock_guard lock(mu_);
      jobs_.push_back(std::move(job));
    }
    cv_.notify_one();
  }

  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  // Returns false once closed and drained.
  bool pop(std::function<void()>& job) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return closed_ || !jobs_.empty(); });
    if (jobs_.empty()) return false;
    job = std::move(jobs_.front());
    jobs_.pop_front();
    return true;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> jobs_;
  bool closed_ = false;
};

class WorkerPool {
 public:
  explicit WorkerPool(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      threads_.emplace_back([this] {
        std::function<void()> job;
        while (queue_.pop(job)) job();
      });
    }
  }
  ~WorkerPool() { join(); }

  void submit(std::function<void()> job) { queue_.push(std::move(job)); }
  void join() {
    queue_.close();
    for (auto& t : threads_) {
      if (t.joinable()) t.join();
    }
  }

 private:
  JobQueue queue_;
  std::vector<std::thread> threads_;
};

RewardParams merge_params(const RewardParams& defaults, const json& j) {
  RewardParams p = defaults;
  if (j.is_null()) return p;
  if (!j.is_object()) throw RequestError{"'params' must be an object"};
  for (const auto& [key, value] : j.items()) {
    if (key == "alpha") {
      p.alpha = value.get<double>();
    } else if (key == "delta") {
      p.delta = value.get<double>();
    } else if (key == "j_safe") {
      p.j_safe = value.get<double>();
    } else if (key == "aggregation" || key == "amateur_aggregation") {
      p.amateur_aggregation = parse_aggregation(value.get<std::string>());
    } else if (key == "exist_mode") {
      p.exist_mode = parse_exist_mode(value.get<std::string>());
    } else {
      throw RequestError{"unknown param '" + key + "'"};
    }
  }
  p.validate();
  return p;
}

json distance_json(const DistanceBreakdown& d) {
  return {{"d_sem", d.d_sem},
          {"d_order", d.d_order},
          {"d_exist", d.d_exist},
          {"d_psv", d.d_psv},
          {"psi", d.psi}};
}

json breakdown_json(const RewardBreakdown& r) {
  json j = distance_json(r.expert);
  json amateurs = json::array();
  for (const auto& a : r.amateurs) amateurs.push_back(distance_json(a));
  j["amateurs"] = std::move(amateurs);
  j["psi_pos"] = r.psi_pos;
  j["psi_neg"] = r.psi_neg;
  j["j_il"] = r.j_il;
  j["no_amateurs"] = r.no_amateurs;
  return j;
}

json error_response(const json& req_id, const std::string& message) {
  return {{"v", kProtocolVersion}, {"req_id", req_id}, {"error", message}};
}

}  // namespace

RewardService::RewardService(const EmbeddingProvider& provider,
                             RewardParams defaults, const Stopwords& stopwords)
    : provider_(provider), defaults_(defaults), stopwords_(stopwords) {
  defaults_.validate();
}

std::string RewardService::handle_line(std::string_view line) const {
  json request;
  try {
    request = json::parse(line);
  } catch (const json::parse_error&) {
    return error_response(nullptr, "parse").dump();
  }
  if (!request.is_object()) return error_response(nullptr, "parse").dump();
  const json req_id = request.contains("req_id") ? request["req_id"] : json();

  auto trajectory = [&](const json& payload, const char* name) {
    if (!payload.is_object()) {
      throw RequestError{std::string("'") + name + "' must be an object"};
    }
    Sentence s;
    s.id = payload.value("id", std::string());
    const bool has_text = payload.contains("text") && payload["text"].is_string();
    if (has_text) {
      s.text = payload["text"].get<std::string>();
      s.tokens = tokenize(s.text);
    }
    std::optional<EmbeddingVector> emb;
    if (payload.contains("emb")) {
      emb = EmbeddingVector(payload["emb"].get<std::vector<double>>());
    } else if (has_text) {
      emb = provider_.embed(s);
    } else {
      throw RequestError{std::string("'") + name + "' needs 'emb' or 'text'"};
    }
    EntityProfile profile;
    if (payload.contains("entities")) {
      s.entities = payload["entities"].get<std::vector<std::string>>();
      profile = profile_sentence(s, stopwords_);
    } else if (payload.contains("triplets")) {
      std::vector<Triplet> triplets;
      for (const auto& t : payload["triplets"]) {
        const auto parts = t.get<std::vector<std::string>>();
        if (parts.size() < 2 || parts.size() > 3 || parts[0].empty()) {
          throw RequestError{std::string("'") + name + "': bad triplet"};
        }
        triplets.push_back({parts[0], parts[1], parts.size() == 3 ? parts[2] : ""});
      }
      profile = profile_from_triplets(s, triplets);
    } else {
      profile = extract_entities_heuristic(s, stopwords_);
    }
    return Trajectory{std::move(*emb), std::move(profile)};
  };

  auto field = [&](const char* name) -> const json& {
    if (!request.contains(name)) {
      throw RequestError{std::string("missing field '") + name + "'"};
    }
    return request[name];
  };

  try {
    if (request.contains("v") && request["v"] != kProtocolVersion) {
      throw RequestError{"unsupported protocol version"};
    }
    const std::string mode = request.value("mode", std::string("j_il"));
    const RewardParams params =
        merge_params(defaults_, request.contains("params") ? request["params"] : json());

    auto demonstrations = [&]() {
      Trajectory expert = trajectory(field("expert"), "expert");
      std::vector<Trajectory> amateurs;
      const json& list = field("amateurs");
      if (!list.is_array()) throw RequestError{"'amateurs' must be an array"};
      for (const auto& a : list) amateurs.push_back(trajectory(a, "amateur"));
      return std::make_pair(std::move(expert), std::move(amateurs));
    };

    json response{{"v", kProtocolVersion}, {"req_id", req_id}, {"mode", mode}};
    if (mode == "j_il") {
      const auto candidate = trajectory(field("candidate"), "candidate");
      const auto [expert, amateurs] = demonstrations();
      const auto r = j_il(candidate, expert, amateurs, params);
      response.update(breakdown_json(r));
      response["advantage"] = nullptr;
      response["skipped"] = false;
    } else if (mode == "advantage") {
      std::optional<double> greedy_j;
      std::optional<double> sample_j;
      if (request.contains("greedy_j")) greedy_j = request["greedy_j"].get<double>();
      if (request.contains("sample_j")) sample_j = request["sample_j"].get<double>();
      std::optional<std::pair<Trajectory, std::vector<Trajectory>>> demos;
      if (!greedy_j) {
        demos = demonstrations();
        const auto r = j_il(trajectory(field("greedy"), "greedy"), demos->first,
                            demos->second, params);
        greedy_j = r.j_il;
        response["greedy"] = breakdown_json(r);
      }
      if (*greedy_j < 0.0) throw RequestError{"greedy_j must be >= 0"};
      const bool skip = *greedy_j <= params.j_safe;
      if (!sample_j && !skip) {
        if (!demos) demos = demonstrations();
        const auto r = j_il(trajectory(field("sample"), "sample"), demos->first,
                            demos->second, params);
        sample_j = r.j_il;
        response["sample"] = breakdown_json(r);
      }
      if (sample_j && *sample_j < 0.0) throw RequestError{"sample_j must be >= 0"};
      const Advantage adv = advantage(sample_j.value_or(0.0), *greedy_j, params);
      response["greedy_j"] = *greedy_j;
      response["sample_j"] = sample_j ? json(*sample_j) : json();
      response["advantage"] = adv.advantage ? json(*adv.advantage) : json();
      response["skipped"] = adv.skipped;
    } else {
      throw RequestError{"unknown mode '" + mode + "'"};
    }
    return response.dump();
  } catch (const RequestError& e) {
    return error_response(req_id, e.message).dump();
  } catch (const ProviderError& e) {
    return error_response(req_id, std::string("provider: ") + e.what()).dump();
  } catch (const std::exception& e) {
    return error_response(req_id, e.what()).dump();
  }
}

void RewardService::serve_stream(std::istream& in, std::ostream& out,
                                 std::size_t workers) const {
  std::mutex out_mu;
  WorkerPool pool(resolve_workers(workers));
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    pool.submit([this, &out, &out_mu, line = std::move(line)] {
      const std::string response = handle_line(line);
      std::lock_guard lock(out_mu);
      out << response << '\n';
      out.flush();
    });
  }
  pool.join();
}

namespace {

struct Connection {
  explicit Connection(int fd) : fd(fd) {}
  ~Connection() { ::close(fd); }

  void send_line(const std::string& s) {
    std::lock_guard lock(mu);
    std::string data = s + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
      if (n <= 0) return;
      off += static_cast<std::size_t>(n);
    }
  }

  int fd;
  std::mutex mu;
};

}  // namespace

void RewardService::serve_tcp(std::uint16_t port, std::size_t workers,
                              const std::atomic<bool>& stop,
                              std::atomic<int>* bound_port) const {
  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw std::runtime_error("socket() failed");
  const int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
      ::listen(listener, 64) < 0) {
    ::close(listener);
    throw std::runtime_error("cannot listen on port " + std::to_string(port));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (bound_port != nullptr) bound_port->store(ntohs(addr.sin_port));

  WorkerPool pool(resolve_workers(workers));
  std::vector<std::thread> readers;
  while (!stop.load()) {
    pollfd pfd{listener, POLLIN, 0};
    if (::poll(&pfd, 1, 50) <= 0) continue;
    const int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) continue;
    auto conn = std::make_shared<Connection>(fd);
    readers.emplace_back([this, conn, &pool, &stop] {
      std::string buffer;
      char chunk[4096];
      while (!stop.load()) {
        pollfd p{conn->fd, POLLIN, 0};
        if (::poll(&p, 1, 50) <= 0) continue;
        const ssize_t n = ::recv(conn->fd, chunk, sizeof(chunk), 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t nl;
        while ((nl = buffer.find('\n')) != std::string::npos) {
          std::string line = buffer.substr(0, nl);
          buffer.erase(0, nl + 1);
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          pool.submit([this, conn, line = std::move(line)] {
            conn->send_line(handle_line(line));
          });
        }
      }
    });
  }
  for (auto& t : readers) t.join();
  pool.join();
  ::close(listener);
}

}  // namespace stylemine
