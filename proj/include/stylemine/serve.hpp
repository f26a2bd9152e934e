#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "stylemine/embed.hpp"
#include "stylemine/reward.hpp"
#include "stylemine/scenegraph.hpp"

namespace stylemine {

inline constexpr int kProtocolVersion = 1;

// Newline-delimited json reward service. Each request line yields exactly one
// response line carrying the same req_id; errors are reported in-band.
//
// Request:  {"v":1, "req_id":..., "mode":"j_il"|"advantage",
//            "candidate":P, "expert":P, "amateurs":[P...],
//            "sample":P, "greedy":P, "sample_j":x, "greedy_j":x,
//            "params":{alpha, delta, j_safe, aggregation, exist_mode}}
// Payload P: {"text", "id", "emb":[...], "entities":[...], "triplets":[...]}
//            precomputed emb/entities win over text.
class RewardService {
 public:
  RewardService(const EmbeddingProvider& provider, RewardParams defaults,
                const Stopwords& stopwords = default_stopwords());

  // Never throws.
  std::string handle_line(std::string_view line) const;

  // Reads requests until EOF and answers them on `workers` threads. Response
  // order follows completion, not input.
  void serve_stream(std::istream& in, std::ostream& out,
                    std::size_t workers) const;

  // Listens on 127.0.0.1:port (0 picks a free port, reported through
  // `bound_port`). Returns once `stop` becomes true.
  void serve_tcp(std::uint16_t port, std::size_t workers,
                 const std::atomic<bool>& stop,
                 std::atomic<int>* bound_port = nullptr) const;

 private:
  const EmbeddingProvider& provider_;
  RewardParams defaults_;
  const Stopwords& stopwords_;
};

}  // namespace stylemine
