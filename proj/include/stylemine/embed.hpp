#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stylemine/corpus.hpp"

namespace stylemine {

class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  // Throws InputError on empty or non-finite input.
  explicit EmbeddingVector(std::vector<double> values, bool normalized = false);

  static EmbeddingVector normalized_from(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  bool normalized() const { return normalized_; }
  double norm() const;

  EmbeddingVector operator-() const;
  bool operator==(const EmbeddingVector& other) const = default;

 private:
  std::vector<double> values_;
  bool normalized_ = false;
};

// dot(a,b) / (|a||b|). Throws InputError on dim mismatch or a zero vector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

struct ScoredId {
  std::string id;
  double cosine = 0.0;
};

// Ranks by cosine descending, ties by ascending id.
bool ranks_before(const ScoredId& a, const ScoredId& b);

// Exact top-k against the pool, length min(k, |pool|).
std::vector<ScoredId> top_k(
    const EmbeddingVector& query,
    std::span<const std::pair<std::string, EmbeddingVector>> pool,
    std::size_t k);

enum class ProviderKind { kFile, kDeterministicTest, kRemote };

ProviderKind parse_provider_kind(std::string_view name);
std::string to_string(ProviderKind kind);

struct ProviderConfig {
  ProviderKind kind = ProviderKind::kDeterministicTest;
  std::size_t dim = 128;
  // Embedding file path (file) or endpoint URL (remote).
  std::string source;
  std::chrono::milliseconds timeout{10000};
  int retries = 3;
};

// Thread-safe: implementations may be shared across workers.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual ProviderKind kind() const = 0;
  virtual std::size_t dim() const = 0;
  virtual EmbeddingVector embed(const Sentence& sentence) const = 0;
  // Defaults to one embed() call per sentence.
  virtual std::vector<EmbeddingVector> embed_batch(
      std::span<const Sentence> sentences) const;
};

EmbeddingVector get_embedding(const EmbeddingProvider& provider,
                              const Sentence& sentence);

// Feature-hashed bag of normalized tokens projected to `dim` dense
// pseudo-random coordinates, L2-normalized. Stable across runs and platforms.
class HashingEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashingEmbeddingProvider(std::size_t dim);

  ProviderKind kind() const override {
    return ProviderKind::kDeterministicTest;
  }
  std::size_t dim() const override { return dim_; }
  EmbeddingVector embed(const Sentence& sentence) const override;

  EmbeddingVector embed_tokens(const std::vector<std::string>& lemmas) const;

 private:
  std::size_t dim_;
};

// json-lines {id, vector:[...]}, L2-normalized on load.
class FileEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit FileEmbeddingProvider(const std::filesystem::path& path);
  static FileEmbeddingProvider from_string(std::string_view content,
                                           const std::string& origin);

  ProviderKind kind() const override { return ProviderKind::kFile; }
  std::size_t dim() const override { return dim_; }
  EmbeddingVector embed(const Sentence& sentence) const override;
  std::size_t size() const { return vectors_.size(); }

 private:
  FileEmbeddingProvider() = default;
  void parse(std::string_view content, const std::string& origin);

  std::size_t dim_ = 0;
  std::unordered_map<std::string, EmbeddingVector> vectors_;
};

// HTTP POST {texts:[...]} -> {vectors:[[...]]}. Results are cached by text.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  RemoteEmbeddingProvider(std::string url, std::size_t dim,
                          std::chrono::milliseconds timeout, int retries);

  ProviderKind kind() const override { return ProviderKind::kRemote; }
  std::size_t dim() const override { return dim_; }
  EmbeddingVector embed(const Sentence& sentence) const override;
  std::vector<EmbeddingVector> embed_batch(
      std::span<const Sentence> sentences) const override;

  std::size_t requests_made() const;

 private:
  std::vector<EmbeddingVector> request(
      const std::vector<std::string>& texts) const;

  std::string scheme_host_port_;
  std::string path_;
  std::size_t dim_;
  std::chrono::milliseconds timeout_;
  int retries_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, EmbeddingVector> cache_;
  mutable std::size_t requests_ = 0;
};

// URL falls back to $STYLEMINE_EMBED_URL for remote providers.
std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& config);

// Writes json-lines {id, vector} for every sentence.
std::string embeddings_to_json_lines(const Corpus& corpus,
                                     const EmbeddingProvider& provider);

}  // namespace stylemine
