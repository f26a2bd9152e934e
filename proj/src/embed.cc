#include "stylemine/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "stylemine/error.hpp"
#include "stylemine/tokenize.hpp"

namespace stylemine {
namespace {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> values, bool normalized)
    : values_(std::move(values)), normalized_(normalized) {
  if (values_.empty()) throw InputError("embedding has no dimensions");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InputError("embedding has a non-finite value");
  }
}

EmbeddingVector EmbeddingVector::normalized_from(std::vector<double> values) {
  EmbeddingVector v(std::move(values));
  const double n = v.norm();
  if (n == 0.0) throw InputError("cannot normalize a zero vector");
  for (double& x : v.values_) x /= n;
  v.normalized_ = true;
  return v;
}

double EmbeddingVector::norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

EmbeddingVector EmbeddingVector::operator-() const {
  EmbeddingVector out = *this;
  for (double& v : out.values_) v = -v;
  return out;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw InputError("dimension mismatch: " + std::to_string(a.dim()) +
                     " vs " + std::to_string(b.dim()));
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw InputError("cosine of a zero vector");
  double dot = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) dot += av[i] * bv[i];
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

bool ranks_before(const ScoredId& a, const ScoredId& b) {
  if (a.cosine != b.cosine) return a.cosine > b.cosine;
  return a.id < b.id;
}

std::vector<ScoredId> top_k(
    const EmbeddingVector& query,
    std::span<const std::pair<std::string, EmbeddingVector>> pool,
    std::size_t k) {
  if (k == 0) throw InputError("top_k requires k >= 1");
  std::vector<ScoredId> scored;
  scored.reserve(pool.size());
  for (const auto& [id, vec] : pool) scored.push_back({id, cosine(query, vec)});
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(n),
                    scored.end(), ranks_before);
  scored.resize(n);
  return scored;
}

ProviderKind parse_provider_kind(std::string_view name) {
  if (name == "file") return ProviderKind::kFile;
  if (name == "deterministic-test" || name == "hash") {
    return ProviderKind::kDeterministicTest;
  }
  if (name == "remote") return ProviderKind::kRemote;
  throw InputError("unknown embedding provider '" + std::string(name) + "'");
}

std::string to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kFile: return "file";
    case ProviderKind::kDeterministicTest: return "deterministic-test";
    case ProviderKind::kRemote: return "remote";
  }
  return "?";
}

std::vector<EmbeddingVector> EmbeddingProvider::embed_batch(
    std::span<const Sentence> sentences) const {
  std::vector<EmbeddingVector> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(embed(s));
  return out;
}

EmbeddingVector get_embedding(const EmbeddingProvider& provider,
                              const Sentence& sentence) {
  return provider.embed(sentence);
}

// --- deterministic-test ---------------------------------------------------

HashingEmbeddingProvider::HashingEmbeddingProvider(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InputError("embedding dim must be positive");
}

EmbeddingVector HashingEmbeddingProvider::embed(const Sentence& sentence) const {
  return embed_tokens(sentence.normalized_tokens());
}

EmbeddingVector HashingEmbeddingProvider::embed_tokens(
    const std::vector<std::string>& lemmas) const {
  std::vector<double> acc(dim_, 0.0);
  auto add = [&](std::string_view token) {
    std::uint64_t state = fnv1a(token);
    for (std::size_t d = 0; d < dim_; ++d) {
      const double u =
          static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
      acc[d] += 2.0 * u - 1.0;
    }
  };
  if (lemmas.empty()) {
    add("\x01<empty>");
  } else {
    for (const auto& t : lemmas) add(t);
  }
  return EmbeddingVector::normalized_from(std::move(acc));
}

// --- file -----------------------------------------------------------------

FileEmbeddingProvider::FileEmbeddingProvider(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open embedding file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  parse(ss.str(), path.string());
}

FileEmbeddingProvider FileEmbeddingProvider::from_string(
    std::string_view content, const std::string& origin) {
  FileEmbeddingProvider p;
  p.parse(content, origin);
  return p;
}

void FileEmbeddingProvider::parse(std::string_view content,
                                  const std::string& origin) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(where + ": malformed json: " + e.what());
    }
    if (!j.contains("id") || !j["id"].is_string() || !j.contains("vector") ||
        !j["vector"].is_array()) {
      throw InputError(where + ": expected {id, vector}");
    }
    std::vector<double> values;
    for (const auto& v : j["vector"]) {
      if (!v.is_number()) throw InputError(where + ": non-numeric vector entry");
      values.push_back(v.get<double>());
    }
    if (dim_ == 0) dim_ = values.size();
    if (values.size() != dim_) {
      throw InputError(where + ": vector has dim " +
                       std::to_string(values.size()) + ", expected " +
                       std::to_string(dim_));
    }
    const auto id = j["id"].get<std::string>();
    EmbeddingVector vec;
    try {
      vec = EmbeddingVector::normalized_from(std::move(values));
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    if (!vectors_.emplace(id, std::move(vec)).second) {
      throw InputError(where + ": duplicate id " + id);
    }
  }
}

EmbeddingVector FileEmbeddingProvider::embed(const Sentence& sentence) const {
  auto it = vectors_.find(sentence.id);
  if (it == vectors_.end()) {
    throw InputError("no embedding for id " + sentence.id);
  }
  return it->second;
}

// --- remote ---------------------------------------------------------------

RemoteEmbeddingProvider::RemoteEmbeddingProvider(
    std::string url, std::size_t dim, std::chrono::milliseconds timeout,
    int retries)
    : dim_(dim), timeout_(timeout), retries_(std::max(0, retries)) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.substr(0, scheme) != "http") {
    throw InputError("embedding URL must be http://host[:port]/path, got '" +
                     url + "'");
  }
  const auto slash = url.find('/', scheme + 3);
  scheme_host_port_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

std::size_t RemoteEmbeddingProvider::requests_made() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::request(
    const std::vector<std::string>& texts) const {
  const std::string body = json{{"texts", texts}}.dump();
  const int attempts_allowed = retries_ + 1;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts_allowed; ++attempt) {
    {
      std::lock_guard lock(mu_);
      ++requests_;
    }
    httplib::Client client(scheme_host_port_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    try {
      const json j = json::parse(res->body);
      const auto& vectors = j.at("vectors");
      if (!vectors.is_array() || vectors.size() != texts.size()) {
        throw InputError("response carries the wrong number of vectors");
      }
      std::vector<EmbeddingVector> out;
      out.reserve(texts.size());
      for (const auto& v : vectors) {
        auto values = v.get<std::vector<double>>();
        if (values.size() != dim_) {
          throw InputError("response vector has dim " +
                           std::to_string(values.size()) + ", expected " +
                           std::to_string(dim_));
        }
        out.push_back(EmbeddingVector::normalized_from(std::move(values)));
      }
      return out;
    } catch (const std::exception& e) {
      last_error = std::string("bad response: ") + e.what();
    }
  }
  throw ProviderError("embedding service " + scheme_host_port_ + path_ + ": " +
                          last_error,
                      attempts_allowed);
}

EmbeddingVector RemoteEmbeddingProvider::embed(const Sentence& sentence) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(sentence.text); it != cache_.end()) {
      return it->second;
    }
  }
  auto vec = request({sentence.text}).front();
  std::lock_guard lock(mu_);
  cache_.emplace(sentence.text, vec);
  return vec;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed_batch(
    std::span<const Sentence> sentences) const {
  std::vector<std::string> missing;
  {
    std::lock_guard lock(mu_);
    std::unordered_map<std::string, bool> queued;
    for (const auto& s : sentences) {
      if (!cache_.count(s.text) && queued.emplace(s.text, true).second) {
        missing.push_back(s.text);
      }
    }
  }
  if (!missing.empty()) {
    auto vecs = request(missing);
    std::lock_guard lock(mu_);
    for (std::size_t i = 0; i < missing.size(); ++i) {
      cache_.emplace(missing[i], std::move(vecs[i]));
    }
  }
  std::vector<EmbeddingVector> out;
  out.reserve(sentences.size());
  std::lock_guard lock(mu_);
  for (const auto& s : sentences) out.push_back(cache_.at(s.text));
  return out;
}

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& config) {
  switch (config.kind) {
    case ProviderKind::kDeterministicTest:
      return std::make_unique<HashingEmbeddingProvider>(config.dim);
    case ProviderKind::kFile:
      if (config.source.empty()) throw InputError("file provider needs a path");
      return std::make_unique<FileEmbeddingProvider>(config.source);
    case ProviderKind::kRemote: {
      std::string url = config.source;
      if (url.empty()) {
        if (const char* env = std::getenv("STYLEMINE_EMBED_URL")) url = env;
      }
      if (url.empty()) {
        throw InputError("remote provider needs a URL (flag or STYLEMINE_EMBED_URL)");
      }
      return std::make_unique<RemoteEmbeddingProvider>(url, config.dim,
                                                       config.timeout,
                                                       config.retries);
    }
  }
  throw InputError("unknown provider kind");
}

std::string embeddings_to_json_lines(const Corpus& corpus,
                                     const EmbeddingProvider& provider) {
  const auto vectors = provider.embed_batch(corpus.sentences());
  std::string out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto values = vectors[i].values();
    json j{{"id", corpus[i].id},
           {"vector", std::vector<double>(values.begin(), values.end())}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace stylemine
