#include "stylemine/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "stylemine/error.hpp"

namespace stylemine {
namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr);
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) {
      os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return os.str();
  }

 private:
  EVP_MD_CTX* ctx_;
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  Sha256 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    h.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  return output.string() + ".manifest.json";
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
  using nlohmann::json;
  json inputs = json::array();
  for (const auto& p : m.inputs) {
    inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  }
  json outputs = json::array();
  for (const auto& p : m.outputs) {
    outputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  }
  json j{{"tool", "stylemine"},
         {"version", STYLEMINE_VERSION},
         {"command", m.command},
         {"config", json::parse(m.config_json)},
         {"inputs", std::move(inputs)},
         {"outputs", std::move(outputs)},
         {"seed", m.seed},
         {"created_at", utc_now()}};
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace stylemine
