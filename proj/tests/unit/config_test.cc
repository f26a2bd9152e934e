#include "doctest.h"
#include "json.hpp"
#include "stylemine/config.hpp"
#include "stylemine/error.hpp"
#include "stylemine/manifest.hpp"

#include <filesystem>
#include <fstream>

using namespace stylemine;
namespace fs = std::filesystem;

namespace {

std::string error_of(const char* text) {
  try {
    config_from_json(text, "cfg.json");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("task presets bind alpha and j_safe") {
  struct Row { const char* name; double alpha; double j_safe; };
  for (const Row& row : {Row{"sentiment", 0.4, 0.8}, Row{"formality", 0.3, 0.6},
                         Row{"political", 0.1, 0.4}}) {
    RunConfig c;
    c.apply_preset(parse_task_preset(row.name));
    CHECK(c.reward.alpha == row.alpha);
    CHECK(c.reward.j_safe == row.j_safe);
    CHECK(to_string(c.task) == row.name);
  }
  RunConfig c;
  c.reward.alpha = 0.9;
  c.apply_preset(TaskPreset::kCustom);
  CHECK(c.reward.alpha == 0.9);
  CHECK_THROWS_AS(parse_task_preset("poetry"), InputError);
}

TEST_CASE("explicit keys override the preset") {
  const auto c = config_from_json(R"({"alpha":0.7,"task":"sentiment"})", "x");
  CHECK(c.reward.alpha == 0.7);
  CHECK(c.reward.j_safe == 0.8);
}

TEST_CASE("unknown and invalid keys are rejected by name") {
  CHECK(error_of(R"({"bogus":1})").find("bogus") != std::string::npos);
  CHECK(error_of(R"({"provider":{"colour":"red"}})").find("provider.colour") !=
        std::string::npos);
  CHECK(error_of(R"({"k":"eight"})").find("'k'") != std::string::npos);
  CHECK(error_of(R"({"alpha":2})").find("alpha") != std::string::npos);
  CHECK(error_of("[1]").find("object") != std::string::npos);
  CHECK(error_of("{").find("malformed") != std::string::npos);
}

TEST_CASE("config round trips through json") {
  const auto c = config_from_json(R"({
    "task":"formality","strategy":"rd","k":4,"p":0.1,"beta":2,"norm_mode":"entities",
    "seed":9,"delta":0.25,"aggregation":"max","exist_mode":"missing","lambda":0.3,
    "workers":3,"provider":{"kind":"file","dim":4,"source":"e.jsonl","timeout_ms":500,
    "retries":1}})", "x");
  CHECK(c.align.strategy == Strategy::kRandom);
  CHECK(c.align.k == 4);
  CHECK(c.align.norm_mode == NormMode::kEntities);
  CHECK(c.reward.amateur_aggregation == Aggregation::kMax);
  CHECK(c.reward.exist_mode == ExistMode::kMissing);
  CHECK(c.provider.kind == ProviderKind::kFile);
  CHECK(c.provider.timeout.count() == 500);
  const auto again = config_from_json(config_to_json(c), "y");
  CHECK(config_to_json(again) == config_to_json(c));
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("manifest records inputs, outputs and config") {
  const fs::path dir = fs::temp_directory_path() / "stylemine_manifest_test";
  fs::create_directories(dir);
  const fs::path in = dir / "in.txt";
  const fs::path out = dir / "out.json";
  std::ofstream(in) << "abc";
  std::ofstream(out) << "{}";
  const auto path = manifest_path_for(out);
  CHECK(path.filename() == "out.json.manifest.json");
  write_manifest({"mine", config_to_json(RunConfig{}), {in}, {out}, 17}, path);
  std::ifstream f(path);
  const auto j = nlohmann::json::parse(f);
  CHECK(j["command"] == "mine");
  CHECK(j["seed"] == 17);
  CHECK(j["inputs"][0]["sha256"] ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(j["config"]["k"] == 8);
  CHECK(j.contains("version"));
  CHECK(j.contains("created_at"));
  fs::remove_all(dir);
}
