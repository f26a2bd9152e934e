#include "stylemine/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stylemine/error.hpp"

namespace stylemine {

using nlohmann::json;

TaskPreset parse_task_preset(std::string_view name) {
  if (name == "sentiment") return TaskPreset::kSentiment;
  if (name == "formality") return TaskPreset::kFormality;
  if (name == "political") return TaskPreset::kPolitical;
  if (name == "custom") return TaskPreset::kCustom;
  throw InputError("unknown task preset '" + std::string(name) +
                   "' (expected sentiment, formality, political or custom)");
}

std::string to_string(TaskPreset t) {
  switch (t) {
    case TaskPreset::kSentiment: return "sentiment";
    case TaskPreset::kFormality: return "formality";
    case TaskPreset::kPolitical: return "political";
    case TaskPreset::kCustom: return "custom";
  }
  return "?";
}

void RunConfig::apply_preset(TaskPreset preset) {
  task = preset;
  switch (preset) {
    case TaskPreset::kSentiment:
      reward.alpha = 0.4;
      reward.j_safe = 0.8;
      break;
    case TaskPreset::kFormality:
      reward.alpha = 0.3;
      reward.j_safe = 0.6;
      break;
    case TaskPreset::kPolitical:
      reward.alpha = 0.1;
      reward.j_safe = 0.4;
      break;
    case TaskPreset::kCustom:
      break;
  }
}

void RunConfig::validate() const {
  align.validate();
  reward.validate();
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in (0, 1]");
  if (provider.dim == 0) throw InputError("provider dim must be positive");
  if (provider.retries < 0) throw InputError("provider retries must be >= 0");
}

RunConfig config_from_json(std::string_view text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(origin + ": malformed json: " + e.what());
  }
  if (!j.is_object()) throw InputError(origin + ": config must be a json object");

  RunConfig c;
  // The preset goes first so explicit alpha / j_safe keys override it.
  if (j.contains("task")) c.apply_preset(parse_task_preset(j["task"].get<std::string>()));
  for (const auto& [key, v] : j.items()) {
    const std::string where = origin + ": field '" + key + "'";
    try {
      if (key == "task") {
      } else if (key == "strategy") {
        c.align.strategy = parse_strategy(v.get<std::string>());
      } else if (key == "k") {
        c.align.k = v.get<std::size_t>();
      } else if (key == "p") {
        c.align.p = v.get<double>();
      } else if (key == "beta") {
        c.align.beta = v.get<double>();
      } else if (key == "norm_mode") {
        c.align.norm_mode = parse_norm_mode(v.get<std::string>());
      } else if (key == "seed") {
        c.align.seed = v.get<std::uint64_t>();
      } else if (key == "alpha") {
        c.reward.alpha = v.get<double>();
      } else if (key == "delta") {
        c.reward.delta = v.get<double>();
      } else if (key == "j_safe") {
        c.reward.j_safe = v.get<double>();
      } else if (key == "aggregation") {
        c.reward.amateur_aggregation = parse_aggregation(v.get<std::string>());
      } else if (key == "exist_mode") {
        c.reward.exist_mode = parse_exist_mode(v.get<std::string>());
      } else if (key == "lambda") {
        c.lambda = v.get<double>();
      } else if (key == "sep_open") {
        c.sep_open = v.get<std::string>();
      } else if (key == "sep_close") {
        c.sep_close = v.get<std::string>();
      } else if (key == "workers") {
        c.workers = v.get<std::size_t>();
      } else if (key == "provider") {
        if (!v.is_object()) throw InputError("must be an object");
        for (const auto& [pk, pv] : v.items()) {
          if (pk == "kind") {
            c.provider.kind = parse_provider_kind(pv.get<std::string>());
          } else if (pk == "dim") {
            c.provider.dim = pv.get<std::size_t>();
          } else if (pk == "source") {
            c.provider.source = pv.get<std::string>();
          } else if (pk == "timeout_ms") {
            c.provider.timeout = std::chrono::milliseconds(pv.get<long>());
          } else if (pk == "retries") {
            c.provider.retries = pv.get<int>();
          } else {
            throw InputError("unknown key 'provider." + pk + "'");
          }
        }
      } else {
        throw InputError("unknown key");
      }
    } catch (const json::exception& e) {
      throw InputError(where + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), path.string());
}

std::string config_to_json(const RunConfig& c) {
  json j{{"task", to_string(c.task)},
         {"strategy", to_string(c.align.strategy)},
         {"k", c.align.k},
         {"p", c.align.p},
         {"beta", c.align.beta},
         {"norm_mode", to_string(c.align.norm_mode)},
         {"seed", c.align.seed},
         {"alpha", c.reward.alpha},
         {"delta", c.reward.delta},
         {"j_safe", c.reward.j_safe},
         {"aggregation", to_string(c.reward.amateur_aggregation)},
         {"exist_mode", to_string(c.reward.exist_mode)},
         {"lambda", c.lambda},
         {"sep_open", c.sep_open},
         {"sep_close", c.sep_close},
         {"workers", c.workers},
         {"provider",
          {{"kind", to_string(c.provider.kind)},
           {"dim", c.provider.dim},
           {"source", c.provider.source},
           {"timeout_ms", c.provider.timeout.count()},
           {"retries", c.provider.retries}}}};
  return j.dump(2);
}

}  // namespace stylemine
