#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "stylemine/align.hpp"
#include "stylemine/embed.hpp"
#include "stylemine/reward.hpp"

namespace stylemine {

enum class TaskPreset { kSentiment, kFormality, kPolitical, kCustom };

TaskPreset parse_task_preset(std::string_view name);
std::string to_string(TaskPreset t);

struct RunConfig {
  TaskPreset task = TaskPreset::kCustom;
  AlignmentParams align;
  RewardParams reward;
  double lambda = 0.5;
  ProviderConfig provider;
  std::string sep_open = "<s>";
  std::string sep_close = "</s>";
  std::size_t workers = 1;

  // Binds (alpha, j_safe) for the named task; kCustom leaves them alone.
  void apply_preset(TaskPreset preset);
  void validate() const;
};

// Reads a single json document. Unknown keys are rejected with their name.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(std::string_view json, const std::string& origin);
std::string config_to_json(const RunConfig& config);

}  // namespace stylemine
