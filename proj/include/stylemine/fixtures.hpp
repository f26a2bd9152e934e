#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace stylemine {

struct FixtureResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Runs production code on every fixtures/<name>/ that holds a fixture.json
// descriptor and diffs against the oracle output in expected/. Numeric
// comparisons use the descriptor's tolerance (default 1e-9 absolute).
std::vector<FixtureResult> verify_all(const std::filesystem::path& root,
                                      std::size_t workers = 1);

FixtureResult verify_fixture(const std::filesystem::path& dir);

}  // namespace stylemine
