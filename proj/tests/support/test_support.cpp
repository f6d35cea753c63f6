// SPDX-License-Identifier: Apache-2.0
#include "test_support.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>

#include "elorank/cli.hpp"

namespace elorank::testing {

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("elorank-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset make_dataset(const std::vector<std::pair<std::string, Label>>& labels) {
  std::vector<TextEntry> entries;
  for (const auto& [id, label] : labels) entries.push_back({id, "text of " + id, label, {}});
  return Dataset("test", std::move(entries));
}

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = elorank::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace elorank::testing
