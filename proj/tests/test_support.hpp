// Copyright 2026 The windramp Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Shared helpers for the unit, golden and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "windramp/ingest.hpp"
#include "windramp/labeling.hpp"

namespace windramp::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "windramp");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs a shell command, capturing stdout and stderr.
CommandResult run_command(const std::string& command);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

std::string cli_path();
std::string synth_path();
std::filesystem::path test_data_dir();

WindPowerSeries series_from_powers(const std::vector<double>& powers, double capacity = 100.0);

// Dataset with the given feature rows and 1-based targets.
LabeledDataset make_dataset(const std::vector<std::vector<double>>& rows,
                            const std::vector<ClassId>& targets, int num_classes);

// Two-class XOR of (x1 > 0.5, x2 > 0.5) with P(x2 > 0.5) = 0.7, so a greedy
// root split on x1 has positive gain and a depth-2 tree separates the classes
// while sums of single-feature stumps cannot.
LabeledDataset xor_fixture(std::size_t n, std::uint64_t seed);

// Repeating ramp pattern whose up-ramps follow a unique precursor window.
std::vector<double> precursor_ramp_powers(std::size_t cycles);

}  // namespace windramp::testing
