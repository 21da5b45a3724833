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

#include "test_support.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>
#include <unistd.h>

namespace windramp::testing {
namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    fs::path candidate = fs::temp_directory_path() /
                         (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) +
                          "-" + std::to_string(rd() % 100000));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

CommandResult run_command(const std::string& command) {
  TempDir dir("windramp-cmd");
  const fs::path out = dir / "stdout";
  const fs::path err = dir / "stderr";
  const std::string full = command + " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(full.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string cli_path() { return WINDRAMP_CLI; }
std::string synth_path() { return WINDRAMP_SYNTH; }
fs::path test_data_dir() { return WINDRAMP_TEST_DATA; }

WindPowerSeries series_from_powers(const std::vector<double>& powers, double capacity) {
  return WindPowerSeries::from_powers(powers, 600, capacity);
}

LabeledDataset make_dataset(const std::vector<std::vector<double>>& rows,
                            const std::vector<ClassId>& targets, int num_classes) {
  LabeledDataset ds;
  for (const auto& r : rows) ds.features.append_row(r);
  ds.targets = targets;
  ds.anchors.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) ds.anchors[i] = static_cast<std::int64_t>(i);
  ds.num_classes = num_classes;
  ds.horizon = {1, static_cast<int>(ds.features.cols())};
  return ds;
}

LabeledDataset xor_fixture(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<std::vector<double>> rows;
  std::vector<ClassId> y;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = unit();
    const double x2 = unit() < 0.7 ? 0.5 + 0.5 * unit() + 1e-9 : 0.5 * unit();
    rows.push_back({x1, x2});
    y.push_back(((x1 > 0.5) != (x2 > 0.5)) ? 2 : 1);
  }
  return make_dataset(rows, y, 2);
}

std::vector<double> precursor_ramp_powers(std::size_t cycles) {
  // Capacity 20, threshold 10: the step 3 -> 20 is a severe up-ramp and
  // 18 -> 1 a severe down-ramp. Every 4-sample window occurs once per cycle.
  static constexpr std::array<double, 10> kCycle{1, 1, 1, 1, 3, 20, 20, 20, 20, 18};
  std::vector<double> p;
  p.reserve(cycles * kCycle.size());
  for (std::size_t c = 0; c < cycles; ++c) p.insert(p.end(), kCycle.begin(), kCycle.end());
  return p;
}

}  // namespace windramp::testing
