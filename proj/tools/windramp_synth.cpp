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

// windramp_synth: writes a seeded synthetic wind power series as CSV.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "windramp/error.hpp"
#include "windramp/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic wind power series with injected ramps"};
  windramp::SyntheticOptions options;
  std::string out_path;
  app.add_option("--points", options.points, "number of samples");
  app.add_option("--resolution-s", options.resolution_s, "sampling resolution in seconds");
  app.add_option("--start", options.start_timestamp, "first timestamp (epoch seconds)");
  app.add_option("--capacity-mw", options.rated_capacity_mw, "rated capacity in MW");
  app.add_option("--ramp-probability", options.ramp_probability, "per-sample ramp onset probability");
  app.add_option("--max-ramp-steps", options.max_ramp_steps, "longest ramp in samples");
  app.add_option("--seed", options.seed, "generator seed");
  app.add_option("--site", options.site_id, "site identifier");
  app.add_option("-o,--out", out_path, "output CSV (default: stdout)");
  CLI11_PARSE(app, argc, argv);

  try {
    const windramp::WindPowerSeries series = windramp::generate_ramp_series(options);
    if (out_path.empty()) {
      windramp::write_series(std::cout, series);
    } else {
      std::ofstream out(out_path);
      if (!out) throw windramp::DataError("cannot write '" + out_path + "'");
      windramp::write_series(out, series);
    }
  } catch (const windramp::Error& e) {
    std::cerr << "windramp_synth: " << e.what() << '\n';
    return e.exit_code();
  }
  return 0;
}
