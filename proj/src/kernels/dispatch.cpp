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

#include <cstdlib>
#include <string_view>

#include "windramp/kernels.hpp"

namespace windramp::kernels {

std::vector<const KernelSet*> available_kernels() {
  std::vector<const KernelSet*> sets{&scalar_kernels()};
  if (const KernelSet* k = avx2_kernels()) sets.push_back(k);
  if (const KernelSet* k = neon_kernels()) sets.push_back(k);
  return sets;
}

const KernelSet& active_kernels() {
  static const KernelSet& selected = [] () -> const KernelSet& {
    const auto sets = available_kernels();
    if (const char* forced = std::getenv("WINDRAMP_KERNELS")) {
      for (const KernelSet* k : sets) {
        if (k->name == std::string_view(forced)) return *k;
      }
    }
    return *sets.back();
  }();
  return selected;
}

}  // namespace windramp::kernels
