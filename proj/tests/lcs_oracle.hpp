// Copyright 2026 The sheetvis Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force longest common subsequence: enumerate every subsequence of the
// shorter input and test containment in the other. Exponential; only for
// checking the dynamic program on short inputs.

#ifndef SHEETVIS_TESTS_LCS_ORACLE_HPP_
#define SHEETVIS_TESTS_LCS_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sheetvis::testing {

template <typename T>
bool IsSubsequence(const std::vector<T>& sub, const std::vector<T>& seq) {
  std::size_t i = 0;
  for (const T& x : seq) {
    if (i < sub.size() && sub[i] == x) ++i;
  }
  return i == sub.size();
}

template <typename T>
std::size_t BruteForceLcs(const std::vector<T>& a, const std::vector<T>& b) {
  const std::vector<T>& small = a.size() <= b.size() ? a : b;
  const std::vector<T>& large = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  const std::uint32_t n = static_cast<std::uint32_t>(small.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<T> sub;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) sub.push_back(small[i]);
    }
    if (sub.size() > best && IsSubsequence(sub, large)) best = sub.size();
  }
  return best;
}

}  // namespace sheetvis::testing

#endif  // SHEETVIS_TESTS_LCS_ORACLE_HPP_
