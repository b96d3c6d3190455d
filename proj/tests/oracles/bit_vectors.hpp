// Copyright 2026 The shallowlab Authors
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

#ifndef SHALLOWLAB_TESTS_BIT_VECTORS_HPP
#define SHALLOWLAB_TESTS_BIT_VECTORS_HPP

#include <cstdint>
#include <vector>

#include "shallowlab/diag.hpp"

namespace oracle {

using Bits = std::vector<uint8_t>;

// Image of a basis-label vector under the operator g_1 ... g_k, so g_k acts first.
inline Bits apply_word(const shallowlab::CnotWord& w, Bits x) {
  for (auto it = w.gates.rbegin(); it != w.gates.rend(); ++it) x[it->target] ^= x[it->control];
  return x;
}

// Columns of the product matrix, as images of the unit vectors.
inline std::vector<Bits> word_columns(const shallowlab::CnotWord& w) {
  std::vector<Bits> cols;
  for (size_t j = 0; j < w.wires; ++j) {
    Bits e(w.wires, 0);
    e[j] = 1;
    cols.push_back(apply_word(w, e));
  }
  return cols;
}

inline bool is_identity(const std::vector<Bits>& cols) {
  for (size_t j = 0; j < cols.size(); ++j)
    for (size_t i = 0; i < cols.size(); ++i)
      if (cols[j][i] != (i == j)) return false;
  return true;
}

// Wire 0 goes to 1, 1 to 2, 2 to 0; all other wires fixed.
inline bool is_three_cycle(const std::vector<Bits>& cols) {
  for (size_t j = 0; j < cols.size(); ++j) {
    size_t img = j == 0 ? 1 : j == 1 ? 2 : j == 2 ? 0 : j;
    for (size_t i = 0; i < cols.size(); ++i)
      if (cols[j][i] != (i == img)) return false;
  }
  return true;
}

// Determinant over F2 by cofactor expansion; small matrices only.
inline bool cofactor_det(const std::vector<Bits>& rows) {
  size_t n = rows.size();
  if (n == 0) return true;
  if (n == 1) return rows[0][0];
  bool acc = false;
  for (size_t j = 0; j < n; ++j) {
    if (!rows[0][j]) continue;
    std::vector<Bits> minor;
    for (size_t i = 1; i < n; ++i) {
      Bits r;
      for (size_t k = 0; k < n; ++k)
        if (k != j) r.push_back(rows[i][k]);
      minor.push_back(r);
    }
    acc ^= cofactor_det(minor);
  }
  return acc;
}

}  // namespace oracle

#endif
