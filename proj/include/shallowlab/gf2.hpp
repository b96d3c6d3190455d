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

#ifndef SHALLOWLAB_GF2_HPP
#define SHALLOWLAB_GF2_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "shallowlab/diag.hpp"

namespace shallowlab {

class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(size_t rows, size_t cols);
  static Gf2Matrix identity(size_t n);
  // Column j of the result has its single 1 in row perm[j].
  static Gf2Matrix permutation(const std::vector<size_t>& perm);

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  bool get(size_t i, size_t j) const { return (bits_[i * w_ + (j >> 6)] >> (j & 63)) & 1; }
  void set(size_t i, size_t j, bool v);
  void flip(size_t i, size_t j) { bits_[i * w_ + (j >> 6)] ^= uint64_t{1} << (j & 63); }
  // row i <- row i + row k
  void add_row(size_t i, size_t k);
  // column j <- column j + column k
  void add_col(size_t j, size_t k);
  const uint64_t* row_words(size_t i) const { return bits_.data() + i * w_; }
  size_t words_per_row() const { return w_; }

  Gf2Matrix operator*(const Gf2Matrix& o) const;
  bool operator==(const Gf2Matrix& o) const = default;
  Gf2Matrix transposed() const;
  bool determinant() const;
  std::string str() const;

 private:
  size_t r_ = 0, c_ = 0, w_ = 0;
  std::vector<uint64_t> bits_;
};

// F2 matrix of the operator product g_1 g_2 ... g_k, where CNOT(c -> t) is I + E_{t,c}.
Gf2Matrix word_matrix(const CnotWord& w);
Gf2Matrix cnot_matrix(size_t m, const CnotGate& g);

}  // namespace shallowlab

#endif
