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

#include "shallowlab/gf2.hpp"

#include <stdexcept>

namespace shallowlab {

Gf2Matrix::Gf2Matrix(size_t rows, size_t cols) : r_(rows), c_(cols), w_(words_for(cols)), bits_(rows * words_for(cols), 0) {}

Gf2Matrix Gf2Matrix::identity(size_t n) {
  Gf2Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

Gf2Matrix Gf2Matrix::permutation(const std::vector<size_t>& perm) {
  Gf2Matrix m(perm.size(), perm.size());
  for (size_t j = 0; j < perm.size(); ++j) m.set(perm[j], j, true);
  return m;
}

void Gf2Matrix::set(size_t i, size_t j, bool v) {
  if (i >= r_ || j >= c_) throw std::out_of_range("matrix index out of range");
  uint64_t& word = bits_[i * w_ + (j >> 6)];
  uint64_t m = uint64_t{1} << (j & 63);
  if (v) word |= m; else word &= ~m;
}

void Gf2Matrix::add_row(size_t i, size_t k) {
  for (size_t w = 0; w < w_; ++w) bits_[i * w_ + w] ^= bits_[k * w_ + w];
}

void Gf2Matrix::add_col(size_t j, size_t k) {
  for (size_t i = 0; i < r_; ++i)
    if (get(i, k)) flip(i, j);
}

Gf2Matrix Gf2Matrix::operator*(const Gf2Matrix& o) const {
  if (c_ != o.r_) throw std::invalid_argument("matrix shape mismatch");
  Gf2Matrix out(r_, o.c_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t k = 0; k < c_; ++k)
      if (get(i, k))
        for (size_t w = 0; w < out.w_; ++w) out.bits_[i * out.w_ + w] ^= o.bits_[k * o.w_ + w];
  return out;
}

Gf2Matrix Gf2Matrix::transposed() const {
  Gf2Matrix t(c_, r_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j)
      if (get(i, j)) t.set(j, i, true);
  return t;
}

bool Gf2Matrix::determinant() const {
  if (r_ != c_) throw std::invalid_argument("determinant of a non-square matrix");
  Gf2Matrix a = *this;
  for (size_t col = 0; col < c_; ++col) {
    size_t piv = col;
    while (piv < r_ && !a.get(piv, col)) ++piv;
    if (piv == r_) return false;
    if (piv != col)
      for (size_t w = 0; w < w_; ++w) std::swap(a.bits_[piv * w_ + w], a.bits_[col * w_ + w]);
    for (size_t i = col + 1; i < r_; ++i)
      if (a.get(i, col)) a.add_row(i, col);
  }
  return true;
}

std::string Gf2Matrix::str() const {
  std::string s;
  for (size_t i = 0; i < r_; ++i) {
    for (size_t j = 0; j < c_; ++j) s += get(i, j) ? '1' : '0';
    s += '\n';
  }
  return s;
}

Gf2Matrix cnot_matrix(size_t m, const CnotGate& g) {
  Gf2Matrix e = Gf2Matrix::identity(m);
  e.set(g.target, g.control, true);
  return e;
}

Gf2Matrix word_matrix(const CnotWord& w) {
  // Right-multiplying by I + E_{t,c} adds column t into column c.
  Gf2Matrix m = Gf2Matrix::identity(w.wires);
  for (const auto& g : w.gates) {
    if (g.control >= w.wires || g.target >= w.wires || g.control == g.target)
      throw std::out_of_range("bad CNOT in word");
    m.add_col(g.control, g.target);
  }
  return m;
}

}  // namespace shallowlab
