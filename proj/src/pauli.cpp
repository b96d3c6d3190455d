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

#include "shallowlab/pauli.hpp"

#include <bit>

namespace shallowlab {

PauliString::PauliString(size_t n) : n_(n), xs_(words_for(n), 0), zs_(words_for(n), 0) {}

PauliString PauliString::parse(std::string_view text) {
  uint8_t r = 0;
  if (text.starts_with("+")) {
    text.remove_prefix(1);
  } else if (text.starts_with("-i")) {
    r = 3;
    text.remove_prefix(2);
  } else if (text.starts_with("-")) {
    r = 2;
    text.remove_prefix(1);
  } else if (text.starts_with("i")) {
    r = 1;
    text.remove_prefix(1);
  }
  PauliString p(text.size());
  for (size_t q = 0; q < text.size(); ++q) {
    char c = text[q];
    if (c == '_') c = 'I';
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') throw std::invalid_argument("bad Pauli character");
    p.set(q, c);
  }
  p.phase_ = (p.phase_ + r) & 3;
  return p;
}

PauliString PauliString::single(size_t n, size_t q, char c) {
  if (q >= n) throw std::out_of_range("qubit index out of range");
  PauliString p(n);
  p.set(q, c);
  return p;
}

PauliString PauliString::from_masks(const std::vector<uint8_t>& x, const std::vector<uint8_t>& z) {
  if (x.size() != z.size()) throw std::invalid_argument("mask length mismatch");
  PauliString p(x.size());
  for (size_t q = 0; q < x.size(); ++q) {
    p.set_x(q, x[q]);
    p.set_z(q, z[q]);
  }
  return p;
}

void PauliString::set_x(size_t q, bool v) {
  uint64_t m = uint64_t{1} << (q & 63);
  if (v) xs_[q >> 6] |= m; else xs_[q >> 6] &= ~m;
}

void PauliString::set_z(size_t q, bool v) {
  uint64_t m = uint64_t{1} << (q & 63);
  if (v) zs_[q >> 6] |= m; else zs_[q >> 6] &= ~m;
}

char PauliString::at(size_t q) const {
  static const char kLetters[4] = {'I', 'X', 'Z', 'Y'};
  return kLetters[int(x(q)) | (int(z(q)) << 1)];
}

void PauliString::set(size_t q, char c) {
  if (q >= n_) throw std::out_of_range("qubit index out of range");
  bool was_y = x(q) && z(q);
  bool nx = c == 'X' || c == 'Y';
  bool nz = c == 'Z' || c == 'Y';
  set_x(q, nx);
  set_z(q, nz);
  int delta = int(nx && nz) - int(was_y);
  phase_ = uint8_t((phase_ + 4 + delta) & 3);
}

size_t PauliString::num_y() const {
  size_t c = 0;
  for (size_t w = 0; w < xs_.size(); ++w) c += std::popcount(xs_[w] & zs_[w]);
  return c;
}

bool PauliString::is_hermitian() const { return ((phase_ + 4 - (num_y() & 3)) & 1) == 0; }

int PauliString::sign() const {
  unsigned r = (phase_ + 4 - (num_y() & 3)) & 3;
  if (r == 0) return 1;
  if (r == 2) return -1;
  throw std::logic_error("Pauli is not Hermitian");
}

bool PauliString::is_identity_up_to_phase() const {
  for (size_t w = 0; w < xs_.size(); ++w)
    if (xs_[w] | zs_[w]) return false;
  return true;
}

bool PauliString::commutes(const PauliString& o) const {
  if (o.n_ != n_) throw std::invalid_argument("Pauli size mismatch");
  uint64_t acc = 0;
  for (size_t w = 0; w < xs_.size(); ++w) acc ^= (xs_[w] & o.zs_[w]) ^ (zs_[w] & o.xs_[w]);
  return (std::popcount(acc) & 1) == 0;
}

size_t PauliString::weight() const {
  size_t c = 0;
  for (size_t w = 0; w < xs_.size(); ++w) c += std::popcount(xs_[w] | zs_[w]);
  return c;
}

std::vector<size_t> PauliString::support() const {
  std::vector<size_t> out;
  for (size_t q = 0; q < n_; ++q)
    if (x(q) || z(q)) out.push_back(q);
  return out;
}

PauliString& PauliString::operator*=(const PauliString& o) {
  if (o.n_ != n_) throw std::invalid_argument("Pauli size mismatch");
  unsigned cross = 0;
  for (size_t w = 0; w < xs_.size(); ++w) {
    cross += std::popcount(zs_[w] & o.xs_[w]);
    xs_[w] ^= o.xs_[w];
    zs_[w] ^= o.zs_[w];
  }
  phase_ = uint8_t((phase_ + o.phase_ + 2 * cross) & 3);
  return *this;
}

bool PauliString::operator<(const PauliString& o) const {
  if (n_ != o.n_) return n_ < o.n_;
  for (size_t q = 0; q < n_; ++q) {
    int a = int(x(q)) | (int(z(q)) << 1);
    int b = int(o.x(q)) | (int(o.z(q)) << 1);
    if (a != b) return a < b;
  }
  return phase_ < o.phase_;
}

std::string PauliString::letters() const {
  std::string s(n_, 'I');
  for (size_t q = 0; q < n_; ++q) s[q] = at(q);
  return s;
}

std::string PauliString::str() const {
  static const char* kPrefix[4] = {"+", "i", "-", "-i"};
  unsigned r = (phase_ + 4 - (num_y() & 3)) & 3;
  return std::string(kPrefix[r]) + letters();
}

PauliString PauliString::restricted(size_t first, size_t count) const {
  if (first + count > n_) throw std::out_of_range("restriction out of range");
  PauliString p(count);
  for (size_t q = 0; q < count; ++q) {
    p.set_x(q, x(first + q));
    p.set_z(q, z(first + q));
  }
  unsigned herm = (phase_ + 4 - (num_y() & 3)) & 3;
  p.phase_ = uint8_t((herm + p.num_y()) & 3);
  return p;
}

void PauliString::embed(const PauliString& p, size_t offset) {
  if (offset + p.n_ > n_) throw std::out_of_range("embedding out of range");
  for (size_t q = 0; q < p.n_; ++q) {
    set_x(offset + q, p.x(q));
    set_z(offset + q, p.z(q));
  }
  phase_ = uint8_t((phase_ + p.phase_) & 3);
}

}  // namespace shallowlab
