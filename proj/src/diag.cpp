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

#include "shallowlab/diag.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace shallowlab {

namespace {

// Bits strictly above position p within a row of w words.
inline void xor_tail(uint64_t* dst, const uint64_t* src, size_t p, size_t w) {
  size_t first = (p + 1) >> 6;
  if (first >= w) return;
  unsigned off = unsigned((p + 1) & 63);
  uint64_t mask = off ? ~uint64_t{0} << off : ~uint64_t{0};
  dst[first] ^= src[first] & mask;
  for (size_t k = first + 1; k < w; ++k) dst[k] ^= src[k];
}

}  // namespace

DiagWord::DiagWord(size_t m) : m_(m), w_(words_for(m)), s_(m, 0), rows_(m * words_for(m), 0) {}

void DiagWord::set_cz(size_t i, size_t j, bool v) {
  if (i == j || i >= m_ || j >= m_) throw std::out_of_range("bad CZ index");
  if (i > j) std::swap(i, j);
  uint64_t& word = rows_[i * w_ + (j >> 6)];
  uint64_t m = uint64_t{1} << (j & 63);
  if (v) word |= m; else word &= ~m;
}

void DiagWord::toggle_cz(size_t i, size_t j) {
  if (i > j) std::swap(i, j);
  rows_[i * w_ + (j >> 6)] ^= uint64_t{1} << (j & 63);
}

bool DiagWord::parity() const {
  unsigned acc = 0;
  for (auto v : s_) acc += v;
  for (auto w : rows_) acc += unsigned(std::popcount(w));
  return acc & 1;
}

bool DiagWord::is_identity() const {
  return std::all_of(s_.begin(), s_.end(), [](uint8_t v) { return v == 0; }) &&
         std::all_of(rows_.begin(), rows_.end(), [](uint64_t v) { return v == 0; });
}

DiagWord& DiagWord::operator*=(const DiagWord& o) {
  if (o.m_ != m_) throw std::invalid_argument("wire count mismatch");
  for (size_t i = 0; i < m_; ++i) s_[i] = uint8_t((s_[i] + o.s_[i]) & 3);
  for (size_t k = 0; k < rows_.size(); ++k) rows_[k] ^= o.rows_[k];
  return *this;
}

DiagWord DiagWord::inverse() const {
  DiagWord r = *this;
  for (auto& v : r.s_) v = uint8_t((4 - v) & 3);
  return r;
}

void DiagWord::push_through(const CnotGate& g) {
  size_t c = g.control, t = g.target;
  if (c == t || c >= m_ || t >= m_) throw std::out_of_range("bad CNOT for diagonal word");
  unsigned st = s_[t];
  bool czct = cz(c, t);
  s_[c] = uint8_t((s_[c] + st + 2 * unsigned(czct)) & 3);
  // cz(c, j) ^= cz(t, j) for every j outside {c, t}.
  size_t hi = std::max(c, t);
  for (size_t j = 0; j < hi; ++j) {
    if (j == c || j == t) continue;
    if (cz(t, j)) toggle_cz(c, j);
  }
  if (t > c) {
    xor_tail(&rows_[c * w_], &rows_[t * w_], t, w_);
  } else {
    // Row t holds bits above t, which include c; only the part above c is copied.
    xor_tail(&rows_[c * w_], &rows_[t * w_], c, w_);
  }
  if (st & 1) toggle_cz(c, t);
}

uint64_t DiagWord::hash(uint64_t seed) const {
  uint64_t h = splitmix64(seed ^ m_);
  for (size_t i = 0; i < m_; ++i) h = splitmix64(h ^ (uint64_t(s_[i]) << 32 | i));
  for (uint64_t w : rows_) h = splitmix64(h ^ w);
  return h;
}

DiagWord DiagWord::pushed_through(const CnotGate& g) const {
  DiagWord r = *this;
  r.push_through(g);
  return r;
}

DiagWord DiagWord::permuted(const std::vector<size_t>& perm) const {
  if (perm.size() != m_) throw std::invalid_argument("permutation size mismatch");
  DiagWord r(m_);
  for (size_t i = 0; i < m_; ++i) r.s_[perm[i]] = s_[i];
  for (size_t i = 0; i < m_; ++i)
    for (size_t j = i + 1; j < m_; ++j)
      if (cz(i, j)) r.set_cz(perm[i], perm[j], true);
  return r;
}

DiagWord DiagWord::restricted(size_t k) const {
  DiagWord r(k);
  for (size_t i = 0; i < k; ++i) r.s_[i] = s_[i];
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j)
      if (cz(i, j)) r.set_cz(i, j, true);
  return r;
}

DiagWord DiagWord::extended(size_t m) const {
  if (m < m_) throw std::invalid_argument("cannot shrink with extended()");
  DiagWord r(m);
  for (size_t i = 0; i < m_; ++i) r.s_[i] = s_[i];
  for (size_t i = 0; i < m_; ++i)
    for (size_t j = i + 1; j < m_; ++j)
      if (cz(i, j)) r.set_cz(i, j, true);
  return r;
}

Circuit DiagWord::circuit() const {
  Circuit c;
  for (size_t i = 0; i < m_; ++i) {
    if (s_[i] == 3) {
      c.push_back(CliffordGate::s_dag(uint32_t(i)));
    } else {
      for (unsigned k = 0; k < s_[i]; ++k) c.push_back(CliffordGate::s(uint32_t(i)));
    }
  }
  for (size_t i = 0; i < m_; ++i)
    for (size_t j = i + 1; j < m_; ++j)
      if (cz(i, j)) c.push_back(CliffordGate::cz(uint32_t(i), uint32_t(j)));
  return c;
}

unsigned DiagWord::phase_exponent(uint64_t x) const {
  unsigned e = 0;
  for (size_t i = 0; i < m_; ++i)
    if ((x >> i) & 1) e += s_[i];
  for (size_t i = 0; i < m_; ++i)
    for (size_t j = i + 1; j < m_; ++j)
      if (((x >> i) & 1) && ((x >> j) & 1) && cz(i, j)) e += 2;
  return e & 3;
}

unsigned DiagWord::index3() const {
  if (m_ != 3) throw std::logic_error("index3 needs three wires");
  return s_[0] + 4u * s_[1] + 16u * s_[2] + 64u * (unsigned(cz(0, 1)) + 2u * cz(0, 2) + 4u * cz(1, 2));
}

DiagWord DiagWord::from_index3(unsigned idx) {
  DiagWord d(3);
  d.s_[0] = idx & 3;
  d.s_[1] = (idx >> 2) & 3;
  d.s_[2] = (idx >> 4) & 3;
  d.set_cz(0, 1, (idx >> 6) & 1);
  d.set_cz(0, 2, (idx >> 7) & 1);
  d.set_cz(1, 2, (idx >> 8) & 1);
  return d;
}

std::string DiagWord::str() const {
  std::ostringstream os;
  os << "s=[";
  for (size_t i = 0; i < m_; ++i) os << (i ? "," : "") << int(s_[i]);
  os << "] cz={";
  bool first = true;
  for (size_t i = 0; i < m_; ++i)
    for (size_t j = i + 1; j < m_; ++j)
      if (cz(i, j)) {
        os << (first ? "" : ",") << i << "-" << j;
        first = false;
      }
  os << "}";
  return os.str();
}

DiagWord sample_uniform_H(size_t m, Rng& rng) {
  DiagWord d(m);
  uint64_t pool = 0;
  int avail = 0;
  for (size_t i = 0; i < m; ++i) {
    if (avail < 2) {
      pool = rng();
      avail = 64;
    }
    d.s_[i] = uint8_t(pool & 3);
    pool >>= 2;
    avail -= 2;
  }
  for (size_t i = 0; i + 1 < m; ++i) {
    uint64_t* row = &d.rows_[i * d.w_];
    size_t first = (i + 1) >> 6;
    for (size_t k = first; k < d.w_; ++k) row[k] = rng();
    unsigned off = unsigned((i + 1) & 63);
    if (off) row[first] &= ~uint64_t{0} << off;
    unsigned tail = unsigned(m & 63);
    if (tail) row[d.w_ - 1] &= (uint64_t{1} << tail) - 1;
  }
  return d;
}

DiagWord sample_uniform_H3_even(Rng& rng) {
  DiagWord d = sample_uniform_H(3, rng);
  if (d.parity()) d.add_s(0, 1);
  return d;
}

const std::vector<DiagWord>& all_H3_even() {
  static const std::vector<DiagWord> elems = [] {
    std::vector<DiagWord> out;
    for (unsigned idx = 0; idx < 512; ++idx) {
      DiagWord d = DiagWord::from_index3(idx);
      if (!d.parity()) out.push_back(d);
    }
    return out;
  }();
  return elems;
}

PauliString bullet(const Circuit& a, const PauliString& p) { return conjugate_pauli_through(a, p); }

PauliString bullet(const DiagWord& a, const PauliString& p) {
  if (a.wires() != p.size()) throw std::invalid_argument("wire count mismatch");
  return conjugate_pauli_through(a.circuit(), p);
}

PauliString unsigned_pauli(PauliString p) {
  p.set_phase(uint8_t(p.num_y() & 3));
  return p;
}

int PentagramConstants::star_index(const PauliString& p) const {
  auto key = unsigned_pauli(p);
  for (size_t i = 0; i < star.size(); ++i)
    if (star[i] == key) return int(i);
  return -1;
}

int PentagramConstants::s_index(const PauliString& p) const {
  auto key = unsigned_pauli(p);
  auto it = std::lower_bound(s_set.begin(), s_set.end(), key);
  if (it != s_set.end() && *it == key) return int(it - s_set.begin());
  return -1;
}

PentagramConstants build_pentagram_constants() {
  static const char* kLines[5][4] = {
      {"XXX", "XYY", "YXY", "YYX"},
      {"IYI", "XII", "XYY", "IIY"},
      {"IIY", "YXY", "YII", "IXI"},
      {"XXX", "XII", "IIX", "IXI"},
      {"IYI", "IIX", "YII", "YYX"},
  };
  PentagramConstants pc;
  int minus_lines = 0;
  for (int l = 0; l < 5; ++l) {
    for (int k = 0; k < 4; ++k) pc.lines[l][k] = PauliString::parse(kLines[l][k]);
    PauliString prod(3);
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b)
        if (!pc.lines[l][a].commutes(pc.lines[l][b])) throw std::logic_error("line Paulis do not commute");
      prod *= pc.lines[l][a];
    }
    if (!prod.is_identity_up_to_phase()) throw std::logic_error("line product is not +-III");
    if (prod.sign() < 0) ++minus_lines;
    for (int k = 0; k < 4; ++k) {
      int idx = -1;
      for (size_t i = 0; i < pc.star.size(); ++i)
        if (pc.star[i] == pc.lines[l][k]) idx = int(i);
      if (idx < 0) {
        pc.star.push_back(pc.lines[l][k]);
        pc.incidence.emplace_back();
        idx = int(pc.star.size()) - 1;
      }
      pc.incidence[idx].emplace_back(l, k);
    }
  }
  if (minus_lines % 2 != 1) throw std::logic_error("even number of -III lines");
  if (pc.star.size() != 10) throw std::logic_error("star does not have 10 elements");
  for (const auto& inc : pc.incidence)
    if (inc.size() != 2) throw std::logic_error("a star Pauli is not in exactly two lines");

  std::vector<PauliString> s;
  for (const auto& u : all_H3_even())
    for (const auto& p : pc.star) s.push_back(unsigned_pauli(bullet(u, p)));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  pc.s_set = s;
  for (const auto& p : s) {
    bool x_only = !p.z(0) && !p.z(1) && !p.z(2);
    (x_only ? pc.stabilizers : pc.nonstab).push_back(p);
  }
  return pc;
}

const PentagramConstants& pentagram() {
  static const PentagramConstants pc = build_pentagram_constants();
  return pc;
}

}  // namespace shallowlab
