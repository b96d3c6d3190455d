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

#ifndef SHALLOWLAB_DIAG_HPP
#define SHALLOWLAB_DIAG_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shallowlab/pauli.hpp"
#include "shallowlab/rng.hpp"
#include "shallowlab/tableau.hpp"

namespace shallowlab {

struct CnotGate {
  uint32_t control = 0;
  uint32_t target = 1;
  auto operator<=>(const CnotGate&) const = default;
};

struct CnotWord {
  size_t wires = 0;
  std::vector<CnotGate> gates;
  bool operator==(const CnotWord&) const = default;
};

// Element of the group generated by CZ and S on m wires, stored by exponents:
// the unitary is |x> -> i^{sum_i s_i x_i + 2 sum_{i<j} cz_ij x_i x_j} |x>.
class DiagWord {
 public:
  DiagWord() = default;
  explicit DiagWord(size_t m);

  size_t wires() const { return m_; }
  uint8_t s(size_t i) const { return s_[i]; }
  void set_s(size_t i, unsigned v) { s_[i] = uint8_t(v & 3); }
  void add_s(size_t i, unsigned v) { s_[i] = uint8_t((s_[i] + v) & 3); }
  bool cz(size_t i, size_t j) const {
    if (i > j) std::swap(i, j);
    return (rows_[i * w_ + (j >> 6)] >> (j & 63)) & 1;
  }
  void set_cz(size_t i, size_t j, bool v);
  void toggle_cz(size_t i, size_t j);

  // (sum s + sum_{i<j} cz) mod 2.
  bool parity() const;
  bool is_identity() const;

  // this <- this * other (the group is abelian).
  DiagWord& operator*=(const DiagWord& other);
  friend DiagWord operator*(DiagWord a, const DiagWord& b) { return a *= b; }
  DiagWord inverse() const;

  // Returns h' with (*this) * g == g * h' as unitaries.
  DiagWord pushed_through(const CnotGate& g) const;
  void push_through(const CnotGate& g);

  // Relabel wires: wire i becomes perm[i].
  DiagWord permuted(const std::vector<size_t>& perm) const;
  // Restriction to the first k wires (other exponents dropped).
  DiagWord restricted(size_t k) const;
  // Same group element on a larger register.
  DiagWord extended(size_t m) const;

  // Exact gate decomposition: S gates then CZ gates.
  Circuit circuit() const;
  // Phase exponent (mod 4) on the basis state x, bit i of x is wire i.
  unsigned phase_exponent(uint64_t x) const;

  // Index in [0, 512) for three wires: s0 + 4 s1 + 16 s2 + 64 (cz01 + 2 cz02 + 4 cz12).
  unsigned index3() const;
  static DiagWord from_index3(unsigned idx);

  bool operator==(const DiagWord& o) const = default;
  uint64_t hash(uint64_t seed = 0) const;
  std::string str() const;

 private:
  size_t m_ = 0;
  size_t w_ = 0;
  std::vector<uint8_t> s_;
  std::vector<uint64_t> rows_;

  friend DiagWord sample_uniform_H(size_t m, Rng& rng);
};

DiagWord sample_uniform_H(size_t m, Rng& rng);
DiagWord sample_uniform_H3_even(Rng& rng);

// g' = cnot * diag as a unitary; words of steps are listed in operator order.
struct WordStep {
  CnotGate cnot;
  DiagWord diag;
};
// All 256 elements of the even subgroup on three wires, in increasing index3 order.
const std::vector<DiagWord>& all_H3_even();

// A * P * A^dagger for Clifford A given by its circuit.
PauliString bullet(const Circuit& a, const PauliString& p);
PauliString bullet(const DiagWord& a, const PauliString& p);

// Letters-only key with a + sign, used wherever Paulis are compared up to sign.
PauliString unsigned_pauli(PauliString p);

using PauliLine = std::array<PauliString, 4>;

struct PentagramConstants {
  std::array<PauliLine, 5> lines;
  std::vector<PauliString> star;
  std::vector<PauliString> s_set;
  std::vector<PauliString> stabilizers;
  std::vector<PauliString> nonstab;
  // Index of each star Pauli within `lines`: pairs of (line, slot).
  std::vector<std::vector<std::pair<int, int>>> incidence;

  int star_index(const PauliString& p) const;
  int s_index(const PauliString& p) const;
};

// Builds and checks the constants; throws std::logic_error if a structural invariant fails.
PentagramConstants build_pentagram_constants();
const PentagramConstants& pentagram();

}  // namespace shallowlab

#endif
