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

#ifndef SHALLOWLAB_TABLEAU_HPP
#define SHALLOWLAB_TABLEAU_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shallowlab/pauli.hpp"
#include "shallowlab/rng.hpp"

namespace shallowlab {

enum class GateKind : uint8_t { H, S, S_DAG, CZ, CNOT, X, Y, Z };

struct CliffordGate {
  GateKind kind;
  uint32_t a = 0;
  uint32_t b = 0;

  static CliffordGate h(uint32_t q) { return {GateKind::H, q, 0}; }
  static CliffordGate s(uint32_t q) { return {GateKind::S, q, 0}; }
  static CliffordGate s_dag(uint32_t q) { return {GateKind::S_DAG, q, 0}; }
  static CliffordGate x(uint32_t q) { return {GateKind::X, q, 0}; }
  static CliffordGate y(uint32_t q) { return {GateKind::Y, q, 0}; }
  static CliffordGate z(uint32_t q) { return {GateKind::Z, q, 0}; }
  static CliffordGate cz(uint32_t a, uint32_t b) { return {GateKind::CZ, a, b}; }
  static CliffordGate cnot(uint32_t c, uint32_t t) { return {GateKind::CNOT, c, t}; }

  bool two_qubit() const { return kind == GateKind::CZ || kind == GateKind::CNOT; }
  CliffordGate inverse() const;
  std::string str() const;
  bool operator==(const CliffordGate&) const = default;
};

using Circuit = std::vector<CliffordGate>;

Circuit inverse(const Circuit& c);

// P <- g P g^dagger with exact phase.
void conjugate_in_place(const CliffordGate& g, PauliString& p);
// P <- R P R^dagger for R = exp(-i pi/4 axis).
void conjugate_by_rotation(const PauliString& axis, PauliString& p);
// C P C^dagger, evaluated gate by gate.
PauliString conjugate_pauli_through(const Circuit& c, PauliString p);

class ContradictionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Measurement {
  int sign;
  bool deterministic;
};

class Tableau;
struct Snapshot {
  std::vector<uint64_t> bits;
  std::vector<uint8_t> phases;
  size_t n = 0;
  bool operator==(const Snapshot&) const = default;
};

// Aaronson-Gottesman tableau with destabilizers. Rows 0..n-1 are destabilizers,
// rows n..2n-1 stabilizers, each stored as an x block followed by a z block.
class Tableau {
 public:
  Tableau() = default;
  // |0...0>
  explicit Tableau(size_t n);
  static Tableau plus_state(size_t n);
  // Rows are taken as given; check_invariants() validates them.
  static Tableau from_rows(const std::vector<PauliString>& destabilizers, const std::vector<PauliString>& stabilizers);

  size_t num_qubits() const { return n_; }

  void h(size_t q);
  void s(size_t q);
  void s_dag(size_t q);
  void x(size_t q);
  void y(size_t q);
  void z(size_t q);
  void cnot(size_t c, size_t t);
  void cz(size_t a, size_t b);
  void swap(size_t a, size_t b);
  void apply(const CliffordGate& g);
  void apply(const Circuit& c);
  // exp(-i pi/4 P): rows anticommuting with P become -i P R.
  void rotate_pi4(const PauliString& p);
  // Applies the Pauli p to the state (flips signs of anticommuting rows).
  void apply_pauli(const PauliString& p);
  // Relabels qubits so that old qubit q becomes new qubit perm[q].
  void permute(const std::vector<size_t>& perm);

  Measurement measure(const PauliString& p, Rng& rng, std::optional<int> forced = std::nullopt);
  Measurement measure_z(size_t q, Rng& rng, std::optional<int> forced = std::nullopt);
  // Deterministic sign of p if determined, nullopt otherwise; never mutates.
  std::optional<int> peek(const PauliString& p) const;

  PauliString stabilizer(size_t i) const;
  PauliString destabilizer(size_t i) const;
  std::vector<PauliString> stabilizers() const;

  // Canonical generator set (reduced row echelon form of the stabilizer group),
  // so two tableaus represent the same state iff these agree.
  std::vector<PauliString> canonical_stabilizers() const;
  bool same_state(const Tableau& other) const;

  bool check_invariants() const;

  Snapshot snapshot() const;
  void restore(const Snapshot& s);

 private:
  uint64_t* xrow(size_t r) { return bits_.data() + r * 2 * w_; }
  uint64_t* zrow(size_t r) { return bits_.data() + r * 2 * w_ + w_; }
  const uint64_t* xrow(size_t r) const { return bits_.data() + r * 2 * w_; }
  const uint64_t* zrow(size_t r) const { return bits_.data() + r * 2 * w_ + w_; }
  PauliString row(size_t r) const;
  void set_row(size_t r, const PauliString& p);
  void row_mul(size_t target, size_t source);
  bool row_anticommutes(size_t r, const PauliString& p) const;
  void check_qubit(size_t q) const;

  size_t n_ = 0;
  size_t w_ = 0;
  std::vector<uint64_t> bits_;
  std::vector<uint8_t> phases_;
};

}  // namespace shallowlab

#endif
