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

#ifndef SHALLOWLAB_PAULI_HPP
#define SHALLOWLAB_PAULI_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shallowlab {

inline size_t words_for(size_t n) { return (n + 63) / 64; }

// A Pauli operator i^phase * prod_q X_q^{x_q} Z_q^{z_q}. A Y on qubit q is stored as
// x=z=1 with one unit of phase, so the operator printed as "Y" is exactly Y.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(size_t n);

  // Accepts an optional leading sign ("+", "-", "i", "-i") followed by I/X/Y/Z or '_' per qubit.
  static PauliString parse(std::string_view text);
  static PauliString single(size_t n, size_t q, char p);
  static PauliString from_masks(const std::vector<uint8_t>& x, const std::vector<uint8_t>& z);

  size_t size() const { return n_; }
  bool x(size_t q) const { return (xs_[q >> 6] >> (q & 63)) & 1; }
  bool z(size_t q) const { return (zs_[q >> 6] >> (q & 63)) & 1; }
  void set_x(size_t q, bool v);
  void set_z(size_t q, bool v);
  char at(size_t q) const;
  // Sets qubit q to the Hermitian single-qubit Pauli p without changing the overall sign.
  void set(size_t q, char p);

  uint8_t phase() const { return phase_; }
  void set_phase(uint8_t r) { phase_ = r & 3; }
  // Number of Y factors, i.e. popcount(x & z).
  size_t num_y() const;
  bool is_hermitian() const;
  // +1 or -1 for Hermitian operators; throws otherwise.
  int sign() const;
  void negate() { phase_ = (phase_ + 2) & 3; }

  bool is_identity_up_to_phase() const;
  bool commutes(const PauliString& other) const;
  size_t weight() const;
  std::vector<size_t> support() const;

  // this <- this * other
  PauliString& operator*=(const PauliString& other);
  friend PauliString operator*(PauliString a, const PauliString& b) { return a *= b; }

  // Same operator up to sign/phase.
  bool same_up_to_phase(const PauliString& other) const { return xs_ == other.xs_ && zs_ == other.zs_; }
  bool operator==(const PauliString& other) const = default;
  // Total order on masks then phase, used for deterministic tie breaking.
  bool operator<(const PauliString& other) const;

  // Letters only, no sign.
  std::string letters() const;
  // Sign prefix then letters, e.g. "-XYZ".
  std::string str() const;

  // Restricted/extended copies.
  PauliString restricted(size_t first, size_t count) const;
  void embed(const PauliString& p, size_t offset);

  const std::vector<uint64_t>& xs() const { return xs_; }
  const std::vector<uint64_t>& zs() const { return zs_; }
  std::vector<uint64_t>& xs() { return xs_; }
  std::vector<uint64_t>& zs() { return zs_; }

 private:
  size_t n_ = 0;
  std::vector<uint64_t> xs_, zs_;
  uint8_t phase_ = 0;
};

}  // namespace shallowlab

#endif
