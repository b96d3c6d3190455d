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

#ifndef SHALLOWLAB_PARITY_HPP
#define SHALLOWLAB_PARITY_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shallowlab/diag.hpp"
#include "shallowlab/gf2.hpp"
#include "shallowlab/rng.hpp"

namespace shallowlab {

// Vertices are 0-based here; the source is 0 and the target is n-1.
class MonotoneDag {
 public:
  MonotoneDag() = default;
  explicit MonotoneDag(size_t n) : n_(n), adj_(n * n, 0) {}

  size_t size() const { return n_; }
  bool edge(size_t i, size_t j) const { return adj_[i * n_ + j]; }
  void set_edge(size_t i, size_t j, bool v);
  size_t edge_count() const;

  // Edge slots (i, j), i < j, in row-major order; used to enumerate all DAGs of a size.
  static std::vector<std::pair<size_t, size_t>> slots(size_t n);
  static MonotoneDag from_mask(size_t n, uint64_t mask);

  bool operator==(const MonotoneDag&) const = default;

 private:
  size_t n_ = 0;
  std::vector<uint8_t> adj_;
};

MonotoneDag parse_monotone_dag(std::istream& in);
MonotoneDag parse_monotone_dag(const std::string& text);
std::string format_monotone_dag(const MonotoneDag& d);

bool path_parity_bruteforce(const MonotoneDag& d);

// The (n-1) x (n-1) top-right submatrix of A - I.
Gf2Matrix extract_L(const MonotoneDag& a);
bool det_encoding(const MonotoneDag& a);
// Upper triangular with ones on the subdiagonal and zeros below it.
bool has_L_form(const Gf2Matrix& m);

class ShareMatrix {
 public:
  ShareMatrix() = default;
  ShareMatrix(size_t size, size_t shares);

  size_t size() const { return k_; }
  size_t shares() const { return shares_; }
  // Cells are 0-based with i <= j.
  bool share(size_t i, size_t j, size_t l) const { return bits_[cell(i, j) * shares_ + l]; }
  void set_share(size_t i, size_t j, size_t l, bool v) { bits_[cell(i, j) * shares_ + l] = v; }
  bool value(size_t i, size_t j) const;
  Gf2Matrix kxor() const;

  // Shares for a matrix in L form; the last share of each cell is fixed by the others.
  static ShareMatrix from_bits(const Gf2Matrix& k, size_t shares, const std::vector<uint8_t>& free_bits);
  static size_t free_bit_count(size_t size, size_t shares);

  bool operator==(const ShareMatrix&) const = default;

 private:
  size_t cell(size_t i, size_t j) const;
  size_t k_ = 0;
  size_t shares_ = 0;
  std::vector<uint8_t> bits_;
};

Gf2Matrix unit_upper_from_bits(size_t k, const std::vector<uint8_t>& bits, size_t offset = 0);
Gf2Matrix sample_unit_upper(size_t k, Rng& rng);

ShareMatrix randomize_matrix(const Gf2Matrix& l, Rng& rng, size_t shares = 2);
MonotoneDag build_B(const ShareMatrix& k);

struct LayeredVertex {
  // Plain vertices carry their 1-based label; share vertices K(i, j, l) carry 1-based cell and share.
  uint32_t vertex = 0;
  uint32_t cell_i = 0, cell_j = 0, share = 0;
  bool is_share() const { return share != 0; }
  std::string label() const;
  bool operator==(const LayeredVertex&) const = default;
};

struct LayeredDag {
  size_t n = 0;
  size_t shares = 0;
  std::vector<std::string> layer_names;
  std::vector<std::vector<LayeredVertex>> layers;
  // edges[k] joins layers[k] to layers[k + 1], as index pairs into the two layers.
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> edges;

  size_t vertex_count() const;
  MonotoneDag flattened() const;
  std::string dump() const;
  bool operator==(const LayeredDag&) const = default;
};

LayeredDag build_layered(const ShareMatrix& k);
bool path_parity_bruteforce(const LayeredDag& d);
LayeredDag dfrak(const MonotoneDag& a, Rng& rng, size_t shares = 2);

// All outputs of dfrak on a, one per assignment of the randomness. Exponential; small n only.
std::vector<LayeredDag> dfrak_outcomes(const MonotoneDag& a, size_t shares = 2);

// Wire layout of the CNOT words: wires 0..2 carry the output permutation,
// followed by one wire per layered vertex and a dummy wire that absorbs absent share edges.
struct EfrakLayout {
  size_t n = 0, shares = 0;
  size_t wires = 0;
  size_t source = 0, target = 0;
  std::vector<std::vector<uint32_t>> vertex_wire;
  // Forward-pass edge slots; share slots record the dummy wire used when the edge is absent.
  struct Slot {
    uint32_t layer = 0, from = 0, to = 0;
    uint32_t from_wire = 0, to_wire = 0;
    int64_t dummy_wire = -1;
  };
  std::vector<Slot> slots;
  static EfrakLayout make(size_t n, size_t shares);
};

size_t efrak_length(size_t n, size_t shares);
CnotWord efrak(const LayeredDag& c);
LayeredDag decode_efrak(const CnotWord& w, size_t n, size_t shares);
// The permutation matrix of 0 -> 1 -> 2 -> 0 on the first three wires of an m-wire register.
Gf2Matrix three_cycle_matrix(size_t m);
CnotWord reversed(const CnotWord& w);

struct HalfRandomizationReport {
  bool identical_within_class = true;
  bool disjoint_across = true;
  bool equal_cardinality = true;
  size_t inputs_yes = 0, inputs_no = 0;
  size_t support_yes = 0, support_no = 0;
  bool passed() const { return identical_within_class && disjoint_across && equal_cardinality; }
  std::string str() const;
};

// Each input carries its class bit and its exact output distribution as counts per serialized output.
using OutputCounts = std::map<std::string, uint64_t>;
HalfRandomizationReport half_randomization_audit(const std::vector<std::pair<bool, OutputCounts>>& domain);
HalfRandomizationReport audit_dfrak(size_t n, size_t shares = 2);

}  // namespace shallowlab

#endif
