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

#ifndef SHALLOWLAB_MBQC_HPP
#define SHALLOWLAB_MBQC_HPP

#include <map>
#include <vector>

#include "shallowlab/diag.hpp"
#include "shallowlab/graph.hpp"
#include "shallowlab/rng.hpp"
#include "shallowlab/tableau.hpp"

namespace shallowlab {

// Four grid columns: CZs between adjacent wires at the first column, then per wire one of
// 'I', 'H' or 'D' (S dagger) spread over the four measurements.
struct MbqcLayer {
  std::vector<uint32_t> cz;  // w means CZ(w, w + 1)
  std::vector<char> op;
  bool operator==(const MbqcLayer&) const = default;
};

// Wires are grid rows and time runs along columns; the last column holds the residual wires.
struct MbqcPattern {
  size_t wires = 0;
  size_t columns = 0;
  ColoredGraph graph;
  std::vector<char> basis;              // per vertex: 'X' or 'Y', 0 on the residual column
  std::vector<PauliString> byproduct;   // per vertex: residual Pauli toggled by a -1 outcome
  std::vector<size_t> residual;         // residual vertex of each wire
  std::vector<MbqcLayer> layers;
  Circuit logical;                      // what the pattern implements, up to byproduct and phase

  size_t vertex(size_t wire, size_t col) const { return wire * columns + col; }
};

std::vector<MbqcLayer> mbqc_layers(const std::vector<WordStep>& word, size_t wires);
// max_columns = 0 means unbounded; longer patterns throw std::length_error.
MbqcPattern compile_word_to_mbqc(const std::vector<WordStep>& word, size_t wires, size_t max_columns = 0);

// Product of the byproducts of the -1 outcomes; every measured vertex needs an outcome.
PauliString pauli_byproduct(const MbqcPattern& p, const std::map<size_t, int>& outcomes);

// Direct unitary of the word, as a circuit in application order.
Circuit word_circuit(const std::vector<WordStep>& word);

struct MbqcRun {
  std::map<size_t, int> outcomes;
  Tableau state;               // 2 * wires qubits; slots[w] holds residual wire w, the rest are |+>
  std::vector<size_t> slots;
  PauliString byproduct;
};

// Column-by-column simulation holding two columns at a time. Missing forced entries are random.
MbqcRun run_mbqc(const MbqcPattern& p, Rng& rng, const std::map<size_t, int>& forced = {});

}  // namespace shallowlab

#endif
