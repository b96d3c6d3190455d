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

#ifndef SHALLOWLAB_NC1_HPP
#define SHALLOWLAB_NC1_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shallowlab/rng.hpp"
#include "shallowlab/tableau.hpp"

namespace shallowlab {

// C_1 ... C_n |++> with the promise that the product is, up to Paulis, I or H (x) H.
struct Nc1Instance {
  std::vector<Circuit> cliffords;  // C_1 first; C_n acts first on |++>
  bool x_basis = true;
};

Nc1Instance random_nc1_instance(size_t n, bool x_basis, Rng& rng);
Tableau nc1_state(const Nc1Instance& inst);

// The 15 nontrivial two-qubit Paulis up to sign, in a fixed order.
const std::array<PauliString, 15>& two_qubit_paulis();
int two_qubit_index(const PauliString& p);
// Nontrivial stabilizers of the state, up to sign.
std::vector<PauliString> nontrivial_stabilizers(const Tableau& t);

enum class Nc1Adversary { FixedStabilizer, UniformStabilizer, UniformPauli };
std::string to_string(Nc1Adversary a);
Nc1Adversary parse_nc1_adversary(const std::string& s);

// Contract model of the extraction subroutine: a uniform nonstabilizer, except that with
// probability 6 epsilon (one of six calls failed) the adversary picks the output.
class ExtractionOracle {
 public:
  ExtractionOracle(const Nc1Instance& inst, double epsilon, Nc1Adversary adversary, uint64_t seed);
  PauliString sample();
  double failure_rate() const { return 6.0 * epsilon_; }
  const std::vector<PauliString>& stabilizers() const { return stab_; }
  const std::vector<PauliString>& nonstabilizers() const { return nonstab_; }
  uint64_t failures() const { return failures_; }

 private:
  double epsilon_;
  Nc1Adversary adversary_;
  Rng rng_;
  std::vector<PauliString> stab_, nonstab_;
  uint64_t failures_ = 0;
};

// sigma = (1 - 30 epsilon) / 12, the gap between the stabilizer and nonstabilizer bounds.
double nc1_sigma(double epsilon);
size_t nc1_sample_count(double c, double epsilon);

struct Nc1Estimate {
  std::array<uint64_t, 15> counts{};
  uint64_t samples = 0;
  std::vector<PauliString> below_threshold;
  std::vector<PauliString> group;        // reconstructed nontrivial stabilizers, empty if undecided
  std::optional<bool> x_basis;           // nullopt when undecided
  double frequency(size_t i) const { return samples ? double(counts[i]) / double(samples) : 0.0; }
};

// Paulis below the threshold are taken as stabilizers. The group is the commuting triple
// holding at least two of them with the smallest total frequency; a tie or no such triple
// leaves the result undecided.
Nc1Estimate nc1_estimate(ExtractionOracle& oracle, size_t samples, double threshold = 1.0 / 15.0);
Nc1Estimate nc1_classify(const std::array<uint64_t, 15>& counts, double threshold = 1.0 / 15.0);

}  // namespace shallowlab

#endif
