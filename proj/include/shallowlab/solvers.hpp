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

#ifndef SHALLOWLAB_SOLVERS_HPP
#define SHALLOWLAB_SOLVERS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shallowlab/diag.hpp"
#include "shallowlab/parity.hpp"
#include "shallowlab/rng.hpp"
#include "shallowlab/tableau.hpp"

namespace shallowlab {

using FirstRoundElement = WordStep;

struct FirstRoundInput {
  size_t wires = 0;
  std::vector<FirstRoundElement> elements;
  uint64_t digest() const;
};

// Product of all elements as C * D, with C the CNOT part in operator order.
struct NormalForm {
  CnotWord cnots;
  DiagWord diag;
};
NormalForm normal_form(const FirstRoundInput& in);

struct GammaSample {
  FirstRoundInput input;
  DiagWord fprime;  // three wires
};

GammaSample gamma(const DiagWord& f, const CnotWord& word, Rng& rng);

class Transcript {
 public:
  explicit Transcript(std::ostream& out) : out_(&out) {}
  void first_round(const FirstRoundInput& in);
  void second_round(size_t line, const PauliLine& paulis, const std::array<int, 4>& signs);
  void rewind();
  void output(const std::optional<PauliString>& p);

 private:
  std::ostream* out_;
};

class RewindableOracle {
 public:
  virtual ~RewindableOracle() = default;
  virtual void first_round(const FirstRoundInput& in) = 0;
  // Outcomes (+1/-1) of the four commuting Paulis of a line, on the first three wires.
  virtual std::array<int, 4> second_round(const PauliLine& line) = 0;
  virtual void rewind() = 0;
  virtual void reset() = 0;
};

class HonestLogicalDevice : public RewindableOracle {
 public:
  explicit HonestLogicalDevice(uint64_t seed) : rng_(seed) {}
  void first_round(const FirstRoundInput& in) override;
  std::array<int, 4> second_round(const PauliLine& line) override;
  void rewind() override;
  void reset() override;

  const Tableau& state() const { return tableau_; }

 private:
  Rng rng_;
  Tableau tableau_;
  Snapshot after_first_;
  bool ready_ = false;
};

// Tableau of D|+^m>, built row by row.
Tableau diagonal_plus_state(const DiagWord& d);
// Tableau of C D|+^m> for a normal form C * D; C acts as one linear map on the rows.
Tableau normal_form_state(const NormalForm& nf);

// Answers every Pauli with a fixed value, whatever the line; never inconsistent.
class FixedAssignmentDevice : public RewindableOracle {
 public:
  explicit FixedAssignmentDevice(uint64_t seed);
  void first_round(const FirstRoundInput&) override {}
  std::array<int, 4> second_round(const PauliLine& line) override;
  void rewind() override {}
  void reset() override {}

 private:
  std::map<std::string, int> values_;
};

enum class FaultPolicy { UniformRandomInputs, AdversarialFixedSet, ConcentrateOnTarget };
std::string to_string(FaultPolicy p);
FaultPolicy parse_fault_policy(const std::string& s);

struct FaultStats {
  uint64_t first_rounds = 0;
  uint64_t queries = 0;
  uint64_t failed_queries = 0;
  uint64_t sessions_with_failure = 0;
};

// Fails on (first round, line) inputs at rate epsilon and answers failed queries with
// arbitrary signs. UniformRandomInputs draws failures afresh per query; AdversarialFixedSet
// fails on a fixed keyed-hash subset of inputs; ConcentrateOnTarget spends the whole budget
// (rate 2 epsilon) on inputs whose word multiplies to the target class.
class FaultyDevice : public RewindableOracle {
 public:
  FaultyDevice(std::unique_ptr<RewindableOracle> inner, double epsilon, FaultPolicy policy, uint64_t seed,
               bool target_three_cycle = true);
  void first_round(const FirstRoundInput& in) override;
  std::array<int, 4> second_round(const PauliLine& line) override;
  void rewind() override { inner_->rewind(); }
  void reset() override;

  const FaultStats& stats() const { return stats_; }

 private:
  bool fails(const PauliLine& line, uint64_t& answer_bits);

  std::unique_ptr<RewindableOracle> inner_;
  double epsilon_;
  FaultPolicy policy_;
  uint64_t key_;
  bool target_three_cycle_;
  Rng rng_;
  uint64_t input_digest_ = 0;
  bool input_in_target_ = false;
  bool session_failed_ = false;
  FaultStats stats_;
};

// True iff the first half of the first-round input multiplies to the 3-cycle on wires 0..2.
bool first_round_is_three_cycle(const FirstRoundInput& in);

enum class PickRule { First, Uniform };
std::string to_string(PickRule r);
PickRule parse_pick_rule(const std::string& s);

struct RfResult {
  std::optional<PauliString> output;  // unsigned, in the S set
  std::array<std::array<int, 4>, 5> signs{};
  std::vector<size_t> inconsistent;  // star indices
};

RfResult run_Rf(const DiagWord& f, const CnotWord& word, RewindableOracle& oracle, Rng& rng, PickRule rule = PickRule::First,
                Transcript* transcript = nullptr);

// Star indices whose two measurements disagree.
std::vector<size_t> inconsistent_paulis(const std::array<std::array<int, 4>, 5>& signs);

using PauliDistribution = std::map<PauliString, double>;

// For u in H3 (three wires), the distribution of the picked star index when the honest
// device holds u|+++>.
const std::vector<double>& pick_distribution(const DiagWord& u, PickRule rule);
// Errorless output distribution of run_Rf for the given f and permutation.
PauliDistribution exact_Rf0(const DiagWord& f, bool three_cycle, PickRule rule = PickRule::First);
const PauliDistribution& exact_DR(PickRule rule = PickRule::First);
DiagWord conjugate_by_three_cycle(const DiagWord& f);

DiagWord find_blocking_f(const PauliString& p, PickRule rule = PickRule::First);
// Nonstabilizers of |+++> in the S set for which find_blocking_f succeeds, in S order.
const std::vector<PauliString>& blockable_paulis(PickRule rule = PickRule::First);

using RfSampler = std::function<std::optional<PauliString>(const DiagWord& f, Rng& rng)>;
RfSampler oracle_sampler(const CnotWord& word, RewindableOracle& oracle, PickRule rule = PickRule::First);

struct Phase1Result {
  PauliString pauli;
  std::map<PauliString, uint64_t> counts;
  uint64_t failures = 0;
};
// The argmax is taken over `eligible` when given; ties go to the smallest Pauli.
Phase1Result phase1_estimate(const RfSampler& sampler, size_t samples, Rng& rng, const std::vector<PauliString>* eligible = nullptr);

enum class Decision { Identity, ThreeCycle };
struct Phase2Result {
  Decision decision = Decision::ThreeCycle;
  uint64_t hits = 0, samples = 0, failures = 0;
  double frequency() const { return samples ? double(hits) / double(samples) : 0.0; }
};
// Midpoint between delta_bound and the lower bound (1 - delta_bound) / 20 on the identity-case frequency.
double default_phase2_threshold(double delta_bound);
Phase2Result phase2_distinguish(const RfSampler& sampler, const DiagWord& f, const PauliString& target, size_t samples,
                                double threshold, Rng& rng);

struct SolverConfig {
  size_t repetitions = 0;  // 0 means ceil(3 log2 n)
  size_t phase1_samples = 24;
  size_t phase2_samples = 24;
  double delta_bound = 0.02;
  double threshold = -1.0;  // negative means default_phase2_threshold(delta_bound)
  size_t shares = 2;
  PickRule rule = PickRule::First;
};
size_t default_repetitions(size_t n);

struct SolveResult {
  bool parity = false;
  size_t votes_odd = 0, votes_even = 0;
  size_t failed_repetitions = 0;
  uint64_t oracle_runs = 0;
};
SolveResult solve_dagparity(const MonotoneDag& a, RewindableOracle& oracle, const SolverConfig& cfg, Rng& rng);

}  // namespace shallowlab

#endif
