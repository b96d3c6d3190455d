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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "oracles/bit_vectors.hpp"
#include "oracles/dense_state.hpp"
#include "oracles/dense_words.hpp"
#include "shallowlab/devices.hpp"
#include "shallowlab/nc1.hpp"
#include "shallowlab/solvers.hpp"

using namespace shallowlab;
using oracle::DenseUnitary;

namespace {

using oracle::dense_cnot;
using oracle::dense_diag;
using oracle::dense_word;

CnotGate random_cnot(size_t m, Rng& rng) {
  uint32_t c = uint32_t(random_below(rng, m));
  uint32_t t = uint32_t(random_below(rng, m - 1));
  if (t >= c) ++t;
  return {c, t};
}

CnotWord random_word(size_t m, size_t len, Rng& rng) {
  CnotWord w{m, {}};
  for (size_t i = 0; i < len; ++i) w.gates.push_back(random_cnot(m, rng));
  return w;
}

CnotWord concat(CnotWord a, const CnotWord& b) {
  a.gates.insert(a.gates.end(), b.gates.begin(), b.gates.end());
  return a;
}

CnotWord reversed_word(CnotWord w) {
  std::reverse(w.gates.begin(), w.gates.end());
  return w;
}

// Shortest word on three wires sending wire 0 to 1, 1 to 2 and 2 to 0.
CnotWord cycle_word(size_t m) {
  // swap(0,2) * swap(0,1), each as three CNOTs.
  CnotWord w{m, {{0, 2}, {2, 0}, {0, 2}, {0, 1}, {1, 0}, {0, 1}}};
  return w;
}

CnotWord identity_on(size_t m, Rng& rng) {
  CnotWord w = random_word(m, 5, rng);
  return concat(w, reversed_word(w));
}

DiagWord random_even(Rng& rng) { return sample_uniform_H3_even(rng); }

double weight(const PauliDistribution& d, const PauliString& p) {
  auto it = d.find(unsigned_pauli(p));
  return it == d.end() ? 0.0 : it->second;
}

// Upper tail of chi-square via the Wilson-Hilferty cube-root approximation.
double chi2_pvalue(double x, double df) {
  double z = (std::cbrt(x / df) - (1.0 - 2.0 / (9.0 * df))) / std::sqrt(2.0 / (9.0 * df));
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

class CountingOracle : public RewindableOracle {
 public:
  explicit CountingOracle(RewindableOracle& inner) : inner_(inner) {}
  void first_round(const FirstRoundInput& in) override {
    ++first_rounds;
    inner_.first_round(in);
  }
  std::array<int, 4> second_round(const PauliLine& line) override {
    for (const auto& p : line) ++measured[p.letters()];
    ++queries;
    return inner_.second_round(line);
  }
  void rewind() override {
    ++rewinds;
    inner_.rewind();
  }
  void reset() override { inner_.reset(); }

  std::map<std::string, int> measured;
  int first_rounds = 0, queries = 0, rewinds = 0;

 private:
  RewindableOracle& inner_;
};

struct FixedSampler {
  std::vector<std::pair<PauliString, double>> dist;
  std::optional<PauliString> operator()(const DiagWord&, Rng& rng) const {
    double u = random_unit(rng), acc = 0;
    for (const auto& [p, w] : dist) {
      acc += w;
      if (u < acc) return p;
    }
    return std::nullopt;
  }
};

}  // namespace

TEST(CycleWord, IsTheThreeCycle) {
  EXPECT_TRUE(oracle::is_three_cycle(oracle::word_columns(cycle_word(3))));
  EXPECT_EQ(word_matrix(cycle_word(5)), three_cycle_matrix(5));
}

TEST(Gamma, DenseProductMatchesOnThreeWires) {
  Rng rng = make_rng(1001, 0);
  for (int trial = 0; trial < 60; ++trial) {
    CnotWord w = trial % 2 ? cycle_word(3) : random_word(3, 1 + trial % 5, rng);
    DiagWord f = random_even(rng);
    GammaSample gs = gamma(f, w, rng);
    ASSERT_EQ(gs.input.elements.size(), 2 * w.gates.size());
    DenseUnitary prod(3);
    for (const auto& e : gs.input.elements) prod = prod.times(dense_cnot(3, e.cnot)).times(dense_diag(e.diag));
    DenseUnitary pi = dense_word(w);
    DenseUnitary expect = dense_diag(gs.fprime).times(pi).times(dense_diag(f)).times(pi.adjoint());
    EXPECT_TRUE(prod.approx_equal(expect)) << "trial " << trial;
  }
}

TEST(Gamma, CosetCondition) {
  Rng rng = make_rng(1002, 0);
  CnotWord w = concat(cycle_word(7), random_word(7, 9, rng));
  GammaSample gs = gamma(random_even(rng), w, rng);
  size_t n = w.gates.size();
  for (size_t i = 0; i < 2 * n; ++i) {
    const CnotGate& want = i < n ? w.gates[i] : w.gates[2 * n - 1 - i];
    EXPECT_EQ(gs.input.elements[i].cnot, want) << i;
    EXPECT_EQ(gs.input.elements[i].diag.wires(), 7u);
  }
}

TEST(Gamma, ProductConditionOnLargerWires) {
  Rng rng = make_rng(1003, 0);
  for (int trial = 0; trial < 200; ++trial) {
    bool cyc = trial % 2;
    size_t m = 4 + trial % 5;
    CnotWord pad = identity_on(m, rng);
    CnotWord w = cyc ? concat(cycle_word(m), pad) : pad;
    DiagWord f = random_even(rng);
    GammaSample gs = gamma(f, w, rng);
    EXPECT_FALSE(gs.fprime.parity());
    NormalForm nf = normal_form(gs.input);
    EXPECT_TRUE(word_matrix(nf.cnots) == Gf2Matrix::identity(m));
    DiagWord want = gs.fprime * (cyc ? conjugate_by_three_cycle(f) : f);
    EXPECT_EQ(nf.diag, want.extended(m)) << "trial " << trial;
    EXPECT_FALSE(nf.diag.parity());
    EXPECT_EQ(first_round_is_three_cycle(gs.input), cyc);
  }
}

TEST(Gamma, InternalElementsLookUniform) {
  // Interior diagonal parts are masked by fresh uniform draws: each exponent bit is balanced.
  Rng rng = make_rng(1004, 0);
  CnotWord w = concat(cycle_word(4), random_word(4, 3, rng));
  DiagWord f = random_even(rng);
  const int trials = 4000;
  std::vector<int> ones(4, 0);
  for (int t = 0; t < trials; ++t) {
    GammaSample gs = gamma(f, w, rng);
    const DiagWord& d = gs.input.elements[3].diag;
    ones[0] += d.s(0) & 1;
    ones[1] += d.s(2) >> 1;
    ones[2] += d.cz(0, 3);
    ones[3] += d.cz(1, 2);
  }
  for (int c : ones) EXPECT_NEAR(double(c) / trials, 0.5, 0.04);
}

TEST(Gamma, RejectsBadShapes) {
  Rng rng = make_rng(1005, 0);
  EXPECT_THROW(gamma(DiagWord(3), CnotWord{3, {}}, rng), std::invalid_argument);
  EXPECT_THROW(gamma(DiagWord(4), cycle_word(4), rng), std::invalid_argument);
  EXPECT_THROW(gamma(DiagWord(3), CnotWord{2, {{0, 1}}}, rng), std::invalid_argument);
}

TEST(NormalFormState, MatchesGateByGateTableau) {
  Rng rng = make_rng(1006, 0);
  for (int trial = 0; trial < 50; ++trial) {
    size_t m = 3 + trial % 6;
    GammaSample gs = gamma(random_even(rng), random_word(m, 6, rng), rng);
    NormalForm nf = normal_form(gs.input);
    Tableau fast = normal_form_state(nf);
    Tableau slow = diagonal_plus_state(nf.diag);
    for (auto it = nf.cnots.gates.rbegin(); it != nf.cnots.gates.rend(); ++it) slow.cnot(it->control, it->target);
    EXPECT_TRUE(fast.check_invariants());
    EXPECT_EQ(fast.snapshot(), slow.snapshot()) << "trial " << trial;
  }
}

TEST(NormalFormState, StabilizesDenseState) {
  Rng rng = make_rng(1007, 0);
  for (int trial = 0; trial < 30; ++trial) {
    size_t m = 3 + trial % 3;
    GammaSample gs = gamma(random_even(rng), random_word(m, 4, rng), rng);
    NormalForm nf = normal_form(gs.input);
    oracle::DenseState psi(m);
    for (size_t q = 0; q < m; ++q) psi.h(q);
    DenseUnitary u = dense_word(nf.cnots).times(dense_diag(nf.diag));
    std::vector<oracle::cd> out(psi.amplitudes().size(), 0.0);
    for (size_t c = 0; c < out.size(); ++c)
      for (size_t r = 0; r < out.size(); ++r) out[r] += u.at(r, c) * psi.amplitudes()[c];
    psi.amplitudes() = out;
    Tableau t = normal_form_state(nf);
    for (size_t i = 0; i < m; ++i) EXPECT_TRUE(psi.stabilized_by(t.stabilizer(i))) << trial << " row " << i;
  }
}

TEST(HonestRun, OutputsOnlyNonstabilizersOfS) {
  // With f = I the output is a nonstabilizer of |+++>; otherwise it is the conjugate by
  // pi f pi^-1 of one.
  const auto& pc = pentagram();
  std::set<PauliString> nonstab(pc.nonstab.begin(), pc.nonstab.end());
  Rng rng = make_rng(1008, 0);
  HonestLogicalDevice dev(7);
  for (int trial = 0; trial < 400; ++trial) {
    size_t m = 3 + trial % 4;
    bool cyc = trial % 2;
    CnotWord w = cyc ? concat(cycle_word(m), identity_on(m, rng)) : identity_on(m, rng);
    DiagWord f = trial % 3 ? random_even(rng) : DiagWord(3);
    RfResult r = run_Rf(f, w, dev, rng);
    ASSERT_TRUE(r.output.has_value()) << "trial " << trial;
    EXPECT_FALSE(r.inconsistent.empty());
    DiagWord conj = cyc ? conjugate_by_three_cycle(f) : f;
    PauliString back = unsigned_pauli(bullet(conj.inverse(), *r.output));
    EXPECT_TRUE(nonstab.count(back)) << r.output->letters() << " trial " << trial;
    if (f.is_identity()) {
      EXPECT_TRUE(nonstab.count(*r.output));
    }
  }
}

TEST(HonestRun, EachStarPauliMeasuredExactlyTwice) {
  Rng rng = make_rng(1009, 0);
  HonestLogicalDevice dev(8);
  CountingOracle counter(dev);
  run_Rf(random_even(rng), cycle_word(4), counter, rng);
  EXPECT_EQ(counter.first_rounds, 1);
  EXPECT_EQ(counter.queries, 5);
  EXPECT_EQ(counter.rewinds, 5);
  ASSERT_EQ(counter.measured.size(), pentagram().star.size());
  for (const auto& p : pentagram().star) EXPECT_EQ(counter.measured[p.letters()], 2) << p.letters();
}

TEST(FixedAssignment, NeverProducesAnOutput) {
  Rng rng = make_rng(1010, 0);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    FixedAssignmentDevice dev(seed);
    RfResult r = run_Rf(random_even(rng), cycle_word(3), dev, rng);
    EXPECT_FALSE(r.output.has_value());
    EXPECT_TRUE(r.inconsistent.empty());
  }
}

TEST(ExactDistributions, RfZeroIsConjugatedDR) {
  const auto& dr = exact_DR();
  double total = 0;
  for (const auto& [p, w] : dr) total += w;
  EXPECT_NEAR(total, 1.0, 1e-12);
  const auto& group = all_H3_even();
  for (size_t i = 0; i < group.size(); i += 17) {
    const DiagWord& f = group[i];
    auto rf = exact_Rf0(f, false);
    for (const auto& [p, w] : dr) EXPECT_NEAR(weight(rf, bullet(f, p)), w, 1e-12) << i << " " << p.letters();
  }
}

TEST(ExactDistributions, SupportIsNonstabilizers) {
  const auto& pc = pentagram();
  std::set<PauliString> nonstab(pc.nonstab.begin(), pc.nonstab.end());
  for (PickRule rule : {PickRule::First, PickRule::Uniform}) {
    const auto& dr = exact_DR(rule);
    EXPECT_EQ(dr.size(), pc.nonstab.size());
    for (const auto& [p, w] : dr) {
      EXPECT_TRUE(nonstab.count(p)) << p.letters();
      EXPECT_GT(w, 0.0);
    }
  }
  EXPECT_NEAR(weight(exact_DR(), PauliString::parse("XYY")), 160.0 / 1024, 1e-12);
}

TEST(ExactDistributions, PickDistributionSumsToOne) {
  for (unsigned idx = 0; idx < 512; idx += 37) {
    const auto& pd = pick_distribution(DiagWord::from_index3(idx), PickRule::Uniform);
    double s = 0;
    for (double v : pd) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(HonestRun, OutputDistributionMatchesExactForThreeF) {
  Rng rng = make_rng(1011, 0);
  HonestLogicalDevice dev(9);
  CnotWord w = identity_on(4, rng);
  const int samples = 3000;
  for (int k = 0; k < 3; ++k) {
    DiagWord f = k == 0 ? DiagWord(3) : random_even(rng);
    auto expect = exact_Rf0(f, false);
    std::map<PauliString, int> seen;
    for (int s = 0; s < samples; ++s) ++seen[*run_Rf(f, w, dev, rng).output];
    // Bins with small expectation are pooled.
    double stat = 0, pooled_e = 0;
    int pooled_o = 0, bins = 0;
    for (const auto& [p, pr] : expect) {
      double e = pr * samples;
      int o = seen.count(p) ? seen[p] : 0;
      if (e < 20) {
        pooled_e += e;
        pooled_o += o;
        continue;
      }
      stat += (o - e) * (o - e) / e;
      ++bins;
    }
    if (pooled_e > 0) {
      stat += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
      ++bins;
    }
    for (const auto& [p, c] : seen) EXPECT_TRUE(expect.count(p)) << p.letters();
    EXPECT_GT(chi2_pvalue(stat, bins - 1), 0.01) << "f " << k << " stat " << stat;
  }
}

TEST(Blocking, ExhaustiveOverEvenGroup) {
  // Independent brute force: for every nonstabilizer P, search all of H3 even for an f that
  // removes f.P from the cycle-case distribution.
  const auto& pc = pentagram();
  const auto& group = all_H3_even();
  std::vector<std::string> blockable, unblockable;
  for (const auto& p : pc.nonstab) {
    bool found = false;
    for (const auto& f : group) {
      if (weight(exact_Rf0(f, true), bullet(f, p)) == 0.0) {
        found = true;
        break;
      }
    }
    (found ? blockable : unblockable).push_back(p.letters());
  }
  EXPECT_EQ(blockable.size(), blockable_paulis().size());
  std::vector<std::string> lib;
  for (const auto& p : blockable_paulis()) lib.push_back(p.letters());
  EXPECT_EQ(blockable, lib);
  EXPECT_EQ(unblockable, (std::vector<std::string>{"XXY", "XYX", "YXX", "YYY"}));
}

TEST(Blocking, FoundFBlocksAndKeepsIdentityWeight) {
  const auto& dr = exact_DR();
  for (const auto& p : blockable_paulis()) {
    DiagWord f = find_blocking_f(p);
    EXPECT_FALSE(f.parity());
    EXPECT_EQ(weight(exact_Rf0(f, true), bullet(f, p)), 0.0) << p.letters();
    EXPECT_NEAR(weight(exact_Rf0(f, false), bullet(f, p)), weight(dr, p), 1e-12);
  }
  EXPECT_THROW(find_blocking_f(PauliString::parse("XXY")), std::logic_error);
}

TEST(Phase1, ArgmaxRespectsEligibleAndTies) {
  PauliString a = PauliString::parse("XYY"), b = PauliString::parse("XXY"), c = PauliString::parse("YXY");
  FixedSampler s{{{b, 0.6}, {a, 0.25}, {c, 0.15}}};
  Rng rng = make_rng(1012, 0);
  auto r = phase1_estimate(std::cref(s), 2000, rng);
  EXPECT_EQ(r.pauli, b);
  std::vector<PauliString> eligible{a, c};
  r = phase1_estimate(std::cref(s), 2000, rng, &eligible);
  EXPECT_EQ(r.pauli, a);
  std::vector<PauliString> none{PauliString::parse("ZZZ")};
  r = phase1_estimate(std::cref(s), 50, rng, &none);
  EXPECT_EQ(r.pauli.size(), 0u);

  RfSampler alternate = [n = 0, a, c](const DiagWord&, Rng&) mutable { return (n++ % 2) ? a : c; };
  r = phase1_estimate(alternate, 10, rng);
  EXPECT_EQ(r.pauli, std::min(a, c));

  FixedSampler dead{{}};
  EXPECT_THROW(phase1_estimate(std::cref(dead), 10, rng), std::runtime_error);
}

TEST(Phase2, SeparatesAdversaryAtDeltaOneTwentyFifth) {
  double delta = 1.0 / 25;
  double thr = default_phase2_threshold(delta);
  EXPECT_GT(thr, delta);
  EXPECT_LT(thr, (1 - delta) / 20);
  PauliString t = PauliString::parse("XYY"), other = PauliString::parse("YXY");
  // Cycle case: the adversary puts all of its delta mass on the target.
  FixedSampler cyc{{{t, delta}, {other, 1 - delta}}};
  // Identity case: the target keeps its lowest admissible weight.
  FixedSampler id{{{t, (1 - delta) / 20}, {other, 1 - (1 - delta) / 20}}};
  Rng rng = make_rng(1013, 0);
  DiagWord f(3);
  for (int rep = 0; rep < 5; ++rep) {
    EXPECT_EQ(phase2_distinguish(std::cref(cyc), f, t, 200000, thr, rng).decision, Decision::ThreeCycle);
    EXPECT_EQ(phase2_distinguish(std::cref(id), f, t, 200000, thr, rng).decision, Decision::Identity);
  }
  FixedSampler dead{{}};
  EXPECT_THROW(phase2_distinguish(std::cref(dead), f, t, 10, thr, rng), std::runtime_error);
}

TEST(Faulty, UniformRateAndFiveEpsilonSessionBound) {
  double eps = 0.01;
  Rng rng = make_rng(1014, 0);
  FaultyDevice dev(std::make_unique<HonestLogicalDevice>(3), eps, FaultPolicy::UniformRandomInputs, 5);
  CnotWord w = cycle_word(3);
  for (int i = 0; i < 4000; ++i) run_Rf(random_even(rng), w, dev, rng);
  const auto& st = dev.stats();
  EXPECT_EQ(st.queries, 5 * st.first_rounds);
  double q = double(st.failed_queries) / double(st.queries);
  EXPECT_NEAR(q, eps, 0.004);
  EXPECT_LE(double(st.sessions_with_failure) / double(st.first_rounds), 5 * eps + 0.01);
}

TEST(Faulty, FixedSetIsAFunctionOfTheInput) {
  Rng rng = make_rng(1015, 0);
  GammaSample gs = gamma(random_even(rng), cycle_word(3), rng);
  const auto& pc = pentagram();
  FaultyDevice dev(std::make_unique<HonestLogicalDevice>(4), 0.5, FaultPolicy::AdversarialFixedSet, 6);
  std::vector<uint64_t> pattern;
  for (int rep = 0; rep < 3; ++rep) {
    dev.first_round(gs.input);
    uint64_t before = dev.stats().failed_queries;
    uint64_t bits = 0;
    for (size_t l = 0; l < 5; ++l) {
      uint64_t f0 = dev.stats().failed_queries;
      dev.second_round(pc.lines[l]);
      dev.rewind();
      if (dev.stats().failed_queries != f0) bits |= uint64_t{1} << l;
    }
    pattern.push_back(bits);
    EXPECT_GE(dev.stats().failed_queries, before);
  }
  EXPECT_EQ(pattern[0], pattern[1]);
  EXPECT_EQ(pattern[1], pattern[2]);
}

TEST(Faulty, ConcentrateOnlyHitsTargetClass) {
  Rng rng = make_rng(1016, 0);
  double eps = 0.05;
  FaultyDevice dev(std::make_unique<HonestLogicalDevice>(5), eps, FaultPolicy::ConcentrateOnTarget, 7);
  for (int i = 0; i < 300; ++i) run_Rf(random_even(rng), identity_on(4, rng), dev, rng);
  EXPECT_EQ(dev.stats().failed_queries, 0u);
  for (int i = 0; i < 1500; ++i) run_Rf(random_even(rng), cycle_word(4), dev, rng);
  double q = double(dev.stats().failed_queries) / (1500.0 * 5);
  EXPECT_NEAR(q, 2 * eps, 0.025);
}

TEST(Faulty, ParsesPolicies) {
  for (auto p : {FaultPolicy::UniformRandomInputs, FaultPolicy::AdversarialFixedSet, FaultPolicy::ConcentrateOnTarget})
    EXPECT_EQ(parse_fault_policy(to_string(p)), p);
  EXPECT_THROW(parse_fault_policy("sometimes"), std::invalid_argument);
  EXPECT_THROW(FaultyDevice(std::make_unique<HonestLogicalDevice>(1), 1.5, FaultPolicy::UniformRandomInputs, 1),
               std::invalid_argument);
  EXPECT_EQ(parse_pick_rule("uniform"), PickRule::Uniform);
  EXPECT_THROW(parse_pick_rule("last"), std::invalid_argument);
}

TEST(Rewind, RestoresPostFirstRoundState) {
  Rng rng = make_rng(1017, 0);
  HonestLogicalDevice dev(11);
  GammaSample gs = gamma(random_even(rng), concat(cycle_word(5), identity_on(5, rng)), rng);
  dev.first_round(gs.input);
  Snapshot start = dev.state().snapshot();
  for (const auto& line : pentagram().lines) {
    dev.second_round(line);
    dev.rewind();
    EXPECT_EQ(dev.state().snapshot(), start);
  }
  dev.reset();
  EXPECT_THROW(dev.second_round(pentagram().lines[0]), std::logic_error);
}

TEST(Rewind, RepeatedLineQueriesAreIndependentDraws) {
  // After a rewind the same line is measured on a fresh copy, so outcomes of non-commuting
  // components vary across rewinds instead of repeating the collapsed value.
  Rng rng = make_rng(1018, 0);
  HonestLogicalDevice dev(12);
  GammaSample gs = gamma(DiagWord(3), identity_on(3, rng), rng);
  dev.first_round(gs.input);
  std::set<std::array<int, 4>> outcomes;
  for (int i = 0; i < 64; ++i) {
    outcomes.insert(dev.second_round(pentagram().lines[0]));
    dev.rewind();
  }
  EXPECT_GT(outcomes.size(), 1u);
}

TEST(Transcript, RecordsOneRun) {
  Rng rng = make_rng(1019, 0);
  HonestLogicalDevice dev(13);
  std::ostringstream os;
  Transcript tr(os);
  RfResult r = run_Rf(random_even(rng), cycle_word(3), dev, rng, PickRule::First, &tr);
  std::istringstream is(os.str());
  std::vector<nlohmann::json> events;
  for (std::string line; std::getline(is, line);) events.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(events.size(), 1u + 5 * 2 + 1);
  EXPECT_EQ(events.front()["event"], "first_round");
  EXPECT_EQ(events.front()["digest"].get<std::string>().size(), 16u);
  for (size_t l = 0; l < 5; ++l) {
    EXPECT_EQ(events[1 + 2 * l]["event"], "second_round");
    EXPECT_EQ(events[1 + 2 * l]["line"], l);
    EXPECT_EQ(events[1 + 2 * l]["paulis"].size(), 4u);
    EXPECT_EQ(events[2 + 2 * l]["event"], "rewind");
  }
  EXPECT_EQ(events.back()["event"], "output");
  EXPECT_EQ(events.back()["pauli"], r.output->letters());
}

TEST(Digest, SensitiveToCnotsAndEnds) {
  Rng rng = make_rng(1020, 0);
  GammaSample gs = gamma(random_even(rng), cycle_word(4), rng);
  FirstRoundInput a = gs.input;
  EXPECT_EQ(a.digest(), gs.input.digest());
  a.elements.front().diag.add_s(1, 1);
  EXPECT_NE(a.digest(), gs.input.digest());
  a = gs.input;
  std::swap(a.elements[0].cnot, a.elements[1].cnot);
  EXPECT_NE(a.digest(), gs.input.digest());
}

TEST(Solver, HonestSmallInstances) {
  SolverConfig cfg;
  cfg.repetitions = 5;
  cfg.phase1_samples = 12;
  cfg.phase2_samples = 16;
  Rng rng = make_rng(1021, 0);
  int correct = 0;
  const int instances = 6;
  for (int i = 0; i < instances; ++i) {
    MonotoneDag a = MonotoneDag::from_mask(3, rng() & 7);
    HonestLogicalDevice dev(rng());
    SolveResult r = solve_dagparity(a, dev, cfg, rng);
    EXPECT_EQ(r.failed_repetitions, 0u);
    EXPECT_EQ(r.votes_odd + r.votes_even, 5u);
    correct += r.parity == path_parity_bruteforce(a);
  }
  EXPECT_EQ(correct, instances);
}

TEST(Solver, FixedAssignmentFailsEveryRepetition) {
  SolverConfig cfg;
  cfg.repetitions = 3;
  cfg.phase1_samples = 4;
  Rng rng = make_rng(1022, 0);
  FixedAssignmentDevice dev(1);
  SolveResult r = solve_dagparity(MonotoneDag::from_mask(3, 5), dev, cfg, rng);
  EXPECT_EQ(r.failed_repetitions, 3u);
  EXPECT_EQ(r.votes_odd + r.votes_even, 0u);
}

TEST(Solver, DefaultRepetitions) {
  EXPECT_EQ(default_repetitions(6), 8u);
  EXPECT_EQ(default_repetitions(2), 3u);
}

TEST(Devices, MbqcAndEncodedAgreeWithLogicalOnStarPaulis) {
  Rng rng = make_rng(1030, 0);
  const auto& star = pentagram().star;
  for (int trial = 0; trial < 12; ++trial) {
    size_t m = 3 + trial % 2;
    CnotWord w = trial % 2 ? concat(cycle_word(m), identity_on(m, rng)) : identity_on(m, rng);
    GammaSample gs = gamma(random_even(rng), w, rng);
    HonestLogicalDevice logical(1);
    HonestMbqcDevice mbqc(2);
    NoisyEncodedDevice encoded(3, NoiseSpec::none(), 3);
    logical.first_round(gs.input);
    mbqc.first_round(gs.input);
    encoded.first_round(gs.input);
    const MbqcRun& run = mbqc.last_run();
    const size_t n = encoded.reg().qubits();
    SurfaceCode code(3);
    for (const auto& p : star) {
      PauliString lp(m), mp(run.state.num_qubits()), ep(n);
      for (size_t q = 0; q < 3; ++q) {
        lp.set(q, p.at(q));
        mp.set(run.slots[q], p.at(q));
        if (p.at(q) != 'I') ep *= code.logical_operator(n, q, p.at(q));
      }
      auto expect = logical.state().peek(lp);
      auto got = run.state.peek(mp);
      if (got && !run.byproduct.commutes(lp)) got = -*got;
      EXPECT_EQ(got, expect) << p.letters() << " trial " << trial;
      EXPECT_EQ(encoded.reg().state.peek(ep), expect) << p.letters() << " trial " << trial;
    }
  }
}

TEST(Devices, MbqcAndEncodedRunsOutputNonstabilizers) {
  const auto& pc = pentagram();
  std::set<PauliString> nonstab(pc.nonstab.begin(), pc.nonstab.end());
  Rng rng = make_rng(1031, 0);
  HonestMbqcDevice mbqc(5);
  NoisyEncodedDevice encoded(3, NoiseSpec::none(), 6);
  for (int trial = 0; trial < 20; ++trial) {
    CnotWord w = identity_on(3, rng);
    RfResult a = run_Rf(DiagWord(3), w, mbqc, rng);
    RfResult b = run_Rf(DiagWord(3), w, encoded, rng);
    ASSERT_TRUE(a.output && b.output);
    EXPECT_TRUE(nonstab.count(*a.output));
    EXPECT_TRUE(nonstab.count(*b.output));
  }
}

TEST(Devices, EncodedRewindAndNoise) {
  Rng rng = make_rng(1032, 0);
  NoisyEncodedDevice dev(3, {0.01, NoiseKind::IidDepolarizing, 'X'}, 7);
  GammaSample gs = gamma(random_even(rng), identity_on(3, rng), rng);
  dev.first_round(gs.input);
  Snapshot start = dev.reg().state.snapshot();
  dev.second_round(pentagram().lines[2]);
  dev.rewind();
  EXPECT_EQ(dev.reg().state.snapshot(), start);
  dev.reset();
  EXPECT_THROW(dev.second_round(pentagram().lines[0]), std::logic_error);
  HonestMbqcDevice mbqc(8);
  EXPECT_THROW(mbqc.second_round(pentagram().lines[0]), std::logic_error);
}

TEST(Nc1, InstancesHonorThePromise) {
  Rng rng = make_rng(1100, 0);
  for (int i = 0; i < 100; ++i) {
    bool xb = i % 2;
    Nc1Instance inst = random_nc1_instance(1 + i % 7, xb, rng);
    // Dense check of C_1 ... C_n |++>.
    oracle::DenseState psi(2);
    psi.h(0);
    psi.h(1);
    for (size_t k = inst.cliffords.size(); k-- > 0;)
      for (const auto& g : inst.cliffords[k]) psi.apply(g);
    const char* a = xb ? "XI" : "ZI";
    const char* b = xb ? "IX" : "IZ";
    for (const char* l : {a, b}) {
      PauliString p = PauliString::parse(l);
      bool plus = psi.stabilized_by(p);
      p.set_phase(2);
      EXPECT_TRUE(plus || psi.stabilized_by(p)) << l << " instance " << i;
    }
    auto st = nontrivial_stabilizers(nc1_state(inst));
    ASSERT_EQ(st.size(), 3u);
  }
}

TEST(Nc1, PaulisAndTriples) {
  const auto& ps = two_qubit_paulis();
  std::set<std::string> seen;
  for (const auto& p : ps) seen.insert(p.letters());
  EXPECT_EQ(seen.size(), 15u);
  EXPECT_EQ(seen.count("II"), 0u);
  EXPECT_EQ(two_qubit_index(PauliString::parse("-YZ")), two_qubit_index(PauliString::parse("YZ")));
  EXPECT_EQ(two_qubit_index(PauliString::parse("XYZ")), -1);
}

TEST(Nc1, ErrorFreeFrequencies) {
  Rng rng = make_rng(1101, 0);
  Nc1Instance inst = random_nc1_instance(5, false, rng);
  ExtractionOracle o(inst, 0.0, Nc1Adversary::FixedStabilizer, 3);
  Nc1Estimate e = nc1_estimate(o, 100000);
  std::set<std::string> stab;
  for (const auto& p : o.stabilizers()) stab.insert(p.letters());
  for (size_t i = 0; i < 15; ++i) {
    if (stab.count(two_qubit_paulis()[i].letters()))
      EXPECT_EQ(e.counts[i], 0u);
    else
      EXPECT_NEAR(e.frequency(i), 1.0 / 12, 0.01);
  }
  ASSERT_TRUE(e.x_basis.has_value());
  EXPECT_FALSE(*e.x_basis);
  EXPECT_EQ(e.group.size(), 3u);
}

TEST(Nc1, SigmaAndSampleCount) {
  EXPECT_NEAR(nc1_sigma(0.0), 1.0 / 12, 1e-15);
  EXPECT_NEAR(nc1_sigma(0.02), 0.4 / 12, 1e-15);
  EXPECT_EQ(nc1_sample_count(1.0, 0.0), 144u);
  EXPECT_THROW(nc1_sample_count(1.0, 1.0 / 30), std::invalid_argument);
}

TEST(Nc1, FixedStabilizerAdversaryAtTwoPercent) {
  // All failure mass (6 eps = 0.12) lands on one stabilizer, which then clears the 1/15
  // threshold; the other two stabilizers still pin the group down.
  Rng rng = make_rng(1102, 0);
  double eps = 0.02;
  size_t n = nc1_sample_count(4.0, eps);
  int correct = 0;
  const int reps = 60;
  for (int r = 0; r < reps; ++r) {
    bool xb = r % 2;
    Nc1Instance inst = random_nc1_instance(4, xb, rng);
    ExtractionOracle o(inst, eps, Nc1Adversary::FixedStabilizer, rng());
    Nc1Estimate e = nc1_estimate(o, n);
    correct += e.x_basis && *e.x_basis == xb;
  }
  EXPECT_GE(correct, reps * 2 / 3);
}

TEST(Nc1, ClassifyHandlesDegenerateTallies) {
  std::array<uint64_t, 15> flat;
  flat.fill(10);
  Nc1Estimate e = nc1_classify(flat);
  EXPECT_FALSE(e.x_basis.has_value());
  EXPECT_TRUE(e.group.empty());
  std::array<uint64_t, 15> zero{};
  e = nc1_classify(zero);
  EXPECT_FALSE(e.x_basis.has_value());
  // A Bell-like group is coherent but neither basis.
  std::array<uint64_t, 15> bell;
  bell.fill(100);
  for (const char* l : {"XX", "ZZ", "YY"}) bell[two_qubit_index(PauliString::parse(l))] = 0;
  e = nc1_classify(bell);
  EXPECT_EQ(e.group.size(), 3u);
  EXPECT_FALSE(e.x_basis.has_value());
}

TEST(Nc1, OracleValidation) {
  Rng rng = make_rng(1103, 0);
  Nc1Instance inst = random_nc1_instance(2, true, rng);
  EXPECT_THROW(ExtractionOracle(inst, 0.5, Nc1Adversary::UniformPauli, 1), std::invalid_argument);
  EXPECT_THROW(random_nc1_instance(0, true, rng), std::invalid_argument);
  EXPECT_EQ(parse_nc1_adversary(to_string(Nc1Adversary::UniformStabilizer)), Nc1Adversary::UniformStabilizer);
  EXPECT_THROW(parse_nc1_adversary("mean"), std::invalid_argument);
}
