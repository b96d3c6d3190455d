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

#include "shallowlab/nc1.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shallowlab {

namespace {

Circuit random_two_qubit_clifford(Rng& rng, size_t len) {
  Circuit c;
  for (size_t i = 0; i < len; ++i) {
    uint32_t q = uint32_t(random_bit(rng));
    switch (random_below(rng, 6)) {
      case 0: c.push_back(CliffordGate::h(q)); break;
      case 1: c.push_back(CliffordGate::s(q)); break;
      case 2: c.push_back(CliffordGate::cnot(q, 1 - q)); break;
      case 3: c.push_back(CliffordGate::cz(0, 1)); break;
      case 4: c.push_back(CliffordGate::x(q)); break;
      default: c.push_back(CliffordGate::z(q)); break;
    }
  }
  return c;
}

// Commuting triples {a, b, ab} of nontrivial two-qubit Paulis, as index triples.
const std::vector<std::array<int, 3>>& isotropic_triples() {
  static const std::vector<std::array<int, 3>> triples = [] {
    std::vector<std::array<int, 3>> out;
    const auto& ps = two_qubit_paulis();
    for (int a = 0; a < 15; ++a)
      for (int b = a + 1; b < 15; ++b) {
        if (!ps[a].commutes(ps[b])) continue;
        int c = two_qubit_index(ps[a] * ps[b]);
        if (c > b) out.push_back({a, b, c});
      }
    return out;
  }();
  return triples;
}

}  // namespace

Nc1Instance random_nc1_instance(size_t n, bool x_basis, Rng& rng) {
  if (n < 1) throw std::invalid_argument("need at least one Clifford");
  Nc1Instance inst;
  inst.x_basis = x_basis;
  Circuit prefix;  // C_1 ... C_{n-1} in application order
  for (size_t i = 0; i + 1 < n; ++i) inst.cliffords.push_back(random_two_qubit_clifford(rng, 6));
  for (size_t i = inst.cliffords.size(); i-- > 0;)
    prefix.insert(prefix.end(), inst.cliffords[i].begin(), inst.cliffords[i].end());
  // C_n = (C_1 ... C_{n-1})^-1 T P with T in {I, H (x) H} and P a random Pauli.
  Circuit last;
  for (uint32_t q = 0; q < 2; ++q) {
    if (random_bit(rng)) last.push_back(CliffordGate::x(q));
    if (random_bit(rng)) last.push_back(CliffordGate::z(q));
  }
  if (!x_basis) {
    last.push_back(CliffordGate::h(0));
    last.push_back(CliffordGate::h(1));
  }
  Circuit inv = inverse(prefix);
  last.insert(last.end(), inv.begin(), inv.end());
  inst.cliffords.push_back(last);
  return inst;
}

Tableau nc1_state(const Nc1Instance& inst) {
  Tableau t = Tableau::plus_state(2);
  for (size_t i = inst.cliffords.size(); i-- > 0;) t.apply(inst.cliffords[i]);
  return t;
}

const std::array<PauliString, 15>& two_qubit_paulis() {
  static const std::array<PauliString, 15> ps = [] {
    std::array<PauliString, 15> out;
    const char* letters = "IXYZ";
    size_t k = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (a || b) out[k++] = PauliString::parse(std::string{letters[a], letters[b]});
    return out;
  }();
  return ps;
}

int two_qubit_index(const PauliString& p) {
  if (p.size() != 2) return -1;
  std::string l = p.letters();
  for (int i = 0; i < 15; ++i)
    if (two_qubit_paulis()[i].letters() == l) return i;
  return -1;
}

std::vector<PauliString> nontrivial_stabilizers(const Tableau& t) {
  if (t.num_qubits() != 2) throw std::invalid_argument("expected a two-qubit state");
  std::vector<PauliString> out;
  for (const auto& p : two_qubit_paulis())
    if (t.peek(p)) out.push_back(p);
  return out;
}

std::string to_string(Nc1Adversary a) {
  switch (a) {
    case Nc1Adversary::FixedStabilizer: return "fixed-stabilizer";
    case Nc1Adversary::UniformStabilizer: return "uniform-stabilizer";
    case Nc1Adversary::UniformPauli: return "uniform-pauli";
  }
  return "?";
}

Nc1Adversary parse_nc1_adversary(const std::string& s) {
  if (s == "fixed-stabilizer") return Nc1Adversary::FixedStabilizer;
  if (s == "uniform-stabilizer") return Nc1Adversary::UniformStabilizer;
  if (s == "uniform-pauli") return Nc1Adversary::UniformPauli;
  throw std::invalid_argument("unknown adversary '" + s + "' (expected fixed-stabilizer, uniform-stabilizer or uniform-pauli)");
}

ExtractionOracle::ExtractionOracle(const Nc1Instance& inst, double epsilon, Nc1Adversary adversary, uint64_t seed)
    : epsilon_(epsilon), adversary_(adversary), rng_(seed) {
  if (!(epsilon >= 0.0 && 6.0 * epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1/6]");
  Tableau t = nc1_state(inst);
  for (const auto& p : two_qubit_paulis()) (t.peek(p) ? stab_ : nonstab_).push_back(p);
  if (stab_.size() != 3) throw std::logic_error("two-qubit stabilizer state without three nontrivial stabilizers");
}

PauliString ExtractionOracle::sample() {
  if (random_unit(rng_) < 6.0 * epsilon_) {
    ++failures_;
    switch (adversary_) {
      case Nc1Adversary::FixedStabilizer: return stab_[0];
      case Nc1Adversary::UniformStabilizer: return stab_[random_below(rng_, stab_.size())];
      case Nc1Adversary::UniformPauli: return two_qubit_paulis()[random_below(rng_, 15)];
    }
  }
  return nonstab_[random_below(rng_, nonstab_.size())];
}

double nc1_sigma(double epsilon) { return (1.0 - 30.0 * epsilon) / 12.0; }

size_t nc1_sample_count(double c, double epsilon) {
  double s = nc1_sigma(epsilon);
  if (s <= 0) throw std::invalid_argument("sigma is not positive for epsilon >= 1/30");
  return size_t(std::ceil(c / (s * s)));
}

Nc1Estimate nc1_classify(const std::array<uint64_t, 15>& counts, double threshold) {
  Nc1Estimate est;
  est.counts = counts;
  for (auto c : counts) est.samples += c;
  const auto& ps = two_qubit_paulis();
  std::array<bool, 15> low{};
  for (size_t i = 0; i < 15; ++i) {
    low[i] = est.frequency(i) < threshold;
    if (low[i]) est.below_threshold.push_back(ps[i]);
  }
  const std::array<int, 3>* best = nullptr;
  uint64_t best_mass = 0;
  bool tie = false;
  for (const auto& tr : isotropic_triples()) {
    int hits = low[tr[0]] + low[tr[1]] + low[tr[2]];
    if (hits < 2) continue;
    uint64_t mass = counts[tr[0]] + counts[tr[1]] + counts[tr[2]];
    if (!best || mass < best_mass) {
      best = &tr;
      best_mass = mass;
      tie = false;
    } else if (mass == best_mass) {
      tie = true;
    }
  }
  if (!best || tie) return est;
  for (int i : *best) est.group.push_back(ps[i]);
  auto has = [&](const char* a, const char* b, const char* c) {
    std::vector<std::string> want{a, b, c}, got;
    for (const auto& p : est.group) got.push_back(p.letters());
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    return want == got;
  };
  if (has("IX", "XI", "XX")) est.x_basis = true;
  else if (has("IZ", "ZI", "ZZ")) est.x_basis = false;
  return est;
}

Nc1Estimate nc1_estimate(ExtractionOracle& oracle, size_t samples, double threshold) {
  std::array<uint64_t, 15> counts{};
  for (size_t s = 0; s < samples; ++s) ++counts[two_qubit_index(oracle.sample())];
  return nc1_classify(counts, threshold);
}

}  // namespace shallowlab
