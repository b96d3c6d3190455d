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

#include "shallowlab/solvers.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>
#include <stdexcept>

namespace shallowlab {

uint64_t FirstRoundInput::digest() const {
  // Every CNOT, plus the two end elements, which carry fresh randomness.
  uint64_t h = splitmix64(wires);
  for (const auto& e : elements) h = splitmix64(h ^ (uint64_t(e.cnot.control) << 32 | e.cnot.target));
  if (!elements.empty()) {
    h = elements.front().diag.hash(h);
    h = elements.back().diag.hash(h);
  }
  return h;
}

NormalForm normal_form(const FirstRoundInput& in) {
  NormalForm nf;
  nf.cnots.wires = in.wires;
  nf.diag = DiagWord(in.wires);
  nf.cnots.gates.reserve(in.elements.size());
  for (const auto& e : in.elements) {
    nf.diag.push_through(e.cnot);
    nf.diag *= e.diag;
    nf.cnots.gates.push_back(e.cnot);
  }
  return nf;
}

GammaSample gamma(const DiagWord& f, const CnotWord& word, Rng& rng) {
  size_t n = word.gates.size();
  size_t m = word.wires;
  if (n == 0 || m < 3 || f.wires() != 3) throw std::invalid_argument("gamma: need a nonempty word on at least three wires and f on three");
  GammaSample out;
  out.fprime = sample_uniform_H3_even(rng);
  out.input.wires = m;
  out.input.elements.reserve(2 * n);
  DiagWord left = out.fprime.extended(m);
  for (size_t i = 0; i < 2 * n; ++i) {
    const CnotGate& g = i < n ? word.gates[i] : word.gates[2 * n - 1 - i];
    if (i == n) left *= f.extended(m);
    left.push_through(g);
    FirstRoundElement e{g, std::move(left)};
    if (i + 1 < 2 * n) {
      DiagWord h = sample_uniform_H(m, rng);
      e.diag *= h;
      left = h.inverse();
    }
    out.input.elements.push_back(std::move(e));
  }
  return out;
}

void Transcript::first_round(const FirstRoundInput& in) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(in.digest()));
  nlohmann::json j = {{"event", "first_round"}, {"wires", in.wires}, {"elements", in.elements.size()}, {"digest", buf}};
  *out_ << j.dump() << "\n";
}

void Transcript::second_round(size_t line, const PauliLine& paulis, const std::array<int, 4>& signs) {
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : paulis) ps.push_back(p.letters());
  nlohmann::json j = {{"event", "second_round"}, {"line", line}, {"paulis", ps}, {"signs", signs}};
  *out_ << j.dump() << "\n";
}

void Transcript::rewind() { *out_ << nlohmann::json({{"event", "rewind"}}).dump() << "\n"; }

void Transcript::output(const std::optional<PauliString>& p) {
  nlohmann::json j = {{"event", "output"}};
  j["pauli"] = p ? nlohmann::json(p->letters()) : nlohmann::json(nullptr);
  *out_ << j.dump() << "\n";
}

Tableau diagonal_plus_state(const DiagWord& d) {
  size_t m = d.wires();
  std::vector<PauliString> destab, stab;
  destab.reserve(m);
  stab.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    destab.push_back(PauliString::single(m, i, 'Z'));
    PauliString p(m);
    p.set_x(i, true);
    p.set_z(i, d.s(i) & 1);
    for (size_t j = 0; j < m; ++j)
      if (j != i && d.cz(i, j)) p.set_z(j, true);
    p.set_phase(d.s(i));
    stab.push_back(std::move(p));
  }
  return Tableau::from_rows(destab, stab);
}

Tableau normal_form_state(const NormalForm& nf) {
  const DiagWord& d = nf.diag;
  size_t m = d.wires();
  // A CNOT circuit C sends i^r X^x Z^z to i^r X^{Cx} Z^{C^-T z}.
  Gf2Matrix ct = Gf2Matrix::identity(m);
  Gf2Matrix cinv = Gf2Matrix::identity(m);
  for (const auto& g : nf.cnots.gates) {
    ct.add_row(g.control, g.target);
    cinv.add_row(g.target, g.control);
  }
  size_t w = ct.words_per_row();
  std::vector<PauliString> destab, stab;
  destab.reserve(m);
  stab.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    PauliString z(m);
    std::copy(cinv.row_words(i), cinv.row_words(i) + w, z.zs().begin());
    destab.push_back(std::move(z));
    PauliString p(m);
    std::copy(ct.row_words(i), ct.row_words(i) + w, p.xs().begin());
    auto& zs = p.zs();
    auto add = [&](size_t j) {
      const uint64_t* r = cinv.row_words(j);
      for (size_t k = 0; k < w; ++k) zs[k] ^= r[k];
    };
    if (d.s(i) & 1) add(i);
    for (size_t j = 0; j < m; ++j)
      if (j != i && d.cz(i, j)) add(j);
    p.set_phase(d.s(i));
    stab.push_back(std::move(p));
  }
  return Tableau::from_rows(destab, stab);
}

void HonestLogicalDevice::first_round(const FirstRoundInput& in) {
  tableau_ = normal_form_state(normal_form(in));
  after_first_ = tableau_.snapshot();
  ready_ = true;
}

std::array<int, 4> HonestLogicalDevice::second_round(const PauliLine& line) {
  if (!ready_) throw std::logic_error("second round before first round");
  size_t m = tableau_.num_qubits();
  std::array<int, 4> out{};
  for (size_t k = 0; k < 4; ++k) {
    PauliString p(m);
    for (size_t q = 0; q < line[k].size(); ++q) p.set(q, line[k].at(q));
    out[k] = tableau_.measure(p, rng_).sign * line[k].sign();
  }
  return out;
}

void HonestLogicalDevice::rewind() {
  if (ready_) tableau_.restore(after_first_);
}

void HonestLogicalDevice::reset() {
  tableau_ = Tableau();
  after_first_ = Snapshot();
  ready_ = false;
}

FixedAssignmentDevice::FixedAssignmentDevice(uint64_t seed) {
  Rng rng(seed);
  for (const auto& p : pentagram().star) values_[p.letters()] = random_bit(rng) ? -1 : 1;
}

std::array<int, 4> FixedAssignmentDevice::second_round(const PauliLine& line) {
  std::array<int, 4> out{};
  for (size_t k = 0; k < 4; ++k) {
    auto it = values_.find(line[k].letters());
    out[k] = it == values_.end() ? 1 : it->second;
  }
  return out;
}

std::string to_string(FaultPolicy p) {
  switch (p) {
    case FaultPolicy::UniformRandomInputs:
      return "uniform";
    case FaultPolicy::AdversarialFixedSet:
      return "fixed-set";
    case FaultPolicy::ConcentrateOnTarget:
      return "concentrate";
  }
  return "?";
}

FaultPolicy parse_fault_policy(const std::string& s) {
  if (s == "uniform") return FaultPolicy::UniformRandomInputs;
  if (s == "fixed-set") return FaultPolicy::AdversarialFixedSet;
  if (s == "concentrate") return FaultPolicy::ConcentrateOnTarget;
  throw std::invalid_argument("unknown fault policy '" + s + "' (expected uniform, fixed-set or concentrate)");
}

bool first_round_is_three_cycle(const FirstRoundInput& in) {
  size_t half = in.elements.size() / 2;
  // Images of e_0, e_1, e_2 under c_1 ... c_half, packed as bit masks over wires 0..2 plus a flag for any other wire.
  std::array<std::vector<uint8_t>, 3> cols;
  for (size_t j = 0; j < 3; ++j) {
    cols[j].assign(in.wires, 0);
    cols[j][j] = 1;
  }
  for (size_t k = half; k-- > 0;) {
    const auto& g = in.elements[k].cnot;
    for (auto& c : cols) c[g.target] ^= c[g.control];
  }
  for (size_t j = 0; j < 3; ++j)
    for (size_t i = 0; i < in.wires; ++i)
      if (cols[j][i] != (i == (j + 1) % 3)) return false;
  return true;
}

FaultyDevice::FaultyDevice(std::unique_ptr<RewindableOracle> inner, double epsilon, FaultPolicy policy, uint64_t seed,
                           bool target_three_cycle)
    : inner_(std::move(inner)), epsilon_(epsilon), policy_(policy), key_(derive_seed(seed, 0xfa17)),
      target_three_cycle_(target_three_cycle), rng_(derive_seed(seed, 1)) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
}

void FaultyDevice::first_round(const FirstRoundInput& in) {
  inner_->first_round(in);
  ++stats_.first_rounds;
  session_failed_ = false;
  if (policy_ != FaultPolicy::UniformRandomInputs) input_digest_ = in.digest();
  if (policy_ == FaultPolicy::ConcentrateOnTarget) input_in_target_ = first_round_is_three_cycle(in) == target_three_cycle_;
}

bool FaultyDevice::fails(const PauliLine& line, uint64_t& answer_bits) {
  if (epsilon_ == 0.0) return false;
  if (policy_ == FaultPolicy::UniformRandomInputs) {
    answer_bits = rng_();
    return random_unit(rng_) < epsilon_;
  }
  double rate = epsilon_;
  if (policy_ == FaultPolicy::ConcentrateOnTarget) {
    if (!input_in_target_) return false;
    rate = std::min(1.0, 2.0 * epsilon_);
  }
  uint64_t h = splitmix64(key_ ^ input_digest_);
  for (const auto& p : line) h = splitmix64(h ^ std::hash<std::string>{}(p.letters()));
  answer_bits = splitmix64(h ^ 0x5eed);
  return double(h >> 11) * 0x1.0p-53 < rate;
}

std::array<int, 4> FaultyDevice::second_round(const PauliLine& line) {
  auto out = inner_->second_round(line);
  ++stats_.queries;
  uint64_t bits = 0;
  if (fails(line, bits)) {
    ++stats_.failed_queries;
    if (!session_failed_) ++stats_.sessions_with_failure;
    session_failed_ = true;
    for (size_t k = 0; k < 4; ++k) out[k] = (bits >> k) & 1 ? -1 : 1;
  }
  return out;
}

void FaultyDevice::reset() {
  inner_->reset();
  session_failed_ = false;
}

std::string to_string(PickRule r) { return r == PickRule::First ? "first" : "uniform"; }

PickRule parse_pick_rule(const std::string& s) {
  if (s == "first") return PickRule::First;
  if (s == "uniform") return PickRule::Uniform;
  throw std::invalid_argument("unknown pick rule '" + s + "' (expected first or uniform)");
}

std::vector<size_t> inconsistent_paulis(const std::array<std::array<int, 4>, 5>& signs) {
  const auto& pc = pentagram();
  std::vector<size_t> out;
  for (size_t i = 0; i < pc.star.size(); ++i) {
    auto [l1, k1] = pc.incidence[i][0];
    auto [l2, k2] = pc.incidence[i][1];
    if (signs[l1][k1] != signs[l2][k2]) out.push_back(i);
  }
  return out;
}

RfResult run_Rf(const DiagWord& f, const CnotWord& word, RewindableOracle& oracle, Rng& rng, PickRule rule, Transcript* transcript) {
  const auto& pc = pentagram();
  GammaSample gs = gamma(f, word, rng);
  oracle.first_round(gs.input);
  if (transcript) transcript->first_round(gs.input);
  RfResult res;
  for (size_t l = 0; l < pc.lines.size(); ++l) {
    res.signs[l] = oracle.second_round(pc.lines[l]);
    if (transcript) transcript->second_round(l, pc.lines[l], res.signs[l]);
    oracle.rewind();
    if (transcript) transcript->rewind();
  }
  res.inconsistent = inconsistent_paulis(res.signs);
  if (!res.inconsistent.empty()) {
    size_t pick = rule == PickRule::First ? res.inconsistent.front() : res.inconsistent[random_below(rng, res.inconsistent.size())];
    res.output = unsigned_pauli(bullet(gs.fprime.inverse(), pc.star[pick]));
  }
  if (transcript) transcript->output(res.output);
  return res;
}

namespace {

using LineDistribution = std::vector<std::pair<std::array<int, 4>, double>>;

void branch_line(const Tableau& t, const PauliLine& line, size_t k, std::array<int, 4> signs, double pr, Rng& rng,
                 LineDistribution& out) {
  if (k == 4) {
    out.emplace_back(signs, pr);
    return;
  }
  if (auto s = t.peek(line[k])) {
    signs[k] = *s * line[k].sign();
    branch_line(t, line, k + 1, signs, pr, rng, out);
    return;
  }
  for (int s : {1, -1}) {
    Tableau c = t;
    c.measure(line[k], rng, s);
    signs[k] = s * line[k].sign();
    branch_line(c, line, k + 1, signs, pr / 2, rng, out);
  }
}

std::vector<double> compute_pick_distribution(const DiagWord& u, PickRule rule) {
  const auto& pc = pentagram();
  Tableau t = diagonal_plus_state(u);
  Rng unused(0);
  std::array<LineDistribution, 5> lines;
  for (size_t l = 0; l < 5; ++l) branch_line(t, pc.lines[l], 0, {}, 1.0, unused, lines[l]);
  std::vector<double> dist(pc.star.size(), 0.0);
  std::array<size_t, 5> idx{};
  while (true) {
    std::array<std::array<int, 4>, 5> signs;
    double pr = 1.0;
    for (size_t l = 0; l < 5; ++l) {
      signs[l] = lines[l][idx[l]].first;
      pr *= lines[l][idx[l]].second;
    }
    auto inc = inconsistent_paulis(signs);
    if (inc.empty()) throw std::logic_error("honest pentagram run without an inconsistent Pauli");
    if (rule == PickRule::First) {
      dist[inc.front()] += pr;
    } else {
      for (size_t i : inc) dist[i] += pr / double(inc.size());
    }
    size_t l = 0;
    while (l < 5 && ++idx[l] == lines[l].size()) idx[l++] = 0;
    if (l == 5) break;
  }
  return dist;
}

}  // namespace

const std::vector<double>& pick_distribution(const DiagWord& u, PickRule rule) {
  static std::mutex mu;
  static std::array<std::vector<std::vector<double>>, 2> cache;
  if (u.wires() != 3) throw std::invalid_argument("pick_distribution expects a three-wire element");
  std::lock_guard<std::mutex> lock(mu);
  auto& table = cache[rule == PickRule::First ? 0 : 1];
  if (table.empty()) table.resize(512);
  auto& slot = table[u.index3()];
  if (slot.empty()) slot = compute_pick_distribution(u, rule);
  return slot;
}

DiagWord conjugate_by_three_cycle(const DiagWord& f) { return f.permuted({1, 2, 0}); }

PauliDistribution exact_Rf0(const DiagWord& f, bool three_cycle, PickRule rule) {
  const auto& pc = pentagram();
  DiagWord fe = three_cycle ? conjugate_by_three_cycle(f) : f;
  const auto& group = all_H3_even();
  PauliDistribution dist;
  for (const auto& fp : group) {
    const auto& pd = pick_distribution(fp * fe, rule);
    DiagWord inv = fp.inverse();
    for (size_t i = 0; i < pd.size(); ++i)
      if (pd[i] > 0) dist[unsigned_pauli(bullet(inv, pc.star[i]))] += pd[i] / double(group.size());
  }
  return dist;
}

const PauliDistribution& exact_DR(PickRule rule) {
  static const PauliDistribution first = exact_Rf0(DiagWord(3), false, PickRule::First);
  static const PauliDistribution uniform = exact_Rf0(DiagWord(3), false, PickRule::Uniform);
  return rule == PickRule::First ? first : uniform;
}

namespace {

double weight(const PauliDistribution& d, const PauliString& p) {
  auto it = d.find(p);
  return it == d.end() ? 0.0 : it->second;
}

}  // namespace

DiagWord find_blocking_f(const PauliString& p, PickRule rule) {
  static std::mutex mu;
  static std::map<std::pair<std::string, int>, DiagWord> cache;
  PauliString pu = unsigned_pauli(p);
  auto key = std::make_pair(pu.letters(), int(rule));
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const auto& dr = exact_DR(rule);
  for (const auto& f : all_H3_even()) {
    PauliString q = unsigned_pauli(bullet(f, pu));
    if (weight(exact_Rf0(f, true, rule), q) != 0.0) continue;
    if (std::abs(weight(exact_Rf0(f, false, rule), q) - weight(dr, pu)) > 1e-12)
      throw std::logic_error("blocking f for " + pu.letters() + " changes the identity-case weight");
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, f);
    return f;
  }
  throw std::logic_error("no blocking f exists for " + pu.letters());
}

const std::vector<PauliString>& blockable_paulis(PickRule rule) {
  auto build = [](PickRule r) {
    std::vector<PauliString> out;
    for (const auto& p : pentagram().nonstab) {
      try {
        find_blocking_f(p, r);
        out.push_back(p);
      } catch (const std::logic_error&) {
      }
    }
    return out;
  };
  static const std::vector<PauliString> first = build(PickRule::First);
  static const std::vector<PauliString> uniform = build(PickRule::Uniform);
  return rule == PickRule::First ? first : uniform;
}

RfSampler oracle_sampler(const CnotWord& word, RewindableOracle& oracle, PickRule rule) {
  return [&word, &oracle, rule](const DiagWord& f, Rng& rng) { return run_Rf(f, word, oracle, rng, rule).output; };
}

Phase1Result phase1_estimate(const RfSampler& sampler, size_t samples, Rng& rng, const std::vector<PauliString>* eligible) {
  Phase1Result res;
  DiagWord id(3);
  for (size_t s = 0; s < samples; ++s) {
    auto out = sampler(id, rng);
    if (out)
      ++res.counts[*out];
    else
      ++res.failures;
  }
  if (res.counts.empty()) throw std::runtime_error("phase 1: every run failed");
  uint64_t best = 0;
  for (const auto& [p, c] : res.counts)
    if (c > best && (!eligible || std::find(eligible->begin(), eligible->end(), p) != eligible->end())) {
      best = c;
      res.pauli = p;
    }
  return res;
}

double default_phase2_threshold(double delta_bound) { return 0.5 * (delta_bound + (1.0 - delta_bound) / 20.0); }

Phase2Result phase2_distinguish(const RfSampler& sampler, const DiagWord& f, const PauliString& target, size_t samples,
                                double threshold, Rng& rng) {
  Phase2Result res;
  PauliString t = unsigned_pauli(target);
  for (size_t s = 0; s < samples; ++s) {
    auto out = sampler(f, rng);
    ++res.samples;
    if (!out)
      ++res.failures;
    else if (*out == t)
      ++res.hits;
  }
  if (res.failures == res.samples) throw std::runtime_error("phase 2: every run failed");
  res.decision = res.frequency() > threshold ? Decision::Identity : Decision::ThreeCycle;
  return res;
}

size_t default_repetitions(size_t n) { return size_t(std::ceil(3.0 * std::log2(double(std::max<size_t>(n, 2))))); }

SolveResult solve_dagparity(const MonotoneDag& a, RewindableOracle& oracle, const SolverConfig& cfg, Rng& rng) {
  const auto& blockable = blockable_paulis(cfg.rule);
  size_t k = cfg.repetitions ? cfg.repetitions : default_repetitions(a.size());
  double threshold = cfg.threshold >= 0 ? cfg.threshold : default_phase2_threshold(cfg.delta_bound);
  SolveResult res;
  for (size_t r = 0; r < k; ++r) {
    CnotWord word = efrak(dfrak(a, rng, cfg.shares));
    uint64_t runs = 0;
    RfSampler sampler = [&](const DiagWord& f, Rng& g) {
      ++runs;
      return run_Rf(f, word, oracle, g, cfg.rule).output;
    };
    try {
      Phase1Result p1 = phase1_estimate(sampler, cfg.phase1_samples, rng, &blockable);
      if (p1.pauli.size() == 0) {
        ++res.failed_repetitions;
        res.oracle_runs += runs;
        continue;
      }
      DiagWord f = find_blocking_f(p1.pauli, cfg.rule);
      PauliString target = unsigned_pauli(bullet(f, p1.pauli));
      Phase2Result p2 = phase2_distinguish(sampler, f, target, cfg.phase2_samples, threshold, rng);
      if (p2.decision == Decision::ThreeCycle)
        ++res.votes_odd;
      else
        ++res.votes_even;
    } catch (const std::runtime_error&) {
      ++res.failed_repetitions;
    }
    res.oracle_runs += runs;
  }
  res.parity = res.votes_odd > res.votes_even;
  return res;
}

}  // namespace shallowlab
