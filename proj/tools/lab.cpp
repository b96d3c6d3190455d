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


#include "lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "oracles/dense_state.hpp"
#include "oracles/dense_words.hpp"
#include "oracles/random_circuits.hpp"
#include "shallowlab/devices.hpp"
#include "shallowlab/gf2.hpp"
#include "shallowlab/mbqc.hpp"
#include "shallowlab/nc1.hpp"
#include "shallowlab/parity.hpp"
#include "shallowlab/solvers.hpp"
#include "shallowlab/surface.hpp"

namespace shallowlab::lab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::string str(size_t v) { return std::to_string(v); }
std::string str(bool v) { return v ? "1" : "0"; }

using Row = std::vector<std::string>;

// Rows computed independently per index, returned in index order.
template <typename F>
std::vector<Row> parallel_rows(size_t count, unsigned jobs, F fn) {
  std::vector<Row> rows(count);
  jobs = std::max(1u, std::min<unsigned>(jobs, unsigned(std::max<size_t>(count, 1))));
  if (jobs == 1) {
    for (size_t i = 0; i < count; ++i) rows[i] = fn(i);
    return rows;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < count;) {
        try {
          rows[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

MonotoneDag random_dag(size_t n, Rng& rng) {
  MonotoneDag d(n);
  for (auto [i, j] : MonotoneDag::slots(n)) d.set_edge(i, j, random_bit(rng));
  return d;
}

CnotWord random_cnot_word(size_t m, size_t len, Rng& rng) {
  CnotWord w{m, {}};
  for (size_t i = 0; i < len; ++i) {
    uint32_t c = uint32_t(random_below(rng, m));
    uint32_t t = uint32_t(random_below(rng, m - 1));
    if (t >= c) ++t;
    w.gates.push_back({c, t});
  }
  return w;
}

CnotWord identity_word(size_t m, Rng& rng) {
  CnotWord w = random_cnot_word(m, 5, rng);
  CnotWord back = reversed(w);
  w.gates.insert(w.gates.end(), back.gates.begin(), back.gates.end());
  return w;
}

CnotWord three_cycle_word(size_t m) { return CnotWord{m, {{0, 2}, {2, 0}, {0, 2}, {0, 1}, {1, 0}, {0, 1}}}; }

// ---- tableau-fuzz

Row tableau_fuzz_trial(uint64_t seed, size_t index, size_t max_qubits, size_t gates, size_t measurements) {
  Rng rng = make_rng(seed, index);
  size_t n = 1 + random_below(rng, max_qubits);
  Circuit c = oracle::random_circuit(n, gates, rng);
  Tableau t(n);
  oracle::DenseState psi(n);
  t.apply(c);
  for (const auto& g : c) psi.apply(g);
  size_t mismatches = 0;
  for (size_t k = 0; k < measurements; ++k) {
    PauliString p = oracle::random_pauli(n, rng);
    double plus = psi.prob_plus(p);
    auto det = t.peek(p);
    bool agree = det ? std::abs(plus - (*det > 0 ? 1.0 : 0.0)) < 1e-9 : std::abs(plus - 0.5) < 1e-9;
    Measurement m = t.measure(p, rng);
    agree = agree && m.deterministic == det.has_value();
    mismatches += !agree;
    if ((m.sign > 0 ? plus : 1.0 - plus) < 1e-9) {
      ++mismatches;
      break;
    }
    psi.project(p, m.sign);
  }
  return {str(index), str(n), str(gates), str(measurements), str(mismatches)};
}

Table run_tableau_fuzz(const Params& p, uint64_t seed, unsigned jobs) {
  size_t circuits = p.count("circuits", 1, 1000000);
  size_t max_qubits = p.count("max_qubits", 1, 10);
  size_t gates = p.count("gates", 0, 10000);
  size_t meas = p.count("measurements", 0, 1000);
  Table t{{"circuit", "qubits", "gates", "measurements", "mismatches"}, {}};
  t.rows = parallel_rows(circuits, jobs, [&](size_t i) { return tableau_fuzz_trial(seed, i, max_qubits, gates, meas); });
  return t;
}

// ---- audit

Row audit_row(const std::string& check, const std::string& expected, const std::string& actual) {
  return {check, expected, actual, str(expected == actual)};
}

Table run_audit(const Params& p, uint64_t seed, unsigned jobs) {
  const size_t draws = p.count("gamma_draws", 0, 10000000);
  const size_t dense = p.count("gamma_dense", 0, 100000);
  const std::string section = p.choice("section", {"all", "constants", "gamma", "blocking"});
  const PickRule rule = parse_pick_rule(p.choice("rule", {"first", "uniform"}));
  Table t{{"check", "expected", "actual", "pass"}, {}};
  const auto& pc = pentagram();

  if (section == "all" || section == "constants") {
    t.rows.push_back(audit_row("s_set_size", "24", str(pc.s_set.size())));
    t.rows.push_back(audit_row("nonstabilizers", "20", str(pc.nonstab.size())));
    t.rows.push_back(audit_row("star_size", "10", str(pc.star.size())));
    size_t twice = 0;
    for (const auto& inc : pc.incidence) twice += inc.size() == 2;
    t.rows.push_back(audit_row("star_in_exactly_two_lines", "10", str(twice)));
    size_t commuting = 0, identity = 0, minus = 0;
    for (const auto& line : pc.lines) {
      bool ok = true;
      PauliString prod(3);
      for (size_t a = 0; a < 4; ++a) {
        prod *= line[a];
        for (size_t b = a + 1; b < 4; ++b) ok = ok && line[a].commutes(line[b]);
      }
      commuting += ok;
      if (prod.is_identity_up_to_phase() && prod.is_hermitian()) {
        ++identity;
        minus += prod.sign() < 0;
      }
    }
    t.rows.push_back(audit_row("lines_commuting", "5", str(commuting)));
    t.rows.push_back(audit_row("lines_product_pm_identity", "5", str(identity)));
    t.rows.push_back(audit_row("minus_identity_lines_odd", "1", str(minus % 2 == 1)));
  }

  if (section == "all" || section == "gamma") {
    auto checks = parallel_rows(draws, jobs, [&](size_t i) {
      Rng rng = make_rng(seed, i);
      bool cyc = random_bit(rng);
      size_t m = 3 + random_below(rng, 6);
      CnotWord pad = identity_word(m, rng);
      CnotWord w = pad;
      if (cyc) {
        w = three_cycle_word(m);
        w.gates.insert(w.gates.end(), pad.gates.begin(), pad.gates.end());
      }
      DiagWord f = sample_uniform_H3_even(rng);
      GammaSample gs = gamma(f, w, rng);
      NormalForm nf = normal_form(gs.input);
      bool member = word_matrix(nf.cnots) == Gf2Matrix::identity(m) && !nf.diag.parity() &&
                    nf.diag == nf.diag.restricted(3).extended(m);
      bool formula = nf.diag == (gs.fprime * (cyc ? conjugate_by_three_cycle(f) : f)).extended(m);
      const size_t n = w.gates.size();
      bool coset = gs.input.elements.size() == 2 * n;
      for (size_t k = 0; coset && k < 2 * n; ++k)
        coset = gs.input.elements[k].cnot == (k < n ? w.gates[k] : w.gates[2 * n - 1 - k]);
      return Row{str(member), str(formula), str(coset)};
    });
    size_t member = 0, formula = 0, coset = 0;
    for (const auto& r : checks) {
      member += r[0] == "1";
      formula += r[1] == "1";
      coset += r[2] == "1";
    }
    t.rows.push_back(audit_row("gamma_product_in_even_group", str(draws), str(member)));
    t.rows.push_back(audit_row("gamma_product_formula", str(draws), str(formula)));
    t.rows.push_back(audit_row("gamma_coset_condition", str(draws), str(coset)));

    size_t dense_ok = 0;
    for (size_t i = 0; i < dense; ++i) {
      Rng rng = make_rng(seed ^ 0xD5E5ULL, i);
      CnotWord w = i % 2 ? three_cycle_word(3) : random_cnot_word(3, 1 + i % 5, rng);
      DiagWord f = sample_uniform_H3_even(rng);
      GammaSample gs = gamma(f, w, rng);
      oracle::DenseUnitary prod(3);
      for (const auto& e : gs.input.elements)
        prod = prod.times(oracle::dense_cnot(3, e.cnot)).times(oracle::dense_diag(e.diag));
      oracle::DenseUnitary pi = oracle::dense_word(w);
      oracle::DenseUnitary want = oracle::dense_diag(gs.fprime).times(pi).times(oracle::dense_diag(f)).times(pi.adjoint());
      dense_ok += prod.approx_equal(want);
    }
    t.rows.push_back(audit_row("gamma_dense_unitary", str(dense), str(dense_ok)));
  }

  if (section == "all" || section == "blocking") {
    const auto& group = all_H3_even();
    auto rows = parallel_rows(pc.nonstab.size(), jobs, [&](size_t i) {
      const PauliString& q = pc.nonstab[i];
      bool found = false;
      for (const auto& f : group) {
        auto dist = exact_Rf0(f, true, rule);
        auto it = dist.find(unsigned_pauli(bullet(f, q)));
        if (it == dist.end() || it->second == 0.0) {
          found = true;
          break;
        }
      }
      return audit_row("blocking_f:" + q.letters(), "1", str(found));
    });
    t.rows.insert(t.rows.end(), rows.begin(), rows.end());
  }
  return t;
}

// ---- mbqc-check

Tableau expected_mbqc_state(const MbqcRun& run, const std::vector<WordStep>& word, size_t m) {
  Tableau t = Tableau::plus_state(2 * m);
  for (auto g : word_circuit(word)) {
    g.a = uint32_t(run.slots[g.a]);
    if (g.two_qubit()) g.b = uint32_t(run.slots[g.b]);
    t.apply(g);
  }
  PauliString b(2 * m);
  for (size_t w = 0; w < m; ++w) b.set(run.slots[w], run.byproduct.at(w));
  t.apply_pauli(b);
  return t;
}

Table run_mbqc_check(const Params& p, uint64_t seed, unsigned jobs) {
  size_t words = p.count("words", 1, 1000000);
  size_t max_wires = p.count("max_wires", 2, 8);
  size_t steps = p.count("steps", 0, 64);
  Table t{{"word", "wires", "steps", "columns", "match"}, {}};
  t.rows = parallel_rows(words, jobs, [&](size_t i) {
    Rng rng = make_rng(seed, i);
    size_t m = 2 + random_below(rng, max_wires - 1);
    std::vector<WordStep> word;
    for (size_t k = 0; k < steps; ++k) {
      CnotWord one = random_cnot_word(m, 1, rng);
      word.push_back({one.gates[0], sample_uniform_H(m, rng)});
    }
    MbqcPattern pat = compile_word_to_mbqc(word, m);
    MbqcRun run = run_mbqc(pat, rng);
    bool match = run.state.same_state(expected_mbqc_state(run, word, m));
    return Row{str(i), str(m), str(steps), str(pat.columns), str(match)};
  });
  return t;
}

// ---- noise-sweep

// Every codeword generated by the X checks and logical X, each with every single flip applied
// directly and cancelled through the frame; a trial fails when the decoded value changes.
SweepRow exhaustive_flip_row(size_t d, uint64_t seed) {
  SurfaceCode code(d);
  const size_t nx = code.x_checks().size(), m = code.qubits();
  if (nx > 16) throw ConfigError("exhaustive mode supports d <= 5");
  SweepRow row{d, 0.0, 0, 0, seed};
  for (size_t gens = 0; gens < (size_t{1} << nx); ++gens)
    for (int v = 0; v < 2; ++v) {
      Bits x(m, 0);
      for (size_t k = 0; k < nx; ++k)
        if ((gens >> k) & 1)
          for (size_t q : code.x_checks()[k]) x[q] ^= 1;
      if (v)
        for (size_t q : code.logical_x()) x[q] ^= 1;
      row.trials += 1;
      row.failures += dec(code, x, {}) != v;
      for (size_t q = 0; q < m; ++q) {
        Bits y = x, f(m, 0);
        y[q] ^= 1;
        f[q] = 1;
        row.trials += 2;
        row.failures += (dec(code, y, {}) != v) + (dec(code, y, f) != v);
      }
    }
  return row;
}

Table run_noise_sweep(const Params& p, uint64_t seed, unsigned jobs) {
  const std::string mode = p.choice("mode", {"memory", "graph", "exhaustive"});
  auto ds = p.count_list("d", 3, 7);
  auto ps = p.real_list("p", 0.0, 1.0);
  size_t trials = p.count("trials", 1, 100000000);
  NoiseSpec noise;
  noise.kind = parse_noise_kind(p.choice("kind", {"iid_depolarizing", "iid_xz", "adversarial"}));
  noise.policy = p.choice("policy", {"X", "Y", "Z"})[0];
  size_t width = p.count("width", 1, 8), height = p.count("height", 1, 8);
  for (size_t d : ds)
    if (d % 2 == 0) throw ConfigError("d must be odd");
  GraphProblemInstance inst{grid_graph(width, height)};
  Table t{{"d", "p", "trials", "failures", "seed"}, {}};
  if (mode == "exhaustive") {
    for (size_t d : ds) {
      SweepRow r = exhaustive_flip_row(d, seed);
      t.rows.push_back({str(d), format_real(0.0), str(r.trials), str(r.failures), std::to_string(seed)});
    }
    return t;
  }
  for (size_t d : ds) {
    SurfaceCode code(d);
    for (double rate : ps) {
      noise.p = rate;
      const size_t chunk = 256;
      auto parts = parallel_rows((trials + chunk - 1) / chunk, jobs, [&](size_t c) {
        size_t fails = 0;
        for (size_t i = c * chunk; i < std::min(trials, (c + 1) * chunk); ++i)
          fails += mode == "memory" ? memory_trial_fails(code, rate, seed, i) : graph_trial_fails(inst, code, noise, seed, i);
        return Row{str(fails)};
      });
      size_t failures = 0;
      for (const auto& r : parts) failures += std::stoull(r[0]);
      t.rows.push_back({str(d), format_real(rate), str(trials), str(failures), std::to_string(seed)});
    }
  }
  return t;
}

// ---- half-rand-audit

ShareMatrix share_matrix_from_mask(uint64_t mask) {
  ShareMatrix k(2, 2);
  size_t b = 0;
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = i; j < 2; ++j)
      for (size_t l = 0; l < 2; ++l) k.set_share(i, j, l, (mask >> b++) & 1);
  return k;
}

bool orbit_uniform(size_t k) {
  std::vector<Gf2Matrix> forms;
  size_t bits = k * (k + 1) / 2;
  for (uint64_t mask = 0; mask < (uint64_t{1} << bits); ++mask) {
    Gf2Matrix m(k, k);
    size_t b = 0;
    for (size_t i = 0; i < k; ++i) {
      if (i > 0) m.set(i, i - 1, true);
      for (size_t j = i; j < k; ++j) m.set(i, j, (mask >> b++) & 1);
    }
    forms.push_back(m);
  }
  size_t r_bits = k * (k - 1) / 2;
  for (const auto& l : forms) {
    std::map<std::string, size_t> counts;
    std::vector<uint8_t> rb(2 * r_bits);
    for (uint64_t mask = 0; mask < (uint64_t{1} << (2 * r_bits)); ++mask) {
      for (size_t b = 0; b < rb.size(); ++b) rb[b] = (mask >> b) & 1;
      ++counts[(unit_upper_from_bits(k, rb, 0) * l * unit_upper_from_bits(k, rb, r_bits)).str()];
    }
    size_t same = 0;
    for (const auto& m : forms) same += m.determinant() == l.determinant();
    if (counts.size() != same) return false;
    for (const auto& [key, c] : counts)
      if (c * same != (size_t{1} << (2 * r_bits))) return false;
  }
  return true;
}

Table run_half_rand_audit(const Params& p, uint64_t seed, unsigned jobs) {
  const size_t det_max = p.count("det_max_n", 2, 6);
  const size_t trials = p.count("randomize_trials", 0, 10000000);
  const size_t efrak_random = p.count("efrak_random", 0, 1000000);
  const size_t max_n = p.count("max_n", 2, 6);
  Table t{{"check", "expected", "actual", "pass"}, {}};

  for (size_t n = 2; n <= det_max; ++n) {
    size_t slots = MonotoneDag::slots(n).size(), agree = 0, total = size_t{1} << slots;
    for (uint64_t mask = 0; mask < total; ++mask) {
      MonotoneDag a = MonotoneDag::from_mask(n, mask);
      agree += det_encoding(a) == path_parity_bruteforce(a);
    }
    t.rows.push_back(audit_row("det_encoding_n" + str(n), str(total), str(agree)));
  }

  auto det_rows = parallel_rows(trials, jobs, [&](size_t i) {
    Rng rng = make_rng(seed, i);
    MonotoneDag a = random_dag(2 + random_below(rng, max_n - 1), rng);
    Gf2Matrix l = extract_L(a);
    Gf2Matrix kx = randomize_matrix(l, rng).kxor();
    bool det = has_L_form(kx) && kx.determinant() == l.determinant();
    bool parity = path_parity_bruteforce(dfrak(a, rng)) == path_parity_bruteforce(a);
    return Row{str(det), str(parity)};
  });
  size_t det_ok = 0, parity_ok = 0;
  for (const auto& r : det_rows) {
    det_ok += r[0] == "1";
    parity_ok += r[1] == "1";
  }
  t.rows.push_back(audit_row("randomize_keeps_determinant", str(trials), str(det_ok)));
  t.rows.push_back(audit_row("dfrak_keeps_parity", str(trials), str(parity_ok)));
  t.rows.push_back(audit_row("orbit_uniform_size2", "1", str(orbit_uniform(2))));
  HalfRandomizationReport rep = audit_dfrak(3);
  t.rows.push_back(audit_row("half_randomization_n3_within_class", "1", str(rep.identical_within_class)));
  t.rows.push_back(audit_row("half_randomization_n3_disjoint", "1", str(rep.disjoint_across)));
  t.rows.push_back(audit_row("half_randomization_n3_equal_size", "1", str(rep.equal_cardinality)));

  ShareMatrix example(2, 2);
  example.set_share(0, 0, 0, true);
  example.set_share(0, 1, 0, true);
  example.set_share(0, 1, 1, true);
  example.set_share(1, 1, 1, true);
  LayeredDag ex = build_layered(example);
  t.rows.push_back(audit_row("layered_example_parity", "1", str(path_parity_bruteforce(ex))));

  size_t layered_ok = 0, efrak_ok = 0, decode_ok = 0;
  std::set<std::vector<CnotGate>> distinct;
  for (uint64_t mask = 0; mask < 64; ++mask) {
    ShareMatrix k = share_matrix_from_mask(mask);
    LayeredDag c = build_layered(k);
    bool par = path_parity_bruteforce(c);
    layered_ok += par == path_parity_bruteforce(build_B(k)) && par == k.kxor().determinant();
    CnotWord w = efrak(c);
    efrak_ok += word_matrix(w) == (par ? three_cycle_matrix(w.wires) : Gf2Matrix::identity(w.wires));
    decode_ok += decode_efrak(w, 3, 2) == c;
    distinct.insert(w.gates);
  }
  t.rows.push_back(audit_row("layered_parity_n3_exhaustive", "64", str(layered_ok)));
  t.rows.push_back(audit_row("efrak_product_n3_exhaustive", "64", str(efrak_ok)));
  t.rows.push_back(audit_row("efrak_injective_n3", "64", str(distinct.size())));
  t.rows.push_back(audit_row("efrak_decode_n3", "64", str(decode_ok)));

  auto ef_rows = parallel_rows(efrak_random, jobs, [&](size_t i) {
    Rng rng = make_rng(seed ^ 0xEF7AULL, i);
    size_t n = 2 + random_below(rng, max_n - 1);
    MonotoneDag a = random_dag(n, rng);
    CnotWord w = efrak(dfrak(a, rng));
    bool ok = word_matrix(w) == (path_parity_bruteforce(a) ? three_cycle_matrix(w.wires) : Gf2Matrix::identity(w.wires));
    return Row{str(ok)};
  });
  size_t ef_ok = 0;
  for (const auto& r : ef_rows) ef_ok += r[0] == "1";
  t.rows.push_back(audit_row("efrak_product_random", str(efrak_random), str(ef_ok)));
  return t;
}

// ---- pentagram-dist

Table run_pentagram_dist(const Params& p, uint64_t seed, unsigned jobs) {
  const size_t runs = p.count("runs", 1, 100000000);
  const size_t f_count = p.count("f_values", 1, 256);
  const size_t wires = p.count("wires", 3, 16);
  const PickRule rule = parse_pick_rule(p.choice("rule", {"first", "uniform"}));
  const auto& pc = pentagram();
  std::set<std::string> stab;
  for (const auto& s : pc.stabilizers) stab.insert(s.letters());
  std::set<std::string> nonstab;
  for (const auto& s : pc.nonstab) nonstab.insert(s.letters());

  Table t{{"f", "f_index", "pauli", "back", "count", "expected", "in_s", "stabilizer", "back_nonstabilizer"}, {}};
  Rng frng = make_rng(seed ^ 0xF0F0ULL, 0);
  for (size_t k = 0; k < f_count; ++k) {
    DiagWord f = k == 0 ? DiagWord(3) : sample_uniform_H3_even(frng);
    auto outs = parallel_rows(runs, jobs, [&](size_t r) {
      Rng rng = make_rng(seed, k * runs + r);
      CnotWord w = identity_word(wires, rng);
      HonestLogicalDevice dev(rng());
      RfResult res = run_Rf(f, w, dev, rng, rule);
      return Row{res.output ? res.output->letters() : std::string("NONE")};
    });
    std::map<std::string, size_t> counts;
    for (const auto& o : outs) ++counts[o[0]];
    PauliDistribution exact = exact_Rf0(f, false, rule);
    std::map<std::string, double> expect;
    for (const auto& [q, w] : exact) expect[q.letters()] = w;
    std::set<std::string> keys;
    for (const auto& [q, c] : counts) keys.insert(q);
    for (const auto& [q, w] : expect) keys.insert(q);
    for (const auto& q : keys) {
      size_t c = counts.count(q) ? counts[q] : 0;
      double e = expect.count(q) ? expect[q] : 0.0;
      if (q == "NONE") {
        t.rows.push_back({str(k), str(size_t(f.index3())), q, q, str(c), format_real(e), "0", "0", "0"});
        continue;
      }
      PauliString pq = PauliString::parse(q);
      std::string back = unsigned_pauli(bullet(f.inverse(), pq)).letters();
      t.rows.push_back({str(k), str(size_t(f.index3())), q, back, str(c), format_real(e), str(pc.s_index(pq) >= 0),
                        str(stab.count(q) > 0), str(nonstab.count(back) > 0)});
    }
  }
  return t;
}

// ---- solve-parityl

Table run_solve_parityl(const Params& p, uint64_t seed, unsigned jobs) {
  const size_t n = p.count("n", 2, 8);
  size_t instances = p.count("instances", 1, 1000000);
  const size_t k = p.count("k", 1, 1000);
  const double eps = p.real("epsilon", 0.0, 1.0 / 6.0);
  const FaultPolicy policy = parse_fault_policy(p.choice("policy", {"uniform", "fixed-set", "concentrate"}));
  const std::string dag_path = p.text("dag");
  const size_t first = p.count("first_instance", 0, 100000000);
  SolverConfig cfg;
  cfg.repetitions = k;
  cfg.phase1_samples = p.count("phase1", 1, 100000);
  cfg.phase2_samples = p.count("phase2", 1, 100000);
  cfg.shares = p.count("shares", 1, 4);
  cfg.rule = parse_pick_rule(p.choice("rule", {"first", "uniform"}));

  std::optional<MonotoneDag> fixed;
  if (!dag_path.empty()) {
    std::ifstream in(dag_path);
    if (!in) throw ConfigError("cannot read dag file " + dag_path);
    fixed = parse_monotone_dag(in);
  }
  Table t{{"instance", "n", "epsilon", "policy", "expected", "parity", "correct", "votes_odd", "votes_even",
           "failed_repetitions", "oracle_runs", "seed"},
          {}};
  t.rows = parallel_rows(instances, jobs, [&](size_t j) {
    size_t i = first + j;
    Rng rng = make_rng(seed, i);
    MonotoneDag a = fixed ? *fixed : random_dag(n, rng);
    std::unique_ptr<RewindableOracle> dev = std::make_unique<HonestLogicalDevice>(rng());
    if (eps > 0) dev = std::make_unique<FaultyDevice>(std::move(dev), eps, policy, rng());
    SolveResult r = solve_dagparity(a, *dev, cfg, rng);
    bool expected = path_parity_bruteforce(a);
    return Row{str(i), str(a.size()), format_real(eps), eps > 0 ? to_string(policy) : "none", str(expected),
               str(r.parity), str(r.parity == expected), str(r.votes_odd), str(r.votes_even),
               str(r.failed_repetitions), std::to_string(r.oracle_runs), std::to_string(seed)};
  });
  return t;
}

// ---- nc1-estimate

Table run_nc1_estimate(const Params& p, uint64_t seed, unsigned jobs) {
  const size_t n = p.count("n", 1, 64);
  const double eps = p.real("epsilon", 0.0, 1.0 / 30.0);
  const Nc1Adversary adv = parse_nc1_adversary(p.choice("adversary", {"fixed-stabilizer", "uniform-stabilizer", "uniform-pauli"}));
  const double c = p.real("c", 1e-6, 1e6);
  const size_t reps = p.count("reps", 1, 10000000);
  size_t samples = p.count("samples", 0, 100000000);
  const double threshold = p.real("threshold", 0.0, 1.0);
  if (samples == 0) samples = nc1_sample_count(c, eps);
  Table t{{"rep", "x_basis", "samples", "decision", "correct", "max_nonstabilizer_deviation", "failures"}, {}};
  t.rows = parallel_rows(reps, jobs, [&](size_t r) {
    Rng rng = make_rng(seed, r);
    bool x_basis = random_bit(rng);
    Nc1Instance inst = random_nc1_instance(n, x_basis, rng);
    ExtractionOracle oracle(inst, eps, adv, rng());
    Nc1Estimate est = nc1_estimate(oracle, samples, threshold);
    double dev = 0;
    for (const auto& q : oracle.nonstabilizers())
      dev = std::max(dev, std::abs(est.frequency(size_t(two_qubit_index(q))) - 1.0 / 12.0));
    std::string decision = est.x_basis ? (*est.x_basis ? "X" : "Z") : "undecided";
    bool correct = est.x_basis && *est.x_basis == x_basis;
    return Row{str(r), x_basis ? "X" : "Z", str(samples), decision, str(correct), format_real(dev),
               std::to_string(oracle.failures())};
  });
  return t;
}

std::vector<Experiment> build_experiments() {
  std::vector<Experiment> e;
  e.push_back({"tableau-fuzz", "random Clifford circuits and Pauli measurements against a state vector",
               {{"circuits", "1000", "number of random circuits"},
                {"max_qubits", "5", "qubits per circuit drawn from 1..max_qubits"},
                {"gates", "24", "gates per circuit"},
                {"measurements", "4", "Pauli measurements after each circuit"}},
               run_tableau_fuzz});
  e.push_back({"audit", "pentagram constants, gamma constraints and blocking-f certificates",
               {{"section", "all", "all, constants, gamma or blocking"},
                {"gamma_draws", "10000", "random gamma draws checked for the coset and product conditions"},
                {"gamma_dense", "60", "three-wire gamma draws checked against dense unitaries"},
                {"rule", "first", "pick rule for inconsistent Paulis: first or uniform"}},
               run_audit});
  e.push_back({"mbqc-check", "compiled measurement patterns against the direct word unitary and byproduct",
               {{"words", "500", "number of random words"},
                {"max_wires", "4", "wires drawn from 2..max_wires"},
                {"steps", "6", "CNOT-times-diagonal steps per word"}},
               run_mbqc_check});
  e.push_back({"noise-sweep", "surface-code decoding failures, or noisy-extension rejections in graph mode",
               {{"mode", "memory", "memory, graph, or exhaustive (single flips on every codeword; p is ignored)"},
                {"d", "3,5", "comma-separated odd distances"},
                {"p", "1e-3,3e-3,1e-2", "comma-separated noise rates"},
                {"trials", "10000", "trials per (d, p)"},
                {"kind", "iid_depolarizing", "graph mode noise: iid_depolarizing, iid_xz or adversarial"},
                {"policy", "X", "letter placed by adversarial noise"},
                {"width", "3", "graph mode grid width"},
                {"height", "2", "graph mode grid height"}},
               run_noise_sweep});
  e.push_back({"half-rand-audit", "determinant encoding, randomized encoding, layered DAGs and CNOT words",
               {{"det_max_n", "5", "exhaustive determinant check up to this many vertices"},
                {"randomize_trials", "10000", "random DAGs for determinant and parity preservation"},
                {"efrak_random", "1000", "random DAGs for the CNOT word product"},
                {"max_n", "6", "largest random DAG size"}},
               run_half_rand_audit});
  e.push_back({"pentagram-dist", "output distribution of honest R_f runs for several f",
               {{"runs", "10000", "runs per f"},
                {"f_values", "3", "number of f values; the first is the identity"},
                {"wires", "4", "wires of the random identity words"},
                {"rule", "first", "pick rule: first or uniform"}},
               run_pentagram_dist});
  e.push_back({"solve-parityl", "majority-vote DAG parity solver on random instances",
               {{"n", "6", "DAG size"},
                {"instances", "100", "number of random instances"},
                {"first_instance", "0", "index of the first instance"},
                {"k", "15", "repetitions per instance"},
                {"epsilon", "0", "oracle failure rate; 0 uses the honest device"},
                {"policy", "uniform", "failure policy: uniform, fixed-set or concentrate"},
                {"phase1", "12", "phase-1 samples per repetition"},
                {"phase2", "16", "phase-2 samples per repetition"},
                {"shares", "2", "shares per cell"},
                {"rule", "first", "pick rule: first or uniform"},
                {"dag", "", "optional DAG file; replaces the random instances"}},
               run_solve_parityl});
  e.push_back({"nc1-estimate", "Pauli-frequency estimator for the two-qubit promise problem",
               {{"n", "4", "number of Cliffords"},
                {"epsilon", "0", "oracle failure rate"},
                {"adversary", "fixed-stabilizer", "fixed-stabilizer, uniform-stabilizer or uniform-pauli"},
                {"c", "4", "sample constant in ceil(c / sigma^2)"},
                {"reps", "200", "repetitions"},
                {"samples", "0", "samples per repetition; 0 means ceil(c / sigma^2)"},
                {"threshold", "0.0666666666666667", "frequency below which a Pauli counts as a stabilizer"}},
               run_nc1_estimate});
  return e;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::stringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (c.values_.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + key);
    c.values_[key] = value;
  }
  return c;
}

Params::Params(const Config& config, const std::vector<KeySpec>& keys) {
  for (const auto& k : keys) values_[k.name] = k.fallback;
  for (const auto& [k, v] : config.values()) {
    if (!values_.count(k)) throw ConfigError("unknown key: " + k);
    values_[k] = v;
  }
}

std::string Params::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::logic_error("undeclared key " + key);
  return it->second;
}

namespace {

size_t parse_count(const std::string& key, const std::string& s, size_t lo, size_t hi) {
  size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'");
  if (v < lo || v > hi)
    throw ConfigError(key + " = " + s + " is outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return size_t(v);
}

double parse_real(const std::string& key, const std::string& s, double lo, double hi) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw ConfigError(key + ": expected a number, got '" + s + "'");
  if (v < lo || v > hi) throw ConfigError(key + " = " + s + " is outside [" + format_real(lo) + ", " + format_real(hi) + "]");
  return v;
}

}  // namespace

size_t Params::count(const std::string& key, size_t lo, size_t hi) const { return parse_count(key, text(key), lo, hi); }

double Params::real(const std::string& key, double lo, double hi) const { return parse_real(key, text(key), lo, hi); }

std::string Params::choice(const std::string& key, const std::vector<std::string>& allowed) const {
  std::string v = text(key);
  if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError(key + " = " + v + " is not one of: " + list);
  }
  return v;
}

std::vector<size_t> Params::count_list(const std::string& key, size_t lo, size_t hi) const {
  std::vector<size_t> out;
  for (const auto& item : split(text(key), ',')) out.push_back(parse_count(key, item, lo, hi));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::vector<double> Params::real_list(const std::string& key, double lo, double hi) const {
  std::vector<double> out;
  for (const auto& item : split(text(key), ',')) out.push_back(parse_real(key, item, lo, hi));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string Table::csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

size_t Table::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range("no column " + name);
  return size_t(it - header.begin());
}

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> all = build_experiments();
  return all;
}

const Experiment& find_experiment(const std::string& name) {
  for (const auto& e : experiments())
    if (e.name == name) return e;
  throw ConfigError("unknown experiment: " + name);
}

Table run_experiment(const std::string& name, const Config& config, uint64_t seed, unsigned jobs) {
  const Experiment& e = find_experiment(name);
  Params params(config, e.keys);
  return e.run(params, seed, jobs);
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double chi2_upper_tail(double x, double df) {
  double z = (std::cbrt(x / df) - (1.0 - 2.0 / (9.0 * df))) / std::sqrt(2.0 / (9.0 * df));
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace shallowlab::lab
