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


#include "shallowlab/surface.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

namespace shallowlab {

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::IidDepolarizing: return "iid_depolarizing";
    case NoiseKind::IidXZ: return "iid_xz";
    case NoiseKind::Adversarial: return "adversarial";
  }
  return "?";
}

NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "iid_depolarizing") return NoiseKind::IidDepolarizing;
  if (s == "iid_xz") return NoiseKind::IidXZ;
  if (s == "adversarial") return NoiseKind::Adversarial;
  throw std::invalid_argument("unknown noise kind: " + s);
}

PauliString sample_noise(const NoiseSpec& spec, size_t n, Rng& rng) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw std::invalid_argument("noise rate must lie in [0,1]");
  PauliString e(n);
  if (spec.p == 0.0) return e;
  static const char kDepol[3] = {'X', 'Y', 'Z'};
  static const char kXZ[2] = {'X', 'Z'};
  for (size_t q = 0; q < n; ++q) {
    if (random_unit(rng) >= spec.p) continue;
    switch (spec.kind) {
      case NoiseKind::IidDepolarizing: e.set(q, kDepol[random_below(rng, 3)]); break;
      case NoiseKind::IidXZ: e.set(q, kXZ[random_below(rng, 2)]); break;
      case NoiseKind::Adversarial: e.set(q, spec.policy); break;
    }
  }
  return e;
}

namespace {

bool same_check_sets(std::vector<std::vector<size_t>> a, std::vector<std::vector<size_t>> b) {
  for (auto& c : a) std::sort(c.begin(), c.end());
  for (auto& c : b) std::sort(c.begin(), c.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

size_t overlap(const std::vector<size_t>& a, const std::vector<size_t>& b) {
  size_t n = 0;
  for (size_t x : a) n += std::count(b.begin(), b.end(), x);
  return n;
}

}  // namespace

SurfaceCode::SurfaceCode(size_t d) : d_(d) {
  if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and at least 3");
  const long D = long(d);
  for (long i = -1; i < D; ++i) {
    for (long j = -1; j < D; ++j) {
      bool x_type = ((i + j) % 2 + 2) % 2 == 0;
      bool row_out = i < 0 || i == D - 1;
      bool col_out = j < 0 || j == D - 1;
      if (row_out && col_out) continue;
      if (row_out && !x_type) continue;
      if (col_out && x_type) continue;
      std::vector<size_t> supp;
      for (long r = i; r <= i + 1; ++r)
        for (long c = j; c <= j + 1; ++c)
          if (r >= 0 && r < D && c >= 0 && c < D) supp.push_back(size_t(r * D + c));
      (x_type ? xc_ : zc_).push_back(supp);
    }
  }
  for (size_t c = 0; c < d; ++c) lz_.push_back(c);
  for (size_t r = 0; r < d; ++r) lx_.push_back(r * d);
  for (const auto& c : xc_)
    if (overlap(c, lz_) % 2) throw std::logic_error("logical Z does not commute with X checks");
  for (const auto& c : zc_)
    if (overlap(c, lx_) % 2) throw std::logic_error("logical X does not commute with Z checks");

  for (int dir = 0; dir < 2 && rot_.empty(); ++dir) {
    std::vector<size_t> perm(d * d);
    for (size_t r = 0; r < d; ++r)
      for (size_t c = 0; c < d; ++c) perm[r * d + c] = dir == 0 ? c * d + (d - 1 - r) : (d - 1 - c) * d + r;
    auto mapped = [&](const std::vector<std::vector<size_t>>& checks) {
      auto out = checks;
      for (auto& c : out)
        for (auto& q : c) q = perm[q];
      return out;
    };
    if (same_check_sets(mapped(xc_), zc_) && same_check_sets(mapped(zc_), xc_)) rot_ = perm;
  }
  if (rot_.empty()) throw std::logic_error("no relabeling realizes logical H");
  mx_ = build_matcher(zc_);
  mz_ = build_matcher(xc_);
}

std::vector<PauliString> SurfaceCode::check_operators(size_t n, size_t block) const {
  std::vector<PauliString> out;
  size_t off = block * qubits();
  for (const auto& c : xc_) {
    PauliString p(n);
    for (size_t q : c) p.set(off + q, 'X');
    out.push_back(p);
  }
  for (const auto& c : zc_) {
    PauliString p(n);
    for (size_t q : c) p.set(off + q, 'Z');
    out.push_back(p);
  }
  return out;
}

PauliString SurfaceCode::logical_operator(size_t n, size_t block, char p) const {
  PauliString out(n);
  size_t off = block * qubits();
  if (p == 'X' || p == 'Y')
    for (size_t q : lx_) out.set_x(off + q, true);
  if (p == 'Z' || p == 'Y')
    for (size_t q : lz_) out.set_z(off + q, true);
  // Y = iXZ
  if (p == 'Y') out.set_phase(1);
  return out;
}

Bits SurfaceCode::z_syndrome(const Bits& bits) const {
  if (bits.size() != qubits()) throw std::invalid_argument("block size mismatch");
  Bits s(zc_.size(), 0);
  for (size_t k = 0; k < zc_.size(); ++k)
    for (size_t q : zc_[k]) s[k] ^= bits[q] & 1;
  return s;
}

SurfaceCode::Matcher SurfaceCode::build_matcher(const std::vector<std::vector<size_t>>& checks) const {
  Matcher m;
  m.nodes = checks.size();
  const size_t boundary = m.nodes;
  const size_t nq = qubits();
  // adjacency: (neighbor, qubit), in qubit order
  std::vector<std::vector<std::pair<size_t, size_t>>> adj(m.nodes + 1);
  for (size_t q = 0; q < nq; ++q) {
    std::vector<size_t> touching;
    for (size_t k = 0; k < checks.size(); ++k)
      if (std::find(checks[k].begin(), checks[k].end(), q) != checks[k].end()) touching.push_back(k);
    if (touching.empty() || touching.size() > 2) throw std::logic_error("qubit not in one or two checks");
    size_t a = touching[0], b = touching.size() == 2 ? touching[1] : boundary;
    adj[a].push_back({b, q});
    adj[b].push_back({a, q});
  }
  const size_t inf = std::numeric_limits<size_t>::max();
  m.dist.assign(m.nodes + 1, std::vector<size_t>(m.nodes + 1, inf));
  m.path.assign(m.nodes + 1, std::vector<Bits>(m.nodes + 1, Bits(nq, 0)));
  for (size_t src = 0; src <= m.nodes; ++src) {
    std::vector<size_t> via(m.nodes + 1, inf), prev(m.nodes + 1, inf);
    auto& dist = m.dist[src];
    dist[src] = 0;
    std::deque<size_t> queue{src};
    while (!queue.empty()) {
      size_t u = queue.front();
      queue.pop_front();
      for (auto [v, q] : adj[u]) {
        if (dist[v] != inf) continue;
        dist[v] = dist[u] + 1;
        via[v] = q;
        prev[v] = u;
        queue.push_back(v);
      }
    }
    for (size_t t = 0; t <= m.nodes; ++t) {
      if (dist[t] == inf) throw std::logic_error("decoding graph is disconnected");
      for (size_t u = t; u != src; u = prev[u]) m.path[src][t][via[u]] ^= 1;
    }
  }
  return m;
}

Bits SurfaceCode::Matcher::match(const Bits& syndrome, size_t nq) const {
  if (syndrome.size() != nodes) throw std::invalid_argument("syndrome length mismatch");
  std::vector<size_t> defects;
  for (size_t k = 0; k < nodes; ++k)
    if (syndrome[k] & 1) defects.push_back(k);
  Bits corr(nq, 0);
  auto add = [&](size_t a, size_t b) {
    for (size_t q = 0; q < nq; ++q) corr[q] ^= path[a][b][q];
  };
  const size_t boundary = nodes;
  const size_t k = defects.size();
  if (k == 0) return corr;
  if (k > 20) {
    // Greedy pairing in defect order.
    std::vector<bool> used(k, false);
    for (size_t i = 0; i < k; ++i) {
      if (used[i]) continue;
      used[i] = true;
      size_t best = boundary, bd = dist[defects[i]][boundary];
      for (size_t j = i + 1; j < k; ++j)
        if (!used[j] && dist[defects[i]][defects[j]] < bd) bd = dist[defects[i]][defects[j]], best = j;
      if (best == boundary) add(defects[i], boundary);
      else used[best] = true, add(defects[i], defects[best]);
    }
    return corr;
  }
  const size_t full = (size_t{1} << k) - 1;
  std::vector<uint32_t> cost(full + 1, 0);
  std::vector<uint8_t> choice(full + 1, 0);  // partner index, k = boundary
  for (size_t mask = 1; mask <= full; ++mask) {
    size_t i = size_t(__builtin_ctzll(mask));
    size_t rest = mask & ~(size_t{1} << i);
    uint32_t best = uint32_t(dist[defects[i]][boundary]) + cost[rest];
    uint8_t pick = uint8_t(k);
    for (size_t j = i + 1; j < k; ++j) {
      if (!((rest >> j) & 1)) continue;
      uint32_t c = uint32_t(dist[defects[i]][defects[j]]) + cost[rest & ~(size_t{1} << j)];
      if (c < best) best = c, pick = uint8_t(j);
    }
    cost[mask] = best;
    choice[mask] = pick;
  }
  for (size_t mask = full; mask;) {
    size_t i = size_t(__builtin_ctzll(mask));
    size_t j = choice[mask];
    mask &= ~(size_t{1} << i);
    if (j == k) {
      add(defects[i], boundary);
    } else {
      add(defects[i], defects[j]);
      mask &= ~(size_t{1} << j);
    }
  }
  return corr;
}

Bits SurfaceCode::match_x_errors(const Bits& z_syndrome) const { return mx_.match(z_syndrome, qubits()); }
Bits SurfaceCode::match_z_errors(const Bits& x_syndrome) const { return mz_.match(x_syndrome, qubits()); }

std::string SurfaceCode::layout() const {
  std::ostringstream out;
  out << "# shallowlab surface layout v1\n";
  out << "d " << d_ << "\n";
  auto list = [&](const char* tag, size_t idx, const std::vector<size_t>& s) {
    out << tag;
    if (idx != size_t(-1)) out << ' ' << idx;
    out << ':';
    for (size_t q : s) out << ' ' << q;
    out << '\n';
  };
  for (size_t k = 0; k < xc_.size(); ++k) list("X", k, xc_[k]);
  for (size_t k = 0; k < zc_.size(); ++k) list("Z", k, zc_[k]);
  list("LX", size_t(-1), lx_);
  list("LZ", size_t(-1), lz_);
  list("H-relabel", size_t(-1), rot_);
  return out.str();
}

PauliString rec(const SurfaceCode& code, const Syndrome& s) {
  const size_t per = code.check_count();
  if (s.bits.size() != s.blocks * per) throw std::invalid_argument("syndrome length mismatch");
  const size_t m = code.qubits();
  const size_t nx = code.x_checks().size();
  PauliString out(s.blocks * m);
  for (size_t b = 0; b < s.blocks; ++b) {
    auto first = s.bits.begin() + long(b * per);
    Bits xs(first, first + long(nx)), zs(first + long(nx), first + long(per));
    Bits xerr = code.match_x_errors(zs), zerr = code.match_z_errors(xs);
    for (size_t q = 0; q < m; ++q) {
      if (xerr[q]) out.set_x(b * m + q, true);
      if (zerr[q]) out.set_z(b * m + q, true);
    }
  }
  out.set_phase(uint8_t(out.num_y()));
  return out;
}

int dec(const SurfaceCode& code, const Bits& block_bits, const Bits& frame) {
  const size_t m = code.qubits();
  if (block_bits.size() != m || (!frame.empty() && frame.size() != m)) throw std::invalid_argument("block size mismatch");
  Bits b = block_bits;
  if (!frame.empty())
    for (size_t q = 0; q < m; ++q) b[q] ^= frame[q];
  Bits corr = code.match_x_errors(code.z_syndrome(b));
  int parity = 0;
  for (size_t q : code.logical_z()) parity ^= (b[q] ^ corr[q]) & 1;
  return parity;
}

EncodedRegister prepare_logical_basis(const SurfaceCode& code, const std::string& states, const NoiseSpec& noise,
                                      Rng& rng) {
  EncodedRegister reg;
  reg.code = &code;
  reg.blocks = states.size();
  const size_t m = code.qubits(), n = reg.qubits();
  reg.state = Tableau(n);
  for (size_t b = 0; b < reg.blocks; ++b) {
    if (states[b] == '+') {
      for (size_t q = 0; q < m; ++q) reg.state.h(b * m + q);
    } else if (states[b] != '0') {
      throw std::invalid_argument("logical basis state must be '0' or '+'");
    }
  }
  reg.state.apply_pauli(sample_noise(noise, n, rng));
  reg.prep.blocks = reg.blocks;
  for (size_t b = 0; b < reg.blocks; ++b)
    for (const auto& check : code.check_operators(n, b))
      reg.prep.bits.push_back(reg.state.measure(check, rng).sign < 0 ? 1 : 0);
  return reg;
}

namespace {

std::vector<size_t> block_relabel(const SurfaceCode& code, size_t n, size_t block) {
  std::vector<size_t> perm(n);
  for (size_t q = 0; q < n; ++q) perm[q] = q;
  const size_t m = code.qubits(), off = block * m;
  for (size_t q = 0; q < m; ++q) perm[off + q] = off + code.h_relabel()[q];
  return perm;
}

std::vector<PauliString> rotation_axes(const SurfaceCode& code, size_t n, const LogicalGate& g) {
  PauliString za = code.logical_operator(n, g.a, 'Z');
  switch (g.kind) {
    case LogicalKind::S: return {za};
    case LogicalKind::S_DAG: za.negate(); return {za};
    case LogicalKind::CZ: {
      PauliString zb = code.logical_operator(n, g.b, 'Z');
      PauliString both = za * zb;
      both.negate();
      return {za, zb, both};
    }
    default: return {};
  }
}

void check_blocks(const SurfaceCode& code, size_t n, const LogicalGate& g) {
  size_t blocks = n / code.qubits();
  bool two = g.kind == LogicalKind::CZ || g.kind == LogicalKind::CNOT;
  if (g.a >= blocks || (two && (g.b >= blocks || g.b == g.a))) throw std::out_of_range("logical gate block out of range");
}

}  // namespace

void apply_logical(EncodedRegister& reg, const LogicalGate& g) {
  const SurfaceCode& code = *reg.code;
  const size_t n = reg.qubits(), m = code.qubits();
  check_blocks(code, n, g);
  switch (g.kind) {
    case LogicalKind::H:
      for (size_t q = 0; q < m; ++q) reg.state.h(g.a * m + q);
      reg.state.permute(block_relabel(code, n, g.a));
      break;
    case LogicalKind::CNOT:
      for (size_t q = 0; q < m; ++q) reg.state.cnot(g.a * m + q, g.b * m + q);
      break;
    default:
      for (const auto& axis : rotation_axes(code, n, g)) reg.state.rotate_pi4(axis);
  }
}

void conjugate_logical(const SurfaceCode& code, const LogicalGate& g, PauliString& p) {
  const size_t n = p.size(), m = code.qubits();
  check_blocks(code, n, g);
  switch (g.kind) {
    case LogicalKind::H: {
      for (size_t q = 0; q < m; ++q) conjugate_in_place(CliffordGate::h(uint32_t(g.a * m + q)), p);
      auto perm = block_relabel(code, n, g.a);
      PauliString out(n);
      for (size_t q = 0; q < n; ++q) {
        out.set_x(perm[q], p.x(q));
        out.set_z(perm[q], p.z(q));
      }
      out.set_phase(p.phase());
      p = out;
      break;
    }
    case LogicalKind::CNOT:
      for (size_t q = 0; q < m; ++q) conjugate_in_place(CliffordGate::cnot(uint32_t(g.a * m + q), uint32_t(g.b * m + q)), p);
      break;
    default:
      for (const auto& axis : rotation_axes(code, n, g)) conjugate_by_rotation(axis, p);
  }
}

void apply_logical_layer(EncodedRegister& reg, const LogicalLayer& layer, const NoiseSpec& noise, Rng& rng) {
  for (const auto& g : layer) apply_logical(reg, g);
  reg.state.apply_pauli(sample_noise(noise, reg.qubits(), rng));
}

Bits read_block(EncodedRegister& reg, size_t block, Rng& rng) {
  if (block >= reg.blocks) throw std::out_of_range("block out of range");
  const size_t m = reg.code->qubits();
  Bits out(m);
  for (size_t q = 0; q < m; ++q) out[q] = reg.state.measure_z(block * m + q, rng).sign < 0 ? 1 : 0;
  return out;
}

Frame conjugated_frame(const SurfaceCode& code, const Syndrome& s, const LogicalCircuit& circuit) {
  PauliString p = rec(code, s);
  for (const auto& layer : circuit)
    for (const auto& g : layer) conjugate_logical(code, g, p);
  Frame fr;
  fr.f.resize(p.size());
  fr.h.resize(p.size());
  for (size_t q = 0; q < p.size(); ++q) {
    fr.f[q] = p.x(q);
    fr.h[q] = p.z(q);
  }
  return fr;
}

namespace {

void check_bases(const GraphProblemInstance& inst, const std::vector<std::map<size_t, char>>& bases) {
  if (bases.size() != inst.k()) throw std::invalid_argument("one basis map per round required");
  for (size_t r = 0; r < bases.size(); ++r) {
    auto verts = inst.graph.round_vertices(r + 1);
    if (bases[r].size() != verts.size()) throw std::invalid_argument("bases must cover the round's vertices");
    for (size_t v : verts) {
      auto it = bases[r].find(v);
      if (it == bases[r].end() || (it->second != 'X' && it->second != 'Y'))
        throw std::invalid_argument("basis must be X or Y for every round vertex");
    }
  }
}

}  // namespace

LogicalCircuit graph_logical_circuit(const GraphProblemInstance& inst, const std::vector<std::map<size_t, char>>& bases) {
  check_bases(inst, bases);
  LogicalCircuit c;
  LogicalLayer first;
  for (auto [u, v] : inst.graph.edges()) first.push_back({LogicalKind::CZ, u, v});
  for (size_t r = 0; r < bases.size(); ++r) {
    LogicalLayer phase, had;
    for (auto [v, b] : bases[r]) {
      if (b == 'Y') phase.push_back({LogicalKind::S_DAG, v, 0});
      had.push_back({LogicalKind::H, v, 0});
    }
    if (r == 0) {
      first.insert(first.end(), phase.begin(), phase.end());
      c.push_back(first);
    } else {
      c.push_back(phase);
    }
    c.push_back(had);
  }
  return c;
}

EncodedGraphRun run_encoded_graph(const GraphProblemInstance& inst, const SurfaceCode& code,
                                  const std::vector<std::map<size_t, char>>& bases, const NoiseSpec& noise, Rng& rng) {
  LogicalCircuit circuit = graph_logical_circuit(inst, bases);
  const size_t nv = inst.graph.vertex_count();
  EncodedRegister reg = prepare_logical_basis(code, std::string(nv, '+'), noise, rng);
  EncodedGraphRun run;
  run.readout.resize(nv);
  for (size_t r = 0; r < bases.size(); ++r) {
    // circuit layers 2r (diagonal) and 2r+1 (basis change), then readout of the round
    apply_logical_layer(reg, circuit[2 * r], noise, rng);
    apply_logical_layer(reg, circuit[2 * r + 1], noise, rng);
    for (auto [v, b] : bases[r]) run.readout[v] = read_block(reg, v, rng);
  }
  run.prep = reg.prep;
  return run;
}

MeasurementTranscript decode_graph_run(const GraphProblemInstance& inst, const SurfaceCode& code,
                                       const std::vector<std::map<size_t, char>>& bases, const std::vector<Bits>& readout,
                                       const Syndrome& s) {
  const size_t nv = inst.graph.vertex_count(), m = code.qubits();
  if (readout.size() != nv) throw std::invalid_argument("one readout block per vertex required");
  for (const auto& b : readout)
    if (b.size() != m) throw std::invalid_argument("block size mismatch");
  if (s.blocks != nv) throw std::invalid_argument("syndrome block count mismatch");
  Frame fr = conjugated_frame(code, s, graph_logical_circuit(inst, bases));
  MeasurementTranscript t;
  for (const auto& round : bases) {
    RoundRecord record;
    record.bases = round;
    for (auto [v, b] : round) {
      Bits f(fr.f.begin() + long(v * m), fr.f.begin() + long((v + 1) * m));
      record.outcomes[v] = dec(code, readout[v], f) ? -1 : 1;
    }
    t.rounds.push_back(record);
  }
  return t;
}

bool check_noisy_extended(const GraphProblemInstance& inst, const SurfaceCode& code,
                          const std::vector<std::map<size_t, char>>& bases, const std::vector<Bits>& readout,
                          const Syndrome& s) {
  return verify_transcript(inst, decode_graph_run(inst, code, bases, readout, s));
}

Bits random_codeword(const SurfaceCode& code, int value, Rng& rng) {
  Bits x(code.qubits(), 0);
  for (const auto& c : code.x_checks())
    if (random_bit(rng))
      for (size_t q : c) x[q] ^= 1;
  if (value)
    for (size_t q : code.logical_x()) x[q] ^= 1;
  return x;
}

bool memory_trial_fails(const SurfaceCode& code, double p, uint64_t seed, uint64_t index) {
  Rng rng = make_rng(seed, index);
  int value = random_bit(rng) ? 1 : 0;
  Bits x = random_codeword(code, value, rng);
  for (auto& b : x)
    if (random_unit(rng) < p) b ^= 1;
  return dec(code, x, {}) != value;
}

SweepRow memory_sweep_point(size_t d, double p, size_t trials, uint64_t seed) {
  SurfaceCode code(d);
  SweepRow row{d, p, trials, 0, seed};
  for (size_t t = 0; t < trials; ++t) row.failures += memory_trial_fails(code, p, seed, t);
  return row;
}

bool graph_trial_fails(const GraphProblemInstance& inst, const SurfaceCode& code, const NoiseSpec& noise, uint64_t seed,
                       uint64_t index) {
  Rng rng = make_rng(seed, index);
  auto bases = random_bases(inst, rng);
  EncodedGraphRun run = run_encoded_graph(inst, code, bases, noise, rng);
  return !check_noisy_extended(inst, code, bases, run.readout, run.prep);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "d,p,trials,failures,seed\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.6g,%zu,%zu,%llu\n", r.d, r.p, r.trials, r.failures,
                  static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

}  // namespace shallowlab
