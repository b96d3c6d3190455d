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

#include "shallowlab/parity.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace shallowlab {

void MonotoneDag::set_edge(size_t i, size_t j, bool v) {
  if (i >= j || j >= n_) throw std::invalid_argument("monotone DAG edges must go from a lower to a higher vertex");
  adj_[i * n_ + j] = v;
}

size_t MonotoneDag::edge_count() const { return size_t(std::count(adj_.begin(), adj_.end(), 1)); }

std::vector<std::pair<size_t, size_t>> MonotoneDag::slots(size_t n) {
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

MonotoneDag MonotoneDag::from_mask(size_t n, uint64_t mask) {
  MonotoneDag d(n);
  auto sl = slots(n);
  for (size_t k = 0; k < sl.size(); ++k)
    if ((mask >> k) & 1) d.set_edge(sl[k].first, sl[k].second, true);
  return d;
}

MonotoneDag parse_monotone_dag(std::istream& in) {
  std::string line;
  MonotoneDag d;
  bool have_n = false;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (!have_n) {
      size_t n = 0;
      if (first != "n" || !(ls >> n) || n < 2) throw std::runtime_error("dag line " + std::to_string(lineno) + ": expected 'n <count>' with count >= 2");
      d = MonotoneDag(n);
      have_n = true;
      continue;
    }
    size_t i = 0, j = 0;
    try {
      i = std::stoul(first);
    } catch (const std::exception&) {
      throw std::runtime_error("dag line " + std::to_string(lineno) + ": bad edge");
    }
    if (!(ls >> j) || i < 1 || j > d.size() || i >= j)
      throw std::runtime_error("dag line " + std::to_string(lineno) + ": edge must be 'i j' with 1 <= i < j <= n");
    d.set_edge(i - 1, j - 1, true);
  }
  if (!have_n) throw std::runtime_error("dag: missing 'n' line");
  return d;
}

MonotoneDag parse_monotone_dag(const std::string& text) {
  std::istringstream in(text);
  return parse_monotone_dag(in);
}

std::string format_monotone_dag(const MonotoneDag& d) {
  std::ostringstream out;
  out << "n " << d.size() << "\n";
  for (auto [i, j] : MonotoneDag::slots(d.size()))
    if (d.edge(i, j)) out << i + 1 << " " << j + 1 << "\n";
  return out.str();
}

namespace {

void count_paths(const MonotoneDag& d, size_t v, uint64_t& count) {
  if (v == d.size() - 1) {
    ++count;
    return;
  }
  for (size_t j = v + 1; j < d.size(); ++j)
    if (d.edge(v, j)) count_paths(d, j, count);
}

}  // namespace

bool path_parity_bruteforce(const MonotoneDag& d) {
  if (d.size() > 20) throw std::invalid_argument("path enumeration is capped at 20 vertices");
  if (d.size() < 2) return false;
  uint64_t count = 0;
  count_paths(d, 0, count);
  return count & 1;
}

Gf2Matrix extract_L(const MonotoneDag& a) {
  size_t n = a.size();
  if (n < 2) throw std::invalid_argument("need at least two vertices");
  Gf2Matrix l(n - 1, n - 1);
  for (size_t i = 0; i + 1 < n; ++i)
    for (size_t j = 0; j + 1 < n; ++j) {
      size_t c = j + 1;
      bool v = (i < c && a.edge(i, c)) || i == c;
      l.set(i, j, v);
    }
  return l;
}

bool det_encoding(const MonotoneDag& a) { return extract_L(a).determinant(); }

bool has_L_form(const Gf2Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (m.get(i, j) != (i == j + 1)) return false;
  return true;
}

ShareMatrix::ShareMatrix(size_t size, size_t shares) : k_(size), shares_(shares), bits_(size * (size + 1) / 2 * shares, 0) {
  if (shares == 0) throw std::invalid_argument("share count must be positive");
}

size_t ShareMatrix::cell(size_t i, size_t j) const {
  if (i > j || j >= k_) throw std::out_of_range("share cell out of range");
  // Row i starts after rows 0..i-1, which hold k, k-1, ..., k-i+1 cells.
  return i * k_ - i * (i - 1) / 2 + (j - i);
}

bool ShareMatrix::value(size_t i, size_t j) const {
  bool v = false;
  for (size_t l = 0; l < shares_; ++l) v ^= share(i, j, l);
  return v;
}

Gf2Matrix ShareMatrix::kxor() const {
  Gf2Matrix m(k_, k_);
  for (size_t i = 0; i < k_; ++i) {
    for (size_t j = i; j < k_; ++j) m.set(i, j, value(i, j));
    if (i > 0) m.set(i, i - 1, true);
  }
  return m;
}

size_t ShareMatrix::free_bit_count(size_t size, size_t shares) { return size * (size + 1) / 2 * (shares - 1); }

ShareMatrix ShareMatrix::from_bits(const Gf2Matrix& k, size_t shares, const std::vector<uint8_t>& free_bits) {
  if (!has_L_form(k)) throw std::invalid_argument("matrix is not in the required form");
  ShareMatrix s(k.rows(), shares);
  if (free_bits.size() != free_bit_count(k.rows(), shares)) throw std::invalid_argument("wrong number of share bits");
  size_t pos = 0;
  for (size_t i = 0; i < k.rows(); ++i)
    for (size_t j = i; j < k.rows(); ++j) {
      bool acc = k.get(i, j);
      for (size_t l = 0; l + 1 < shares; ++l) {
        bool b = free_bits[pos++] & 1;
        s.set_share(i, j, l, b);
        acc ^= b;
      }
      s.set_share(i, j, shares - 1, acc);
    }
  return s;
}

Gf2Matrix unit_upper_from_bits(size_t k, const std::vector<uint8_t>& bits, size_t offset) {
  Gf2Matrix r = Gf2Matrix::identity(k);
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j) r.set(i, j, bits.at(offset++) & 1);
  return r;
}

Gf2Matrix sample_unit_upper(size_t k, Rng& rng) {
  Gf2Matrix r = Gf2Matrix::identity(k);
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j) r.set(i, j, random_bit(rng));
  return r;
}

ShareMatrix randomize_matrix(const Gf2Matrix& l, Rng& rng, size_t shares) {
  if (!has_L_form(l)) throw std::invalid_argument("randomize_matrix: input is not upper triangular with a unit subdiagonal");
  size_t k = l.rows();
  Gf2Matrix r1 = sample_unit_upper(k, rng);
  Gf2Matrix r2 = sample_unit_upper(k, rng);
  Gf2Matrix kx = r1 * l * r2;
  std::vector<uint8_t> bits(ShareMatrix::free_bit_count(k, shares));
  for (auto& b : bits) b = random_bit(rng);
  return ShareMatrix::from_bits(kx, shares, bits);
}

MonotoneDag build_B(const ShareMatrix& k) {
  size_t n = k.size() + 1;
  MonotoneDag b(n);
  for (size_t i = 0; i < k.size(); ++i)
    for (size_t j = i; j < k.size(); ++j)
      if (k.value(i, j)) b.set_edge(i, j + 1, true);
  return b;
}

std::string LayeredVertex::label() const {
  if (!is_share()) return std::to_string(vertex);
  return "K(" + std::to_string(cell_i) + "," + std::to_string(cell_j) + "," + std::to_string(share) + ")";
}

size_t LayeredDag::vertex_count() const {
  size_t c = 0;
  for (const auto& l : layers) c += l.size();
  return c;
}

MonotoneDag LayeredDag::flattened() const {
  std::vector<size_t> base(layers.size(), 0);
  for (size_t k = 1; k < layers.size(); ++k) base[k] = base[k - 1] + layers[k - 1].size();
  MonotoneDag d(vertex_count());
  for (size_t k = 0; k < edges.size(); ++k)
    for (auto [a, b] : edges[k]) d.set_edge(base[k] + a, base[k + 1] + b, true);
  return d;
}

std::string LayeredDag::dump() const {
  std::ostringstream out;
  out << "layered-dag n " << n << " shares " << shares << "\n";
  for (size_t k = 0; k < layers.size(); ++k) {
    out << "layer " << layer_names[k] << ":";
    for (const auto& v : layers[k]) out << " " << v.label();
    out << "\n";
  }
  for (size_t k = 0; k < edges.size(); ++k) {
    out << "edges " << layer_names[k] << " -> " << layer_names[k + 1] << ":";
    for (auto [a, b] : edges[k]) out << " " << layers[k][a].label() << "-" << layers[k + 1][b].label();
    out << "\n";
  }
  return out.str();
}

namespace {

// Layers and all potential edges; `present` decides the share edges.
LayeredDag layered_shape(size_t n, size_t shares, const std::function<bool(size_t, size_t, size_t)>& present) {
  if (n < 2) throw std::invalid_argument("layered construction needs n >= 2");
  LayeredDag c;
  c.n = n;
  c.shares = shares;
  std::vector<LayeredVertex> plain;
  for (uint32_t v = 1; v <= n; ++v) plain.push_back(LayeredVertex{v, 0, 0, 0});
  for (size_t i = 1; i <= n; ++i) {
    c.layer_names.push_back("N" + std::to_string(i));
    c.layers.push_back(plain);
    if (i == n) break;
    c.layer_names.push_back("J" + std::to_string(i));
    auto j_layer = plain;
    for (size_t j = i; j <= n - 1; ++j)
      for (size_t l = 1; l <= shares; ++l) j_layer.push_back(LayeredVertex{0, uint32_t(i), uint32_t(j), uint32_t(l)});
    c.layers.push_back(j_layer);
  }
  c.edges.resize(c.layers.size() - 1);
  for (size_t i = 1; i < n; ++i) {
    size_t nk = 2 * (i - 1), jk = nk + 1;
    auto& down = c.edges[nk];
    auto& up = c.edges[jk];
    const auto& j_layer = c.layers[jk];
    for (uint32_t q = 0; q < n; ++q) down.emplace_back(q, q);
    for (uint32_t idx = uint32_t(n); idx < j_layer.size(); ++idx) {
      const auto& v = j_layer[idx];
      if (present(v.cell_i - 1, v.cell_j - 1, v.share - 1)) down.emplace_back(uint32_t(i - 1), idx);
    }
    for (uint32_t q = 0; q < n; ++q) up.emplace_back(q, q);
    for (uint32_t idx = uint32_t(n); idx < j_layer.size(); ++idx) up.emplace_back(idx, j_layer[idx].cell_j);
  }
  return c;
}

}  // namespace

LayeredDag build_layered(const ShareMatrix& k) {
  return layered_shape(k.size() + 1, k.shares(), [&](size_t i, size_t j, size_t l) { return k.share(i, j, l); });
}

namespace {

void count_layered_paths(const LayeredDag& d, size_t layer, uint32_t v, uint64_t& count) {
  if (layer + 1 == d.layers.size()) {
    if (v == d.n - 1) ++count;
    return;
  }
  for (auto [a, b] : d.edges[layer])
    if (a == v) count_layered_paths(d, layer + 1, b, count);
}

}  // namespace

bool path_parity_bruteforce(const LayeredDag& d) {
  if (d.n > 20) throw std::invalid_argument("path enumeration is capped at n = 20");
  uint64_t count = 0;
  count_layered_paths(d, 0, 0, count);
  return count & 1;
}

LayeredDag dfrak(const MonotoneDag& a, Rng& rng, size_t shares) { return build_layered(randomize_matrix(extract_L(a), rng, shares)); }

std::vector<LayeredDag> dfrak_outcomes(const MonotoneDag& a, size_t shares) {
  Gf2Matrix l = extract_L(a);
  size_t k = l.rows();
  size_t r_bits = k * (k - 1) / 2;
  size_t s_bits = ShareMatrix::free_bit_count(k, shares);
  size_t total = 2 * r_bits + s_bits;
  if (total > 24) throw std::invalid_argument("too much randomness to enumerate");
  std::vector<LayeredDag> out;
  out.reserve(size_t{1} << total);
  std::vector<uint8_t> bits(total);
  for (uint64_t mask = 0; mask < (uint64_t{1} << total); ++mask) {
    for (size_t b = 0; b < total; ++b) bits[b] = (mask >> b) & 1;
    Gf2Matrix kx = unit_upper_from_bits(k, bits, 0) * l * unit_upper_from_bits(k, bits, r_bits);
    std::vector<uint8_t> sb(bits.begin() + long(2 * r_bits), bits.end());
    out.push_back(build_layered(ShareMatrix::from_bits(kx, shares, sb)));
  }
  return out;
}

EfrakLayout EfrakLayout::make(size_t n, size_t shares) {
  EfrakLayout lay;
  lay.n = n;
  lay.shares = shares;
  LayeredDag full = layered_shape(n, shares, [](size_t, size_t, size_t) { return true; });
  uint32_t next = 3;
  for (const auto& layer : full.layers) {
    std::vector<uint32_t> w;
    for (size_t v = 0; v < layer.size(); ++v) w.push_back(next++);
    lay.vertex_wire.push_back(std::move(w));
  }
  uint32_t dummy = next++;
  for (size_t k = 0; k < full.edges.size(); ++k)
    for (auto [a, b] : full.edges[k]) {
      Slot s;
      s.layer = uint32_t(k);
      s.from = a;
      s.to = b;
      s.from_wire = lay.vertex_wire[k][a];
      s.to_wire = lay.vertex_wire[k + 1][b];
      if (k % 2 == 0 && full.layers[k + 1][b].is_share()) s.dummy_wire = dummy;
      lay.slots.push_back(s);
    }
  lay.wires = next;
  lay.source = lay.vertex_wire.front()[0];
  lay.target = lay.vertex_wire.back()[n - 1];
  return lay;
}

namespace {

// The two transvections whose product is the 3-cycle: (I + u u^T) for u = {1,2} then u = {0,2}.
const std::array<std::array<uint32_t, 2>, 2> kTransvections = {{{1, 2}, {0, 2}}};

void append_forward(std::vector<CnotGate>& out, const std::vector<CnotGate>& fwd, bool reverse) {
  if (reverse)
    out.insert(out.end(), fwd.rbegin(), fwd.rend());
  else
    out.insert(out.end(), fwd.begin(), fwd.end());
}

}  // namespace

size_t efrak_length(size_t n, size_t shares) {
  size_t f = EfrakLayout::make(n, shares).slots.size();
  return kTransvections.size() * (2 * (2 * f + 2) + 4);
}

CnotWord efrak(const LayeredDag& c) {
  EfrakLayout lay = EfrakLayout::make(c.n, c.shares);
  LayeredDag full = layered_shape(c.n, c.shares, [](size_t, size_t, size_t) { return true; });
  if (full.layers != c.layers || full.edges.size() != c.edges.size()) throw std::invalid_argument("efrak: layered DAG shape mismatch");

  std::vector<CnotGate> fwd;
  fwd.reserve(lay.slots.size());
  size_t slot = 0;
  for (size_t k = 0; k < full.edges.size(); ++k) {
    const auto& have = c.edges[k];
    size_t cursor = 0;
    for (auto e : full.edges[k]) {
      const auto& s = lay.slots[slot++];
      bool present = cursor < have.size() && have[cursor] == e;
      if (present) ++cursor;
      if (!present && s.dummy_wire < 0) throw std::invalid_argument("efrak: a fixed edge is missing");
      fwd.push_back(CnotGate{s.from_wire, present ? s.to_wire : uint32_t(s.dummy_wire)});
    }
    if (cursor != have.size()) throw std::invalid_argument("efrak: unexpected edge in layered DAG");
  }

  // The forward pass, applied first to last, adds into the target wire the sum over all
  // vertices u of (#paths u -> target) x_u. G = F^-1 X F with X copying the target into the
  // wires of u; commuting G with copies of u into the source leaves I + N(s, t) u u^T.
  CnotWord w;
  w.wires = lay.wires;
  auto& g = w.gates;
  g.reserve(efrak_length(c.n, c.shares));
  uint32_t src = uint32_t(lay.source), tgt = uint32_t(lay.target);
  for (const auto& u : kTransvections) {
    for (int rep = 0; rep < 2; ++rep) {
      append_forward(g, fwd, false);
      for (uint32_t a : u) g.push_back(CnotGate{tgt, a});
      append_forward(g, fwd, true);
      for (uint32_t b : u) g.push_back(CnotGate{b, src});
    }
  }
  return w;
}

LayeredDag decode_efrak(const CnotWord& w, size_t n, size_t shares) {
  EfrakLayout lay = EfrakLayout::make(n, shares);
  if (w.wires != lay.wires || w.gates.size() != efrak_length(n, shares)) throw std::invalid_argument("decode_efrak: shape mismatch");
  std::vector<uint8_t> bits;
  for (size_t k = 0; k < lay.slots.size(); ++k)
    if (lay.slots[k].dummy_wire >= 0) bits.push_back(w.gates[k].target == lay.slots[k].to_wire);
  size_t pos = 0;
  LayeredDag c = layered_shape(n, shares, [&](size_t, size_t, size_t) { return bits.at(pos++) != 0; });
  if (efrak(c) != w) throw std::invalid_argument("decode_efrak: word is not in the image of efrak");
  return c;
}

Gf2Matrix three_cycle_matrix(size_t m) {
  std::vector<size_t> perm(m);
  for (size_t i = 0; i < m; ++i) perm[i] = i;
  perm[0] = 1;
  perm[1] = 2;
  perm[2] = 0;
  return Gf2Matrix::permutation(perm);
}

CnotWord reversed(const CnotWord& w) {
  CnotWord r = w;
  std::reverse(r.gates.begin(), r.gates.end());
  return r;
}

std::string HalfRandomizationReport::str() const {
  std::ostringstream out;
  out << "inputs yes/no " << inputs_yes << "/" << inputs_no << ", support yes/no " << support_yes << "/" << support_no
      << ", identical within class " << (identical_within_class ? "yes" : "no") << ", disjoint " << (disjoint_across ? "yes" : "no")
      << ", equal cardinality " << (equal_cardinality ? "yes" : "no");
  return out.str();
}

namespace {

bool same_distribution(const OutputCounts& a, const OutputCounts& b) {
  if (a.size() != b.size()) return false;
  uint64_t ta = 0, tb = 0;
  for (const auto& [k, v] : a) ta += v;
  for (const auto& [k, v] : b) tb += v;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end() || v * tb != it->second * ta) return false;
  }
  return true;
}

}  // namespace

HalfRandomizationReport half_randomization_audit(const std::vector<std::pair<bool, OutputCounts>>& domain) {
  HalfRandomizationReport rep;
  const OutputCounts* ref[2] = {nullptr, nullptr};
  std::map<std::string, uint8_t> seen;
  for (const auto& [cls, counts] : domain) {
    (cls ? rep.inputs_yes : rep.inputs_no)++;
    if (!ref[cls])
      ref[cls] = &counts;
    else if (!same_distribution(*ref[cls], counts))
      rep.identical_within_class = false;
    for (const auto& [k, v] : counts) seen[k] |= uint8_t(cls ? 2 : 1);
  }
  for (const auto& [k, m] : seen) {
    if (m == 3) rep.disjoint_across = false;
    if (m & 2) ++rep.support_yes;
    if (m & 1) ++rep.support_no;
  }
  rep.equal_cardinality = rep.support_yes == rep.support_no;
  return rep;
}

HalfRandomizationReport audit_dfrak(size_t n, size_t shares) {
  std::vector<std::pair<bool, OutputCounts>> domain;
  size_t slots = MonotoneDag::slots(n).size();
  for (uint64_t mask = 0; mask < (uint64_t{1} << slots); ++mask) {
    MonotoneDag a = MonotoneDag::from_mask(n, mask);
    OutputCounts counts;
    for (const auto& c : dfrak_outcomes(a, shares)) ++counts[c.dump()];
    domain.emplace_back(path_parity_bruteforce(a), std::move(counts));
  }
  return half_randomization_audit(domain);
}

}  // namespace shallowlab
