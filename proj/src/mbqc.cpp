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

#include "shallowlab/mbqc.hpp"

#include <algorithm>
#include <stdexcept>

namespace shallowlab {

namespace {

struct Op {
  char kind;  // 'H', 'D' or 'Z' (CZ between a and a + 1)
  uint32_t a;
};

class OpList {
 public:
  explicit OpList(size_t wires) : last_(wires, -1) {}

  void single(char kind, uint32_t w) {
    int prev = last_[w];
    if (kind == 'H' && prev >= 0 && ops_[prev].kind == 'H') {
      ops_[prev].kind = 0;
      last_[w] = -1;
      return;
    }
    ops_.push_back({kind, w});
    last_[w] = int(ops_.size()) - 1;
  }
  void cz_adjacent(uint32_t a) {
    ops_.push_back({'Z', a});
    last_[a] = last_[a + 1] = int(ops_.size()) - 1;
  }
  void cz(uint32_t a, uint32_t b) {
    if (a > b) std::swap(a, b);
    if (b == a + 1) return cz_adjacent(a);
    swap(b - 1);
    cz(a, b - 1);
    swap(b - 1);
  }
  void cnot(uint32_t c, uint32_t t) {
    if (c + 1 == t || t + 1 == c) {
      single('H', t);
      cz(c, t);
      single('H', t);
      return;
    }
    uint32_t t2 = c > t ? t + 1 : t - 1;
    swap(std::min(t, t2));
    cnot(c, t2);
    swap(std::min(t, t2));
  }
  // SWAP(w, w + 1) as three CNOTs.
  void swap(uint32_t w) {
    cnot(w, w + 1);
    cnot(w + 1, w);
    cnot(w, w + 1);
  }
  const std::vector<Op>& ops() const { return ops_; }

 private:
  std::vector<Op> ops_;
  std::vector<int> last_;
};

// Bases over the four columns of a layer for each single-wire op.
const char* layer_bases(char op) {
  switch (op) {
    case 'H': return "XYYY";
    case 'D': return "YXXX";
    default: return "XXXX";
  }
}

void column_circuit(const MbqcPattern& p, size_t col, Circuit& out) {
  if (col % 4 == 0 && col / 4 < p.layers.size())
    for (uint32_t w : p.layers[col / 4].cz) out.push_back(CliffordGate::cz(w, w + 1));
  if (col + 1 == p.columns) return;
  for (uint32_t w = 0; w < p.wires; ++w) {
    if (p.basis[p.vertex(w, col)] == 'Y') out.push_back(CliffordGate::s_dag(w));
    out.push_back(CliffordGate::h(w));
  }
}

}  // namespace

std::vector<MbqcLayer> mbqc_layers(const std::vector<WordStep>& word, size_t wires) {
  if (wires < 1) throw std::invalid_argument("need at least one wire");
  OpList ops(wires);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const DiagWord& d = it->diag;
    if (d.wires() != wires) throw std::invalid_argument("diagonal part has the wrong wire count");
    for (uint32_t i = 0; i < wires; ++i)
      for (unsigned k = 0; k < (4u - d.s(i)) % 4u; ++k) ops.single('D', i);
    for (uint32_t i = 0; i < wires; ++i)
      for (uint32_t j = i + 1; j < wires; ++j)
        if (d.cz(i, j)) ops.cz(i, j);
    const CnotGate& g = it->cnot;
    if (g.control >= wires || g.target >= wires || g.control == g.target) throw std::invalid_argument("bad CNOT in word");
    ops.cnot(g.control, g.target);
  }
  std::vector<MbqcLayer> layers;
  std::vector<bool> used(wires, true);
  for (const Op& op : ops.ops()) {
    if (!op.kind) continue;
    bool two = op.kind == 'Z';
    if (used[op.a] || (two && used[op.a + 1])) {
      layers.push_back({{}, std::vector<char>(wires, 'I')});
      std::fill(used.begin(), used.end(), false);
    }
    used[op.a] = true;
    if (two) {
      used[op.a + 1] = true;
      layers.back().cz.push_back(op.a);
    } else {
      layers.back().op[op.a] = op.kind;
    }
  }
  return layers;
}

MbqcPattern compile_word_to_mbqc(const std::vector<WordStep>& word, size_t wires, size_t max_columns) {
  MbqcPattern p;
  p.wires = wires;
  p.layers = mbqc_layers(word, wires);
  p.columns = 4 * p.layers.size() + 1;
  if (max_columns && p.columns > max_columns)
    throw std::length_error("word needs " + std::to_string(p.columns) + " grid columns, more than " + std::to_string(max_columns));
  p.graph = ColoredGraph(p.columns, wires, 2);
  p.basis.assign(wires * p.columns, 0);
  for (uint32_t w = 0; w < wires; ++w) {
    for (size_t c = 0; c + 1 < p.columns; ++c) {
      p.graph.add_edge(p.vertex(w, c), p.vertex(w, c + 1));
      p.basis[p.vertex(w, c)] = layer_bases(p.layers[c / 4].op[w])[c % 4];
    }
    p.residual.push_back(p.vertex(w, p.columns - 1));
    p.graph.set_color(p.residual.back(), 2);
  }
  for (size_t l = 0; l < p.layers.size(); ++l)
    for (uint32_t w : p.layers[l].cz) p.graph.add_edge(p.vertex(w, 4 * l), p.vertex(w + 1, 4 * l));
  for (size_t c = 0; c < p.columns; ++c) column_circuit(p, c, p.logical);

  // Heisenberg images of X_w and Z_w under the columns after the current one, built backwards.
  p.byproduct.assign(wires * p.columns, PauliString(wires));
  std::vector<PauliString> ximg, zimg;
  for (uint32_t w = 0; w < wires; ++w) {
    ximg.push_back(PauliString::single(wires, w, 'X'));
    zimg.push_back(PauliString::single(wires, w, 'Z'));
  }
  auto image = [&](const PauliString& q) {
    PauliString r(wires);
    r.set_phase(q.phase());
    for (size_t j = 0; j < wires; ++j)
      if (q.x(j)) r *= ximg[j];
    for (size_t j = 0; j < wires; ++j)
      if (q.z(j)) r *= zimg[j];
    return r;
  };
  for (size_t c = p.columns - 1; c-- > 0;) {
    // A -1 at column c leaves X on the wire just after that column's J.
    for (uint32_t w = 0; w < wires; ++w) p.byproduct[p.vertex(w, c)] = ximg[w];
    Circuit g;
    column_circuit(p, c, g);
    std::vector<PauliString> nx, nz;
    for (uint32_t w = 0; w < wires; ++w) {
      nx.push_back(image(conjugate_pauli_through(g, PauliString::single(wires, w, 'X'))));
      nz.push_back(image(conjugate_pauli_through(g, PauliString::single(wires, w, 'Z'))));
    }
    ximg = std::move(nx);
    zimg = std::move(nz);
  }
  return p;
}

PauliString pauli_byproduct(const MbqcPattern& p, const std::map<size_t, int>& outcomes) {
  PauliString b(p.wires);
  for (uint32_t w = 0; w < p.wires; ++w)
    for (size_t c = 0; c + 1 < p.columns; ++c) {
      size_t v = p.vertex(w, c);
      auto it = outcomes.find(v);
      if (it == outcomes.end()) throw std::invalid_argument("missing outcome for vertex " + std::to_string(v));
      if (it->second < 0) b *= p.byproduct[v];
    }
  return b;
}

Circuit word_circuit(const std::vector<WordStep>& word) {
  Circuit c;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const DiagWord& d = it->diag;
    for (uint32_t i = 0; i < d.wires(); ++i)
      for (unsigned k = 0; k < d.s(i); ++k) c.push_back(CliffordGate::s(i));
    for (uint32_t i = 0; i < d.wires(); ++i)
      for (uint32_t j = i + 1; j < d.wires(); ++j)
        if (d.cz(i, j)) c.push_back(CliffordGate::cz(i, j));
    c.push_back(CliffordGate::cnot(it->cnot.control, it->cnot.target));
  }
  return c;
}

MbqcRun run_mbqc(const MbqcPattern& p, Rng& rng, const std::map<size_t, int>& forced) {
  size_t m = p.wires, n = 2 * m;
  MbqcRun run;
  run.state = Tableau::plus_state(n);
  std::vector<size_t> cur(m), nxt(m);
  for (size_t w = 0; w < m; ++w) {
    cur[w] = w;
    nxt[w] = m + w;
  }
  Rng unused(0);
  for (size_t c = 0; c < p.columns; ++c) {
    if (c % 4 == 0 && c / 4 < p.layers.size())
      for (uint32_t w : p.layers[c / 4].cz) run.state.cz(cur[w], cur[w + 1]);
    if (c + 1 == p.columns) break;
    for (size_t w = 0; w < m; ++w) run.state.cz(cur[w], nxt[w]);
    for (size_t w = 0; w < m; ++w) {
      size_t v = p.vertex(w, c);
      std::optional<int> f;
      if (auto it = forced.find(v); it != forced.end()) f = it->second;
      int s = run.state.measure(PauliString::single(n, cur[w], p.basis[v]), rng, f).sign;
      run.outcomes[v] = s;
      // Back to |+> so the slot can host the column after next.
      if (p.basis[v] == 'Y') run.state.s_dag(cur[w]);
      if (run.state.measure(PauliString::single(n, cur[w], 'X'), unused).sign < 0) run.state.z(cur[w]);
    }
    std::swap(cur, nxt);
  }
  run.slots = cur;
  run.byproduct = pauli_byproduct(p, run.outcomes);
  return run;
}

}  // namespace shallowlab
