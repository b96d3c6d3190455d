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

#include "shallowlab/graph.hpp"

#include <algorithm>
#include <sstream>

namespace shallowlab {

ColoredGraph::ColoredGraph(size_t width, size_t height, size_t k)
    : width_(width), height_(height), k_(k), color_(width * height, 1), adj_(width * height) {
  if (k < 1) throw std::invalid_argument("need at least one round");
}

void ColoredGraph::add_edge(size_t u, size_t v) {
  if (u == v) throw std::invalid_argument("self-loop");
  if (u >= vertex_count() || v >= vertex_count()) throw std::out_of_range("edge endpoint out of range");
  if (u > v) std::swap(u, v);
  auto e = std::make_pair(u, v);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it != edges_.end() && *it == e) throw std::invalid_argument("duplicate edge");
  edges_.insert(it, e);
  adj_[u].push_back(v);
  adj_[v].push_back(u);
}

bool ColoredGraph::has_edge(size_t u, size_t v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(u, v));
}

size_t ColoredGraph::max_degree() const {
  size_t d = 0;
  for (const auto& a : adj_) d = std::max(d, a.size());
  return d;
}

void ColoredGraph::set_color(size_t v, size_t round) {
  if (round < 1 || round > k_) throw std::out_of_range("round out of range");
  color_.at(v) = round;
}

std::vector<size_t> ColoredGraph::round_vertices(size_t round) const {
  std::vector<size_t> out;
  for (size_t v = 0; v < color_.size(); ++v)
    if (color_[v] == round) out.push_back(v);
  return out;
}

ColoredGraph grid_graph(size_t width, size_t height, size_t k) {
  ColoredGraph g(width, height, k);
  for (size_t r = 0; r < height; ++r)
    for (size_t c = 0; c < width; ++c) {
      if (c + 1 < width) g.add_edge(g.id(r, c), g.id(r, c + 1));
      if (r + 1 < height) g.add_edge(g.id(r, c), g.id(r + 1, c));
      if (c + 1 == width) g.set_color(g.id(r, c), k);
    }
  return g;
}

Tableau build_graph_state(const ColoredGraph& g) {
  Tableau t = Tableau::plus_state(g.vertex_count());
  for (auto [u, v] : g.edges()) t.cz(u, v);
  return t;
}

namespace {

void check_well_formed(const GraphProblemInstance& inst, const MeasurementTranscript& t) {
  const auto& g = inst.graph;
  if (t.rounds.size() != g.rounds()) throw MalformedTranscript("transcript has the wrong number of rounds");
  for (size_t i = 0; i < t.rounds.size(); ++i) {
    auto want = g.round_vertices(i + 1);
    const auto& rec = t.rounds[i];
    if (rec.bases.size() != want.size() || rec.outcomes.size() != want.size())
      throw MalformedTranscript("round " + std::to_string(i + 1) + " does not cover exactly its vertices");
    for (size_t v : want) {
      auto b = rec.bases.find(v);
      auto o = rec.outcomes.find(v);
      if (b == rec.bases.end() || o == rec.outcomes.end())
        throw MalformedTranscript("vertex " + std::to_string(v) + " missing from round " + std::to_string(i + 1));
      if (b->second != 'X' && b->second != 'Y') throw MalformedTranscript("basis must be X or Y");
      if (o->second != 1 && o->second != -1) throw MalformedTranscript("outcome must be +1 or -1");
    }
  }
}

PauliString single(size_t n, size_t v, char basis) { return PauliString::single(n, v, basis); }

}  // namespace

bool verify_transcript(const GraphProblemInstance& inst, const MeasurementTranscript& t, const std::vector<size_t>& order) {
  check_well_formed(inst, t);
  size_t n = inst.graph.vertex_count();
  Tableau state = build_graph_state(inst.graph);
  Rng unused(0);
  for (const auto& rec : t.rounds) {
    std::vector<size_t> vs;
    if (order.empty()) {
      for (const auto& [v, b] : rec.bases) vs.push_back(v);
    } else {
      for (size_t v : order)
        if (rec.bases.count(v)) vs.push_back(v);
      if (vs.size() != rec.bases.size()) throw std::invalid_argument("forcing order does not cover the round");
    }
    for (size_t v : vs) {
      try {
        state.measure(single(n, v, rec.bases.at(v)), unused, rec.outcomes.at(v));
      } catch (const ContradictionError&) {
        return false;
      }
    }
  }
  return true;
}

std::vector<std::map<size_t, char>> random_bases(const GraphProblemInstance& inst, Rng& rng) {
  std::vector<std::map<size_t, char>> out(inst.k());
  for (size_t v = 0; v < inst.graph.vertex_count(); ++v) out[inst.graph.color(v) - 1][v] = random_bit(rng) ? 'Y' : 'X';
  return out;
}

MeasurementTranscript honest_transcript(const GraphProblemInstance& inst, const std::vector<std::map<size_t, char>>& bases,
                                        Rng& rng) {
  if (bases.size() != inst.k()) throw std::invalid_argument("one basis map per round expected");
  size_t n = inst.graph.vertex_count();
  Tableau state = build_graph_state(inst.graph);
  MeasurementTranscript t;
  for (const auto& round : bases) {
    RoundRecord rec;
    rec.bases = round;
    for (const auto& [v, b] : round) rec.outcomes[v] = state.measure(single(n, v, b), rng).sign;
    t.rounds.push_back(std::move(rec));
  }
  return t;
}

std::string format_graph(const ColoredGraph& g) {
  std::ostringstream os;
  os << "# shallowlab graph v1\n" << g.rounds() << " " << g.width() << " " << g.height() << "\n";
  for (size_t v = 0; v < g.vertex_count(); ++v) os << "v " << v << " " << g.color(v) << "\n";
  for (auto [u, v] : g.edges()) os << "e " << u << " " << v << "\n";
  return os.str();
}

namespace {

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(line);
  }
  return out;
}

[[noreturn]] void bad(const std::string& what, const std::string& line) {
  throw std::invalid_argument(what + ": '" + line + "'");
}

}  // namespace

ColoredGraph parse_graph(const std::string& text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw std::invalid_argument("empty graph text");
  std::istringstream head(lines[0]);
  size_t k, w, h;
  if (!(head >> k >> w >> h)) bad("bad header", lines[0]);
  ColoredGraph g(w, h, k);
  std::vector<bool> seen(g.vertex_count(), false);
  for (size_t i = 1; i < lines.size(); ++i) {
    std::istringstream is(lines[i]);
    std::string tag;
    size_t a, b;
    if (!(is >> tag >> a >> b)) bad("bad line", lines[i]);
    if (tag == "v") {
      if (a >= g.vertex_count() || seen[a]) bad("bad or repeated vertex", lines[i]);
      seen[a] = true;
      g.set_color(a, b);
    } else if (tag == "e") {
      g.add_edge(a, b);
    } else {
      bad("unknown record", lines[i]);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw std::invalid_argument("every vertex needs a color line");
  return g;
}

std::string format_transcript(const MeasurementTranscript& t) {
  std::ostringstream os;
  os << "# shallowlab transcript v1\n";
  for (size_t i = 0; i < t.rounds.size(); ++i) {
    os << "round " << i + 1 << "\n";
    for (const auto& [v, b] : t.rounds[i].bases) {
      auto it = t.rounds[i].outcomes.find(v);
      if (it == t.rounds[i].outcomes.end()) throw MalformedTranscript("basis without outcome");
      os << "m " << v << " " << b << " " << (it->second > 0 ? "+1" : "-1") << "\n";
    }
  }
  return os.str();
}

MeasurementTranscript parse_transcript(const std::string& text) {
  MeasurementTranscript t;
  for (const auto& line : content_lines(text)) {
    std::istringstream is(line);
    std::string tag;
    is >> tag;
    if (tag == "round") {
      size_t r;
      if (!(is >> r) || r != t.rounds.size() + 1) bad("rounds must be numbered 1, 2, ...", line);
      t.rounds.emplace_back();
    } else if (tag == "m") {
      size_t v;
      std::string b, o;
      if (t.rounds.empty() || !(is >> v >> b >> o) || b.size() != 1 || (o != "+1" && o != "-1")) bad("bad measurement", line);
      auto& rec = t.rounds.back();
      if (rec.bases.count(v)) bad("repeated vertex", line);
      rec.bases[v] = b[0];
      rec.outcomes[v] = o == "+1" ? 1 : -1;
    } else {
      bad("unknown record", line);
    }
  }
  return t;
}

}  // namespace shallowlab
