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

#ifndef SHALLOWLAB_GRAPH_HPP
#define SHALLOWLAB_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shallowlab/rng.hpp"
#include "shallowlab/tableau.hpp"

namespace shallowlab {

// Graph whose vertices sit on a width x height grid (vertex id = row * width + col) and
// carry a measurement round in 1..k.
class ColoredGraph {
 public:
  ColoredGraph() = default;
  ColoredGraph(size_t width, size_t height, size_t k);

  size_t width() const { return width_; }
  size_t height() const { return height_; }
  size_t rounds() const { return k_; }
  size_t vertex_count() const { return color_.size(); }
  size_t id(size_t row, size_t col) const { return row * width_ + col; }

  void add_edge(size_t u, size_t v);
  bool has_edge(size_t u, size_t v) const;
  const std::vector<std::pair<size_t, size_t>>& edges() const { return edges_; }
  const std::vector<size_t>& neighbors(size_t v) const { return adj_.at(v); }
  size_t max_degree() const;

  void set_color(size_t v, size_t round);
  size_t color(size_t v) const { return color_.at(v); }
  std::vector<size_t> round_vertices(size_t round) const;

  bool operator==(const ColoredGraph& o) const { return k_ == o.k_ && width_ == o.width_ && color_ == o.color_ && edges_ == o.edges_; }

 private:
  size_t width_ = 0, height_ = 0, k_ = 1;
  std::vector<size_t> color_;
  std::vector<std::vector<size_t>> adj_;
  std::vector<std::pair<size_t, size_t>> edges_;  // u < v, sorted
};

// Full width x height grid; the last column is round k, everything else round 1.
ColoredGraph grid_graph(size_t width, size_t height, size_t k = 2);

struct GraphProblemInstance {
  ColoredGraph graph;
  size_t k() const { return graph.rounds(); }
};

// Product of CZ over the edges applied to |+>^V.
Tableau build_graph_state(const ColoredGraph& g);

struct RoundRecord {
  std::map<size_t, char> bases;   // 'X' or 'Y'
  std::map<size_t, int> outcomes;  // +1 or -1
};

struct MeasurementTranscript {
  std::vector<RoundRecord> rounds;
};

class MalformedTranscript : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Accepts iff some run of the honest protocol could produce the outcomes. Within a round,
// vertices are forced in `order` (ascending id when empty).
bool verify_transcript(const GraphProblemInstance& inst, const MeasurementTranscript& t,
                       const std::vector<size_t>& order = {});

// Honest measurement of the graph state, round by round, with the given bases.
MeasurementTranscript honest_transcript(const GraphProblemInstance& inst, const std::vector<std::map<size_t, char>>& bases,
                                        Rng& rng);
std::vector<std::map<size_t, char>> random_bases(const GraphProblemInstance& inst, Rng& rng);

// Text formats, version 1:
//   graph:      "# shallowlab graph v1", "k W H", then "v <id> <round>" per vertex and "e <u> <v>" per edge.
//   transcript: "# shallowlab transcript v1", then per round "round <i>" and "m <id> <basis> <+1|-1>" lines.
std::string format_graph(const ColoredGraph& g);
ColoredGraph parse_graph(const std::string& text);
std::string format_transcript(const MeasurementTranscript& t);
MeasurementTranscript parse_transcript(const std::string& text);

}  // namespace shallowlab

#endif
