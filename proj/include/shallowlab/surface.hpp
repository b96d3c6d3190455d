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


#ifndef SHALLOWLAB_SURFACE_HPP
#define SHALLOWLAB_SURFACE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "shallowlab/graph.hpp"
#include "shallowlab/pauli.hpp"
#include "shallowlab/rng.hpp"
#include "shallowlab/tableau.hpp"

namespace shallowlab {

using Bits = std::vector<uint8_t>;

enum class NoiseKind { IidDepolarizing, IidXZ, Adversarial };

// Adversarial noise: the allowed support is drawn iid at rate p, then the policy letter
// ('X', 'Y' or 'Z') is placed on every allowed qubit.
struct NoiseSpec {
  double p = 0.0;
  NoiseKind kind = NoiseKind::IidDepolarizing;
  char policy = 'X';
  static NoiseSpec none() { return {}; }
};

std::string to_string(NoiseKind k);
NoiseKind parse_noise_kind(const std::string& s);

PauliString sample_noise(const NoiseSpec& spec, size_t n, Rng& rng);

// Rotated surface code on a d x d grid, data qubit (r, c) = r * d + c.
class SurfaceCode {
 public:
  explicit SurfaceCode(size_t d);

  size_t distance() const { return d_; }
  size_t qubits() const { return d_ * d_; }
  const std::vector<std::vector<size_t>>& x_checks() const { return xc_; }
  const std::vector<std::vector<size_t>>& z_checks() const { return zc_; }
  size_t check_count() const { return xc_.size() + zc_.size(); }
  const std::vector<size_t>& logical_x() const { return lx_; }
  const std::vector<size_t>& logical_z() const { return lz_; }
  // Qubit relabeling that, after transversal H, maps the code back onto itself.
  const std::vector<size_t>& h_relabel() const { return rot_; }

  // Check operators of block `block` inside an n-qubit register; X checks first.
  std::vector<PauliString> check_operators(size_t n, size_t block) const;
  PauliString logical_operator(size_t n, size_t block, char p) const;

  Bits z_syndrome(const Bits& bits) const;
  // Minimum-weight X error (Z error) explaining a Z-check (X-check) syndrome; ties go to the
  // lexicographically first matching.
  Bits match_x_errors(const Bits& z_syndrome) const;
  Bits match_z_errors(const Bits& x_syndrome) const;

  std::string layout() const;

 private:
  struct Matcher {
    size_t nodes = 0;  // checks, plus boundary node at index `nodes`
    std::vector<std::vector<size_t>> dist;
    std::vector<std::vector<Bits>> path;
    Bits match(const Bits& syndrome, size_t m) const;
  };
  Matcher build_matcher(const std::vector<std::vector<size_t>>& checks) const;

  size_t d_;
  std::vector<std::vector<size_t>> xc_, zc_;
  std::vector<size_t> lx_, lz_, rot_;
  Matcher mx_, mz_;
};

// Syndrome bits (1 = outcome -1), per block: X checks then Z checks.
struct Syndrome {
  size_t blocks = 0;
  Bits bits;
};

PauliString rec(const SurfaceCode& code, const Syndrome& s);

// Logical Z readout of bits xor frame.
int dec(const SurfaceCode& code, const Bits& block_bits, const Bits& frame);

enum class LogicalKind { H, S, S_DAG, CZ, CNOT };
struct LogicalGate {
  LogicalKind kind;
  size_t a = 0;
  size_t b = 0;
};
using LogicalLayer = std::vector<LogicalGate>;
using LogicalCircuit = std::vector<LogicalLayer>;

struct EncodedRegister {
  const SurfaceCode* code = nullptr;
  size_t blocks = 0;
  Tableau state;
  Syndrome prep;
  size_t qubits() const { return blocks * code->qubits(); }
};

// states[i] is '0' or '+'. The recovery rec(prep) is left unapplied.
EncodedRegister prepare_logical_basis(const SurfaceCode& code, const std::string& states, const NoiseSpec& noise,
                                      Rng& rng);

void apply_logical(EncodedRegister& reg, const LogicalGate& g);
void conjugate_logical(const SurfaceCode& code, const LogicalGate& g, PauliString& p);
// Applies the layer, then one noise layer.
void apply_logical_layer(EncodedRegister& reg, const LogicalLayer& layer, const NoiseSpec& noise, Rng& rng);
// Transversal Z readout of the given block.
Bits read_block(EncodedRegister& reg, size_t block, Rng& rng);

struct Frame {
  Bits f;
  Bits h;
};
Frame conjugated_frame(const SurfaceCode& code, const Syndrome& s, const LogicalCircuit& circuit);

// Encoded two-round graph measurement. Diagonal logical gates whose bases are known before
// round 1 share the first layer; round-2 S_DAG follows round-1 readout.
LogicalCircuit graph_logical_circuit(const GraphProblemInstance& inst, const std::vector<std::map<size_t, char>>& bases);

struct EncodedGraphRun {
  std::vector<Bits> readout;  // per vertex
  Syndrome prep;
};
EncodedGraphRun run_encoded_graph(const GraphProblemInstance& inst, const SurfaceCode& code,
                                  const std::vector<std::map<size_t, char>>& bases, const NoiseSpec& noise, Rng& rng);

MeasurementTranscript decode_graph_run(const GraphProblemInstance& inst, const SurfaceCode& code,
                                       const std::vector<std::map<size_t, char>>& bases, const std::vector<Bits>& readout,
                                       const Syndrome& s);
bool check_noisy_extended(const GraphProblemInstance& inst, const SurfaceCode& code,
                          const std::vector<std::map<size_t, char>>& bases, const std::vector<Bits>& readout,
                          const Syndrome& s);

// Code-capacity memory experiment: random logical codeword, iid bit flips at rate p, Dec.
struct SweepRow {
  size_t d;
  double p;
  size_t trials;
  size_t failures;
  uint64_t seed;
};
// Trial `index` of the memory experiment; true when Dec returns the wrong value.
bool memory_trial_fails(const SurfaceCode& code, double p, uint64_t seed, uint64_t index);
SweepRow memory_sweep_point(size_t d, double p, size_t trials, uint64_t seed);
// Trial `index` of the encoded graph experiment (random bases); true when check_noisy_extended rejects.
bool graph_trial_fails(const GraphProblemInstance& inst, const SurfaceCode& code, const NoiseSpec& noise, uint64_t seed,
                       uint64_t index);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Uniform random Z-basis readout pattern of logical `value` (a codeword of the classical code).
Bits random_codeword(const SurfaceCode& code, int value, Rng& rng);

}  // namespace shallowlab

#endif
