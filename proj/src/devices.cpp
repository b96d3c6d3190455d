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


#include "shallowlab/devices.hpp"

#include <stdexcept>

namespace shallowlab {

void HonestMbqcDevice::first_round(const FirstRoundInput& in) {
  MbqcPattern p = compile_word_to_mbqc(in.elements, in.wires);
  run_ = run_mbqc(p, rng_);
  after_first_ = run_.state.snapshot();
  ready_ = true;
}

std::array<int, 4> HonestMbqcDevice::second_round(const PauliLine& line) {
  if (!ready_) throw std::logic_error("second round before first round");
  const size_t n = run_.state.num_qubits();
  std::array<int, 4> out{};
  for (size_t k = 0; k < 4; ++k) {
    PauliString p(n), logical(run_.byproduct.size());
    for (size_t q = 0; q < line[k].size(); ++q) {
      p.set(run_.slots[q], line[k].at(q));
      logical.set(q, line[k].at(q));
    }
    int flip = run_.byproduct.commutes(logical) ? 1 : -1;
    out[k] = run_.state.measure(p, rng_).sign * line[k].sign() * flip;
  }
  return out;
}

void HonestMbqcDevice::rewind() {
  if (ready_) run_.state.restore(after_first_);
}

void HonestMbqcDevice::reset() {
  run_ = MbqcRun();
  after_first_ = Snapshot();
  ready_ = false;
}

NoisyEncodedDevice::NoisyEncodedDevice(size_t d, NoiseSpec noise, uint64_t seed) : code_(d), noise_(noise), rng_(seed) {}

void NoisyEncodedDevice::first_round(const FirstRoundInput& in) {
  NormalForm nf = normal_form(in);
  const size_t m = in.wires;
  reg_ = prepare_logical_basis(code_, std::string(m, '+'), noise_, rng_);
  reg_.state.apply_pauli(rec(code_, reg_.prep));
  LogicalLayer diag;
  for (size_t i = 0; i < m; ++i)
    for (unsigned k = 0; k < nf.diag.s(i); ++k) diag.push_back({LogicalKind::S, i, 0});
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      if (nf.diag.cz(i, j)) diag.push_back({LogicalKind::CZ, i, j});
  apply_logical_layer(reg_, diag, noise_, rng_);
  for (auto it = nf.cnots.gates.rbegin(); it != nf.cnots.gates.rend(); ++it)
    apply_logical_layer(reg_, {{LogicalKind::CNOT, it->control, it->target}}, noise_, rng_);

  Syndrome s{m, {}};
  for (size_t b = 0; b < m; ++b)
    for (const auto& check : code_.check_operators(reg_.qubits(), b))
      s.bits.push_back(reg_.state.measure(check, rng_).sign < 0 ? 1 : 0);
  reg_.state.apply_pauli(rec(code_, s));
  after_first_ = reg_.state.snapshot();
  ready_ = true;
}

std::array<int, 4> NoisyEncodedDevice::second_round(const PauliLine& line) {
  if (!ready_) throw std::logic_error("second round before first round");
  const size_t n = reg_.qubits();
  std::array<int, 4> out{};
  for (size_t k = 0; k < 4; ++k) {
    PauliString p(n);
    for (size_t q = 0; q < line[k].size(); ++q)
      if (line[k].at(q) != 'I') p *= code_.logical_operator(n, q, line[k].at(q));
    out[k] = reg_.state.measure(p, rng_).sign * line[k].sign();
  }
  return out;
}

void NoisyEncodedDevice::rewind() {
  if (ready_) reg_.state.restore(after_first_);
}

void NoisyEncodedDevice::reset() {
  reg_ = EncodedRegister();
  after_first_ = Snapshot();
  ready_ = false;
}

}  // namespace shallowlab
