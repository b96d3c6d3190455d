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


#ifndef SHALLOWLAB_DEVICES_HPP
#define SHALLOWLAB_DEVICES_HPP

#include <array>
#include <memory>

#include "shallowlab/mbqc.hpp"
#include "shallowlab/solvers.hpp"
#include "shallowlab/surface.hpp"

namespace shallowlab {

// Runs the first-round word as a measurement pattern on a grid graph state and answers lines
// on the residual wires, with signs corrected by the tracked byproduct.
class HonestMbqcDevice : public RewindableOracle {
 public:
  explicit HonestMbqcDevice(uint64_t seed) : rng_(seed) {}
  void first_round(const FirstRoundInput& in) override;
  std::array<int, 4> second_round(const PauliLine& line) override;
  void rewind() override;
  void reset() override;

  const MbqcRun& last_run() const { return run_; }

 private:
  Rng rng_;
  MbqcRun run_;
  Snapshot after_first_;
  bool ready_ = false;
};

// Each wire is a surface-code block. The normal form is applied as one noisy diagonal layer
// and one noisy layer per transversal CNOT; before the second round a final noise layer is
// followed by an ideal syndrome measurement and its recovery, and lines are measured as
// logical operators.
class NoisyEncodedDevice : public RewindableOracle {
 public:
  NoisyEncodedDevice(size_t d, NoiseSpec noise, uint64_t seed);
  void first_round(const FirstRoundInput& in) override;
  std::array<int, 4> second_round(const PauliLine& line) override;
  void rewind() override;
  void reset() override;

  const EncodedRegister& reg() const { return reg_; }

 private:
  SurfaceCode code_;
  NoiseSpec noise_;
  Rng rng_;
  EncodedRegister reg_;
  Snapshot after_first_;
  bool ready_ = false;
};

}  // namespace shallowlab

#endif
