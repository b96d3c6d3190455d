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

#ifndef SHALLOWLAB_RNG_HPP
#define SHALLOWLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace shallowlab {

// Seeded from a 64-bit value; the stream is identical across processes and platforms.
class Rng {
 public:
  using result_type = uint64_t;
  explicit Rng(uint64_t seed = 0) : gen_(seeded(seed)) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return gen_(); }

 private:
  static std::mt19937_64 seeded(uint64_t seed) {
    std::seed_seq seq{uint32_t(seed), uint32_t(seed >> 32)};
    return std::mt19937_64(seq);
  }
  std::mt19937_64 gen_;
};

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent stream for trial `index` of an experiment seeded with `seed`.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

inline Rng make_rng(uint64_t seed, uint64_t index) { return Rng(derive_seed(seed, index)); }

inline bool random_bit(Rng& rng) { return (rng() >> 63) != 0; }

inline uint64_t random_below(Rng& rng, uint64_t bound) {
  return std::uniform_int_distribution<uint64_t>(0, bound - 1)(rng);
}

inline double random_unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace shallowlab

#endif
