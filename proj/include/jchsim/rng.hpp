// Copyright 2026 The jchsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef JCHSIM_RNG_HPP
#define JCHSIM_RNG_HPP

#include <cstdint>

#include "jchsim/errors.hpp"

namespace jchsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based stream: draw k is a hash of (key, k). Streams for different
/// (seed, index) pairs are independent of evaluation order.
class CounterRng {
 public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream)
      : key_(splitmix64(master_seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull))) {}

  std::uint64_t key() const { return key_; }
  std::uint64_t draws() const { return counter_; }

  std::uint64_t next_u64() {
    if (counter_ == ~std::uint64_t{0}) throw NumericalError("rng: stream exhausted after 2^64 draws");
    return splitmix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace jchsim

#endif  // JCHSIM_RNG_HPP
