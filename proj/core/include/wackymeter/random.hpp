// Copyright 2026-present the wackymeter project
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
#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace wackymeter {

// splitmix64-seeded xoshiro256** generator. Unlike the standard library
// distributions, every derived draw below is fully specified, so seeded
// artifacts are identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  // Independent stream keyed by a base seed and any number of labels, e.g.
  // (seed, threshold, repeat).
  static Rng derive(std::uint64_t seed,
                    std::initializer_list<std::uint64_t> labels) noexcept;

  std::uint64_t next() noexcept;
  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Uniform integer in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept;

 private:
  std::uint64_t s_[4];
};

// `count` distinct indices drawn uniformly without replacement from
// [0, population), in draw order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(Rng& rng,
                                                    std::size_t population,
                                                    std::size_t count);

}  // namespace wackymeter
