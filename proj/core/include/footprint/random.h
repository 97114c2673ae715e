/*
 * Copyright 2026 The Footprint Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FOOTPRINT_RANDOM_H_
#define FOOTPRINT_RANDOM_H_

#include <cstdint>

namespace footprint {

// Counter-based SplitMix64 (Steele, Lea & Flood 2014, finalizer "Mix13").
// Draw i of stream (seed, stream) is Mix(key + (i + 1) * 0x9e3779b97f4a7c15)
// with key = Mix(seed ^ Mix(stream)). The output sequence is fixed by this
// definition and is identical on every platform; all conversions to doubles
// and bounded integers below are likewise integer-exact.
//
// Version: footprint-rng/1. Changing any constant here is a format break.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static std::uint64_t Mix(std::uint64_t z);

  std::uint64_t Next();

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform01();

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);

  // Uniform integer on [0, bound) by rejection; bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace footprint

#endif  // FOOTPRINT_RANDOM_H_
