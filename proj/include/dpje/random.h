// Copyright 2026 The DPJE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPJE_RANDOM_H_
#define DPJE_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace dpje {

// Every random quantity in the library is drawn from a stream keyed by
// (seed, purpose, indices...). Streams never share state, so results do not
// depend on evaluation order or thread count.
enum class StreamTag : std::uint64_t {
  kSketch = 1,
  kLeverageSketch = 2,
  kRowSample = 3,
  kNoise = 4,
  kNeighbor = 5,
  kAudit = 6,
  kHitAndRun = 7,
  kPolytope = 8,
  kUser = 9,
};

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveKey(std::uint64_t seed, StreamTag tag,
                               std::initializer_list<std::uint64_t> indices) {
  std::uint64_t key = SplitMix64(seed ^ SplitMix64(static_cast<std::uint64_t>(tag)));
  for (std::uint64_t index : indices) key = SplitMix64(key ^ SplitMix64(index + 0x632be59bd9b4e019ULL));
  return key;
}

// Maps 64 random bits to a double in the open interval (0, 1).
inline double BitsToUnit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// A seeded engine for bulk draws (sketch matrices, audit trials).
class Stream {
 public:
  Stream(std::uint64_t seed, StreamTag tag,
         std::initializer_list<std::uint64_t> indices = {})
      : engine_(DeriveKey(seed, tag, indices)) {}

  double Uniform() { return BitsToUnit(engine_()); }
  double Normal() { return normal_(engine_); }
  std::uint64_t Bits() { return engine_(); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  // Ziggurat sampler; several times faster than the polar method.
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace dpje

#endif  // DPJE_RANDOM_H_
