// Copyright 2026 The reident Authors
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

#ifndef REIDENT_RANDOM_HPP_
#define REIDENT_RANDOM_HPP_

// Seed splitting and distribution helpers. The standard distributions are
// implementation-defined, so samples are drawn from raw mt19937_64 output to
// keep seeded runs identical across standard libraries.
//
// Stream layout under one global seed:
//   DeriveSeed(seed, kStreamSynthetic)       synthetic dataset
//   DeriveSeed(seed, kStreamAnonymization)   handle nonces, per fraction/class
//   DeriveSeed(seed, kStreamBaseline)        baseline shuffles

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

namespace reident {

inline constexpr std::uint64_t kStreamSynthetic = 1;
inline constexpr std::uint64_t kStreamAnonymization = 2;
inline constexpr std::uint64_t kStreamBaseline = 3;

// SplitMix64 finalizer.
inline std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return Mix64(Mix64(seed) ^ Mix64(stream * 0xd1b54a32d192ed03ULL + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n); n > 0. Rejection sampling, no modulo bias.
  std::uint64_t Below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

  // Standard normal via Box-Muller (one draw per call).
  double Normal() {
    double u1 = Uniform();
    while (u1 <= 0.0) u1 = Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // 16 lowercase hex digits.
  std::string HexNonce() {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::uint64_t v = engine_();
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
      v >>= 4;
    }
    return out;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates using Rng::Below so the permutation is portable.
template <typename It>
void Shuffle(It first, It last, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = rng.Below(i);
    std::swap(first[static_cast<std::ptrdiff_t>(i - 1)],
              first[static_cast<std::ptrdiff_t>(j)]);
  }
}

}  // namespace reident

#endif  // REIDENT_RANDOM_HPP_
