// Copyright 2026 The qidt Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace qidt {

namespace detail {
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Seeded, splittable random stream. A stream is identified by its key;
/// split(k) derives an independent child stream without consuming state,
/// so parallel work can be chunked deterministically.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : key_(detail::splitmix64(seed)), engine_(key_) {}

    Rng split(std::uint64_t index) const {
        Rng child;
        child.key_ = detail::splitmix64(key_ ^ detail::splitmix64(index + 0x632BE59BD9B4E019ULL));
        child.engine_.seed(child.key_);
        return child;
    }

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t next_u64() { return engine_(); }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    std::mt19937_64& engine() noexcept { return engine_; }

  private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace qidt
