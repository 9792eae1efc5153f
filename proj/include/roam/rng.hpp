// Copyright 2026 The Roam Authors
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

#ifndef ROAM_RNG_HPP
#define ROAM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace roam {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ seeded through splitmix64. Platform-independent streams:
/// we never rely on std:: distributions, so the same (seed, call sequence)
/// yields identical bits everywhere.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    /// Stream derivation for replication k of a master-seeded experiment.
    static Rng stream(uint64_t master_seed, uint64_t index) {
        uint64_t sm = master_seed;
        uint64_t a = splitmix64(sm);
        sm = a ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
        return Rng(splitmix64(sm));
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), unbiased via rejection.
    uint64_t uniform_below(uint64_t bound) {
        if (bound == 0) return 0;
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform integer in [lo, hi] inclusive.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(uniform_below(static_cast<uint64_t>(hi - lo + 1)));
    }

    /// Fisher-Yates permutation of {0,...,n-1}.
    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            int j = static_cast<int>(uniform_below(static_cast<uint64_t>(i) + 1));
            std::swap(p[static_cast<size_t>(i)], p[static_cast<size_t>(j)]);
        }
        return p;
    }

    /// Uniform point on the k-simplex via the log-of-uniform normalization
    /// used by the experiment protocol.
    std::vector<double> simplex(int k) {
        std::vector<double> w(static_cast<size_t>(k));
        double total = 0.0;
        for (auto& x : w) {
            double u = uniform();
            while (u <= 0.0) u = uniform();
            x = std::log(u);
            total += x;
        }
        for (auto& x : w) x /= total;
        return w;
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

}  // namespace roam

#endif  // ROAM_RNG_HPP
