// Copyright 2026 The lpnq Authors
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

#ifndef LPNQ_RANDOM_H
#define LPNQ_RANDOM_H

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace lpnq {

/// SplitMix64 finalizer.
constexpr uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based random stream.
///
/// The i-th output is a pure function of (key, i), so a stream can be split
/// into children by tag without any shared state. Two streams derived through
/// the same chain of `split` tags produce the same sequence no matter which
/// thread evaluates them or in what order. Satisfies UniformRandomBitGenerator.
class RandomStream {
   public:
    using result_type = uint64_t;

    explicit RandomStream(uint64_t seed = 0) : key_(mix64(seed ^ 0x6A09E667F3BCC909ULL)) {
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint64_t>::max();
    }

    result_type operator()() {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return mix64(key_ + counter_);
    }

    /// Independent child stream identified by `tag`. Does not advance this stream.
    RandomStream split(uint64_t tag) const {
        RandomStream child;
        child.key_ = mix64(key_ ^ mix64(tag + 0xD1B54A32D192ED03ULL));
        return child;
    }

    uint64_t key() const {
        return key_;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). `bound` must be positive.
    uint64_t below(uint64_t bound) {
        // Lemire's nearly-divisionless rejection.
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<uint64_t>(m);
        if (low < bound) {
            uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    bool bernoulli(double p) {
        return uniform() < p;
    }

    bool coin() {
        return ((*this)() >> 63) != 0;
    }

    /// Standard normal draw (Box-Muller, one output per call).
    double normal() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

   private:
    uint64_t key_ = 0;
    uint64_t counter_ = 0;
};

/// Number of worker threads used by `parallel_for` when the caller passes 0.
size_t default_thread_count();

/// Runs `body(i)` for every i in [0, count) across `threads` workers.
///
/// Work items are claimed dynamically, so `body` must write only to slots
/// owned by index i. Results are independent of the thread count as long as
/// each item draws randomness from a stream derived from i.
void parallel_for(size_t count, size_t threads, const std::function<void(size_t)> &body);

}  // namespace lpnq

#endif
