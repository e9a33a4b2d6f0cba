#pragma once

#include <cstdint>
#include <random>

namespace fairbound {

// Deterministic RNG used everywhere in the toolkit. Doubles are drawn from
// raw mt19937_64 output so streams are bit-identical across platforms
// (std::uniform_real_distribution is implementation-defined).
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    // uniform in [0, 1)
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double next_uniform(double lo, double hi) {
        return lo + next_unit() * (hi - lo);
    }

    // uniform integer in [0, n), rejection-sampled to avoid modulo bias
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    std::uint64_t next_raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

// Fisher-Yates shuffle driven by SeededRng.
template <typename T>
void shuffle_inplace(std::vector<T>& v, SeededRng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace fairbound
