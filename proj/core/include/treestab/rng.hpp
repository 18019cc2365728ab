#pragma once

#include <cstdint>
#include <vector>

#include "treestab/rational.hpp"

namespace treestab {

// SplitMix64. One 64-bit seed drives every random choice in the toolkit;
// split() derives independent child streams by tag so concurrent stages stay
// deterministic regardless of scheduling. We avoid std:: distributions on
// purpose: their outputs are implementation-defined, which would break the
// byte-identical-output contract.
struct Rng {
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;

    explicit Rng(std::uint64_t seed = 0) : state(seed + 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw from [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        std::uint64_t x;
        do { x = next(); } while (x >= limit);
        return x % n;
    }

    // Bernoulli with exact rational probability num/den.
    bool chance(const Q& p) {
        if (p.numerator() <= 0) return false;
        if (p >= Q(1)) return true;
        // den fits desk-scale parameters comfortably in 64 bits.
        std::uint64_t den = p.denominator().convert_to<std::uint64_t>();
        std::uint64_t num = p.numerator().convert_to<std::uint64_t>();
        return below(den) < num;
    }

    Rng split(std::uint64_t tag) {
        Rng child(state ^ (tag * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
        child.next();
        return child;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct elements sampled from pool order-preservingly.
    std::vector<int> sample_without_replacement(const std::vector<int>& pool, std::size_t k);
};

}  // namespace treestab
