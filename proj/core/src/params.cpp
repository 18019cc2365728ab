#include "treestab/params.hpp"

#include <limits>

#include "treestab/errors.hpp"
#include "treestab/rng.hpp"

namespace treestab {

std::vector<int> Rng::sample_without_replacement(const std::vector<int>& pool, std::size_t k) {
    // Selection sampling: include pool[i] with probability (k-taken)/(n-i).
    std::vector<int> out;
    if (k > pool.size()) k = pool.size();
    out.reserve(k);
    std::size_t taken = 0;
    for (std::size_t i = 0; i < pool.size() && taken < k; ++i) {
        std::uint64_t remaining = pool.size() - i;
        if (below(remaining) < k - taken) {
            out.push_back(pool[i]);
            ++taken;
        }
    }
    return out;
}

Q pow_q(const Q& base, unsigned long long e) {
    Q result(1);
    Q b = base;
    while (e > 0) {
        if (e & 1ULL) result *= b;
        b *= b;
        e >>= 1ULL;
    }
    return result;
}

unsigned long long saturating_factorial(unsigned long long n) {
    const unsigned long long cap = 1ULL << 62;
    unsigned long long f = 1;
    for (unsigned long long i = 2; i <= n; ++i) {
        if (f > cap / i) return cap;
        f *= i;
    }
    return f;
}

namespace {

// Smallest k with 1/base <= 2^k (so base^e >= 2^(-k*e)).
unsigned long long inverse_log2_ceiling(const Q& base) {
    Int num = base.numerator(), den = base.denominator();
    unsigned long long k = 0;
    Int pow2 = 1;
    while (num * pow2 < den) {
        pow2 <<= 1;
        ++k;
        if (k > 4096) throw PreconditionError("bound base absurdly small");
    }
    return k;
}

}  // namespace

GuaranteeBound clamped_pow(const Q& base, unsigned long long e, const Q& floor_q,
                           const std::string& formula) {
    if (base <= Q(0)) throw PreconditionError("clamped_pow: nonpositive base");
    GuaranteeBound out;
    out.formula = formula;
    if (base >= Q(1)) {
        out.value = Q(1);  // densities never claim more than 1
        return out;
    }
    if (e <= 64) {
        out.value = pow_q(base, e);
        if (out.value < floor_q) {
            out.value = floor_q;
            out.below_floor = true;
        }
        return out;
    }
    unsigned long long k = inverse_log2_ceiling(base);
    // base^e >= 2^(-k e); keep the exponent finite under saturation.
    unsigned long long j;
    if (k != 0 && e > std::numeric_limits<unsigned long long>::max() / k)
        j = std::numeric_limits<unsigned long long>::max();
    else
        j = k * e;
    // floor_q is 2^-f for the default floor; compare via j against the bit
    // length of floor's denominator to avoid constructing 2^j.
    unsigned long long floor_bits = inverse_log2_ceiling(floor_q);
    if (j >= floor_bits) {
        out.value = floor_q;
        out.below_floor = true;
        return out;
    }
    out.value = Q(Int(1), Int(1) << static_cast<unsigned>(j));
    out.dyadic_rounded = true;
    if (out.value < floor_q) {
        out.value = floor_q;
        out.below_floor = true;
    }
    return out;
}

GuaranteeBound combine_bounds(const GuaranteeBound& a, const GuaranteeBound& b,
                              const Q& floor_q) {
    GuaranteeBound out;
    out.formula = a.formula + " * " + b.formula;
    out.below_floor = a.below_floor || b.below_floor;
    out.dyadic_rounded = a.dyadic_rounded || b.dyadic_rounded;
    out.value = a.value * b.value;
    if (out.value < floor_q) {
        out.value = floor_q;
        out.below_floor = true;
    }
    return out;
}

void ParamHierarchy::finalize(long long tree_order) {
    d = tree_order;
    m = ceil_ll(Q(Int(d), Int(h)));
    big_c = Q(2) + epsilon;
}

std::string ParamHierarchy::hierarchy_complaint() const {
    // Required chain: eps, 1/Delta >> p >> 1/h >> alpha >> kappa >> 1/L >> gamma >> 1/d.
    // Desk scale operationalizes each >> as a strict >.
    struct Link {
        const char* name;
        Q value;
    };
    std::vector<Link> chain = {
        {"min(epsilon, 1/delta_cap)", std::min(epsilon, Q(Int(1), Int(delta_cap)))},
        {"p", p},
        {"1/h", Q(Int(1), Int(h))},
        {"alpha", alpha},
        {"kappa", kappa},
        {"1/L", Q(Int(1), Int(L))},
        {"gamma", gamma},
        {"1/d", d > 0 ? Q(Int(1), Int(d)) : Q(0)},
    };
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        if (!(chain[i].value > chain[i + 1].value)) {
            return std::string("hierarchy violated: ") + chain[i].name + " (" +
                   to_string(chain[i].value) + ") is not greater than " + chain[i + 1].name +
                   " (" + to_string(chain[i + 1].value) + ")";
        }
    }
    return "";
}

}  // namespace treestab
