#pragma once

// Deterministic random data for law checks. A fixed seed gives a fully
// reproducible run on any platform (std:: distributions are not portable,
// so the generator is hand-rolled).

#include "micromorph/scalar.hpp"
#include "micromorph/series.hpp"
#include "micromorph/varset.hpp"

#include <cstdint>
#include <vector>

namespace micromorph {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    long range(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t s_;
};

inline Scalar random_small_rational(SplitMix64& rng, bool allow_i = false) {
    static const long nums[] = {1, -1, 2, -2, 3, -3, 1, -1};
    static const long dens[] = {1, 1, 2, 3, 1, 2, 4, 1};
    std::size_t k = rng.below(8);
    Scalar c = Scalar::of(nums[k], dens[k]);
    if (allow_i && rng.below(4) == 0)
        c = c * Scalar::i();
    return c;
}

// Random polynomial over the given variables: at most max_terms monomials of
// total degree between min_deg and max_deg, small rational coefficients.
inline FormalSeries random_series(SplitMix64& rng, const VarSetPtr& vars, int trunc,
                                  unsigned min_deg, unsigned max_deg, unsigned max_terms,
                                  bool allow_i = false) {
    FormalSeries s(vars, trunc);
    unsigned nterms = 1 + static_cast<unsigned>(rng.below(max_terms));
    for (unsigned t = 0; t < nterms; ++t) {
        unsigned deg = min_deg + static_cast<unsigned>(rng.below(max_deg - min_deg + 1));
        MultiIndex m(vars->size());
        for (unsigned d = 0; d < deg; ++d)
            m.e[rng.below(vars->size())] += 1;
        s.add_term(m, random_small_rational(rng, allow_i));
    }
    return s;
}

}  // namespace micromorph
