// Residue-field side: reduction of cyclotomic integers at degree-one primes
// q = 1 mod N, discrete logarithms, power-residue tests, primitive roots.
#pragma once

#include "reciplab/cyclotomic.hpp"
#include "reciplab/numeric.hpp"

#include <vector>

namespace reciplab {

// A degree-one reduction site for conductor N: a rational prime q = 1 mod N
// together with the image omega of zeta_N in F_q^* (an element of exact
// order N). Reduction maps sum c_i zeta^i to sum c_i omega^i mod q.
struct ReductionSite {
    unsigned N = 0;
    u64 q = 0;
    u64 omega = 0;

    friend bool operator==(const ReductionSite&, const ReductionSite&) = default;
};

// Site at q with the canonical omega: the numerically smallest element of
// exact order N in F_q^*. Throws ConfigError unless q is prime, q = 1 mod N,
// and q does not divide N (automatic for q > N).
ReductionSite make_site(unsigned N, u64 q);
// Same prime, a chosen omega (validated to have exact order N).
ReductionSite make_site(unsigned N, u64 q, u64 omega);

// All images of zeta_N at q, i.e. all elements of exact order N, sorted.
std::vector<u64> zeta_images(unsigned N, u64 q);

u64 reduce(const AlgebraicInteger& x, const ReductionSite& site);

// Multiplicative order of x in F_q^*.
u64 multiplicative_order(u64 x, u64 q);

// Smallest primitive root mod prime q.
u64 primitive_root(u64 q);

// Baby-step giant-step in the cyclic group generated by base (order n) in
// F_q^*. Returns the least e >= 0 with base^e = value; NotFoundError if value
// is outside the subgroup.
u64 discrete_log_order(u64 base, u64 value, u64 n, u64 q);
// Base is expected to generate F_q^* (order q - 1).
u64 discrete_log(u64 base, u64 value, u64 q);

// True iff nonzero x mod q is an ell-th power in F_q^*.
bool is_lth_power_residue(u64 x, u64 ell, u64 q);

// Deterministic stream of primes q = r mod n with q in [lo, hi], ascending.
std::vector<u64> primes_in_class(u64 n, u64 r, u64 lo, u64 hi, size_t count);

}  // namespace reciplab
