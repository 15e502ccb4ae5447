// Dense univariate polynomial arithmetic over prime fields F_q (q < 2^63),
// enough to split the reduced characteristic polynomials: gcd, modular
// exponentiation, equal-degree splitting for linear factors.
#pragma once

#include "reciplab/numeric.hpp"

#include <utility>
#include <vector>

namespace reciplab::fq {

// Coefficients mod q, constant term first, no trailing zeros ("{}" is zero).
using Poly = std::vector<u64>;

Poly trim(Poly f);
bool is_zero(const Poly& f);
Poly add(const Poly& a, const Poly& b, u64 q);
Poly sub(const Poly& a, const Poly& b, u64 q);
Poly mul(const Poly& a, const Poly& b, u64 q);
Poly scale(const Poly& a, u64 c, u64 q);
Poly monic(const Poly& a, u64 q);
// Remainder of a by nonzero b.
Poly rem(Poly a, const Poly& b, u64 q);
// Quotient of a by nonzero b when division is exact; DomainError otherwise.
Poly div_exact(Poly a, const Poly& b, u64 q);
Poly gcd(Poly a, Poly b, u64 q);  // monic (or zero)
// base^e mod f.
Poly powmod(Poly base, const Int& e, const Poly& f, u64 q);
u64 eval(const Poly& f, u64 x, u64 q);

// Roots of f in F_q with multiplicities, sorted by root. Uses gcd with
// X^q - X plus randomized splitting; the rng only affects internal choices,
// never the result.
std::vector<std::pair<u64, unsigned>> roots_with_multiplicity(const Poly& f, u64 q, SeededRng& rng);

}  // namespace reciplab::fq
