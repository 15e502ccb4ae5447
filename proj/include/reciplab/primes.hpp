// Split principal primes of Z[zeta_N]: seeded sampling (generator-first),
// congruence-constrained search beta = alpha mod p', conjugate families,
// exhaustive small-norm enumeration.
#pragma once

#include "reciplab/cyclotomic.hpp"
#include "reciplab/numeric.hpp"

#include <optional>
#include <set>
#include <vector>

namespace reciplab {

// A degree-one split prime of K = Q(zeta_N), carried by a generator.
// rational_norm is the (positive) residue characteristic, a prime = 1 mod N.
struct SplitPrime {
    AlgebraicInteger generator;
    Int rational_norm;
};

// Lexicographically greatest coordinate vector among the torsion multiples
// u * x. Fixes a generator per ideal-and-torsion orbit; e.g. 2+zeta for the
// orbit {2+zeta, -1+2zeta, -2-zeta, 1-2zeta} in Q(i).
AlgebraicInteger canonical_associate(const AlgebraicInteger& x);

// True iff |norm(x)| is a prime = 1 mod N.
bool generates_split_prime(const AlgebraicInteger& x);

// Wraps a generator after validation; the stored generator is canonicalized.
SplitPrime make_split_prime(const AlgebraicInteger& beta);

struct SampleConstraint {
    AlgebraicInteger alpha;
    Int modulus;  // the separating prime p'
};

// One split prime with norm <= norm_bound whose norm avoids `avoid`.
// Unconstrained: draws beta coordinate-wise from a box sized by norm_bound
// (stream is a pure function of rng state). Constrained: scans
// beta = alpha + modulus*k over k = 1, -1, 2, -2, ... and returns the first
// admissible hit, so the result is independent of the rng.
SplitPrime sample_split_prime(const FieldPtr& K, const Int& norm_bound, const std::set<Int>& avoid,
                              SeededRng& rng, const std::optional<SampleConstraint>& constraint = std::nullopt);

// Canonical generators [sigma(beta)] over the Galois group: the phi(N)
// pairwise non-associate primes above p.
std::vector<AlgebraicInteger> conjugate_primes(const SplitPrime& r);

// Every split prime of norm <= bound (one canonical generator per ideal),
// sorted by (norm, coordinates). Box enumeration; intended for small bounds.
std::vector<SplitPrime> enumerate_split_primes(const FieldPtr& K, const Int& bound);

}  // namespace reciplab
