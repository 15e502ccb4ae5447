// Desk-scale checkers for the splitting/subgroup behaviour of conjugate
// monomials in K*/(K*)^ell: residue-level splitting samples, span membership
// of Kummer classes, and covering arguments for unions of F_ell subspaces.
#pragma once

#include "reciplab/primes.hpp"

#include <string>
#include <vector>

namespace reciplab {

// Subspace of F_ell^dim held as a row-reduced basis.
class FlSubspace {
  public:
    // spanning_rows are reduced mod ell and need not be independent
    FlSubspace(u64 ell, size_t dim, const std::vector<std::vector<u64>>& spanning_rows);

    u64 ell() const { return ell_; }
    size_t dim() const { return dim_; }
    size_t rank() const { return rows_.size(); }
    bool proper() const { return rows_.size() < dim_; }
    bool contains(const std::vector<u64>& v) const;
    const std::vector<std::vector<u64>>& basis() const { return rows_; }

  private:
    u64 ell_;
    size_t dim_;
    std::vector<std::vector<u64>> rows_;  // reduced echelon form
    std::vector<size_t> pivots_;
};

// Image of a supported element in K*/(K*)^ell: exponents along the declared
// support primes, a torsion coordinate, and fundamental-unit coordinates.
// The torsion coordinate lives mod gcd(W, ell), so it is identically zero
// exactly when ell is coprime to the torsion order.
struct KummerClass {
    u64 ell = 0;
    std::vector<u64> valuations;   // per support prime, mod ell
    u64 torsion = 0;               // mod gcd(W, ell)
    std::vector<u64> unit_coords;  // per configured fundamental unit, mod ell

    std::vector<u64> flatten() const;  // valuations, torsion, unit coords
};

// The class of x over a declared support of pairwise non-associate split-prime
// generators. Valuations come from exact division; the leftover unit is
// decomposed over the field's torsion and unit basis by bounded search.
// DomainError: x has a prime factor outside the support, or its unit part
// falls outside the decomposition search box.
KummerClass kummer_class(const FieldElement& x, const std::vector<AlgebraicInteger>& support, u64 ell);

struct LemmaReport {
    size_t scanned = 0;  // split primes examined below the bound
    size_t samples = 0;  // qualifying: norm = 1 mod ell, every conj(r r') a residue
    std::vector<SplitPrime> violations;
    bool inconclusive = false;  // zero qualifying samples: raise the bound

    bool ok() const { return !inconclusive && violations.empty(); }
};

// Residue-level splitting sample: over split primes s of K with norm <= bound
// and norm = 1 mod ell, whenever every conjugate of r*r' is an ell-th power
// residue mod s, some monomial prod sigma(r)^{tuple_i} * prod sigma(r')^{t_j}
// must be one too. Violating s are listed; none are expected when the tuples
// come from one abelian-compatible system.
// Preconditions: 4 | N; ell prime, coprime to norm(r), norm(r'), and to
// p*(p^deg - 1) for every rational prime p in `ramified`.
LemmaReport lemma_splitting_check(const SplitPrime& r, const SplitPrime& rp, const ExponentTuple& tuple_i,
                                  const std::vector<ExponentTuple>& tuples_j, u64 ell, const Int& sample_bound,
                                  const std::vector<Int>& ramified = {});

struct CorollaryResult {
    bool found = false;
    size_t witness = 0;             // index into tuples_j
    std::vector<u64> coefficients;  // along galois_residues(): class = sum c * class(sigma(r r'))
    std::string note;
};

// Exact subgroup membership in K*/(K*)^ell: does some candidate monomial
// prod sigma(r)^{tuple_i} * prod sigma(r')^{tuples_j[j]} lie in the span of
// the classes of the conjugates of r*r'? Returns the first witness with
// expressing coefficients.
CorollaryResult corollary_subgroup_check(const SplitPrime& r, const SplitPrime& rp, const ExponentTuple& tuple_i,
                                         const std::vector<ExponentTuple>& tuples_j, u64 ell);

// A vector of F_ell^dim outside every listed proper subspace. Requires
// ell > #subspaces (k proper subspaces cover at most k * ell^(dim-1) points).
// Random draws first, then a deterministic sweep.
std::vector<u64> find_uncovered_vector(const std::vector<FlSubspace>& subspaces, SeededRng& rng);

}  // namespace reciplab
