// Recovering the characters behind a compatible-system dataset: every root of
// every f_r is written exactly as (root of unity) * monomial in the conjugates
// of the record's generator; the exponent tuples must form one multiset shared
// by all records (certified through a separating prime), and the residuals
// pin down finite-order characters by exact constraint satisfaction.
#pragma once

#include "reciplab/compsys.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace reciplab {

struct MonomialDecomposition {
    ExponentTuple tuple;        // aligned with K->galois_residues()
    AlgebraicInteger residual;  // root of unity in L
    unsigned m = 1;             // order of the residual; divides W(L)
};

// The unique tuple with |entries| <= bound such that
// gamma / prod_sigma sigma(beta)^{m_sigma} is a root of unity. beta must
// generate a split prime (so its conjugates are multiplicatively
// independent). NotFoundError when no tuple fits within the bound.
MonomialDecomposition recover_exponent_tuple(const FieldElement& gamma, const AlgebraicInteger& beta, long bound);

// Distinct |norm| values of prod_{m>0} sigma(alpha)^m - prod_{m<0} sigma(alpha)^{-m}
// over nonzero tuples with |m_sigma| <= bound (up to global sign).
std::vector<Int> separating_difference_norms(const AlgebraicInteger& alpha, long bound);

// Least prime not in `forbidden` and coprime to norm(alpha) and to every
// difference norm at bound 2*N_b, so that distinct tuples with entries
// bounded by N_b stay distinguishable mod p'.
Int select_separating_prime(const AlgebraicInteger& alpha, long N_b, const std::set<Int>& forbidden);

// Rational independence of valuation vectors over the degree-one primes
// dividing the norms. A family sharing an ideal up to units is reported
// dependent even when the unit has infinite order.
bool are_multiplicatively_independent(const std::vector<AlgebraicInteger>& xs);

struct MatchResult {
    bool matched = false;
    std::vector<size_t> pairing;           // pairing[i] = j into tuples_b
    std::optional<size_t> counterexample;  // first unmatched index into tuples_a
    bool congruent_pair = false;           // beta = alpha mod p'
};

// Pairs tuples_a[i] with tuples_b[j] whenever the (shifted) alpha-monomials
// agree coordinatewise mod p', consuming multiplicities. With p' separating
// at a bound covering all entries, the pairing is exactly tuple equality.
MatchResult match_multiplicities(const SplitPrime& alpha, const SplitPrime& beta, const Int& p_prime,
                                 const std::vector<ExponentTuple>& tuples_a,
                                 const std::vector<ExponentTuple>& tuples_b);

struct RecordDecomposition {
    std::vector<MonomialDecomposition> roots;  // n entries, multiplicity expanded
};

struct DatasetTuples {
    std::vector<ExponentTuple> tuples;  // the shared multiset, sorted, n entries
    std::vector<RecordDecomposition> per_record;
    Int separating_prime;
    long bound_used = 0;
};

// Factors every f_r through the monomial ansatz and certifies that the tuple
// multiset is the same for every record (sorted comparison plus a
// separating-prime matching certificate). bound <= 0 derives the search bound
// from the coefficient heights. This is the first stage of
// reconstruct_system, usable on its own when the finite parts are not needed.
DatasetTuples decompose_dataset(const CompatibleSystemDataset& ds, long bound = 0);

struct ReconstructConfig {
    long bound = 0;            // <= 0: derive from coefficient heights
    u64 finite_order_bound = 8;
    Int modulus_norm_bound = 40;  // candidate finite-part primes up to this norm
    std::optional<std::vector<SplitPrime>> modulus_candidates;
    u64 seed = 0;
    size_t min_records = 3;
    size_t max_solutions = 8;  // cap on reported ambiguous solutions
};

struct RecoveredSystem {
    std::vector<ExponentTuple> tuples;  // the shared multiset, sorted, n entries
    std::vector<RecordDecomposition> per_record;
    std::vector<HeckeCharacter> characters;               // first solution
    std::vector<std::vector<HeckeCharacter>> solutions;   // all solutions; [0] == characters
    Int separating_prime;
    long bound_used = 0;
    std::vector<std::string> notes;
};

// Full pipeline: factor every f_r through monomial decompositions, check the
// tuple multiset is record-independent (with a separating-prime certificate),
// then solve for finite parts over the configured modulus candidates.
// DataError: dataset structurally bad or not abelian-compatible.
// NotFoundError: finite part outside the configured search space.
RecoveredSystem reconstruct_system(const CompatibleSystemDataset& ds, const ReconstructConfig& config);

}  // namespace reciplab
