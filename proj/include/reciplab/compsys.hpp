// Compatible-system datasets: for each sampled split prime r of K a monic
// degree-n polynomial f_r(X) over the coefficient field L whose roots are the
// character values. Generation, reduction at degree-one sites of L, and a
// verifier (structural checks, exact recomputation against candidate
// characters, seeded cross-site reduction fingerprints).
#pragma once

#include "reciplab/fqpoly.hpp"
#include "reciplab/hecke.hpp"

#include <optional>
#include <string>
#include <vector>

namespace reciplab {

struct DatasetRecord {
    SplitPrime r;
    std::vector<AlgebraicInteger> charpoly;  // n+1 coefficients in L, constant first, monic
};

struct CompatibleSystemDataset {
    FieldPtr K, L;
    unsigned n = 0;
    std::vector<Int> S;        // ramification set: rational primes under the moduli
    std::vector<Int> T_extra;  // extra defect primes (beyond all residue-degree>1 places of L)
    std::vector<DatasetRecord> records;
};

// prod_i (X - v_i) with integral coefficients; DataError if a coefficient is
// not an algebraic integer.
std::vector<AlgebraicInteger> monic_from_roots(const FieldPtr& L, const std::vector<FieldElement>& values);

// Samples prime_budget split primes of K (norm <= max_norm, distinct norms,
// coprime to every character support) and records f_r(X) = prod_i (X - chi_i(r)).
// All characters must be valid and share K and L.
CompatibleSystemDataset generate_dataset(const std::vector<HeckeCharacter>& characters, size_t prime_budget,
                                         u64 seed, const Int& max_norm);

struct RecordReduction {
    bool skipped = false;       // site characteristic equals the record's norm
    std::vector<u64> roots;     // n residue roots, sorted, multiplicity expanded
};

struct ReducedRepresentationTable {
    ReductionSite site;
    std::vector<RecordReduction> entries;  // aligned with ds.records
};

// Reduces every record at the site and splits into linear factors; a reduced
// polynomial that fails to split completely signals corruption (DataError).
ReducedRepresentationTable reduce_dataset_at(const CompatibleSystemDataset& ds, const ReductionSite& site);

struct SiteFingerprint {
    u64 q = 0, omega = 0;
    std::vector<bool> skipped;       // per record
    std::vector<u64> record_hash;    // per record: FNV-1a over reduced coefficients
};

struct VerifyReport {
    bool structural_ok = true;
    std::vector<std::string> structural_failures;
    bool candidates_checked = false;
    bool exact_match_ok = true;
    std::vector<size_t> mismatched_records;      // indices, when candidates are supplied
    std::vector<SiteFingerprint> site_fingerprints;
    bool ok() const { return structural_ok && (!candidates_checked || exact_match_ok); }
};

// Structural checks always run. With candidate characters every record is
// recomputed exactly. site_sample seeded random degree-one sites of L (q in
// [10^4, 10^6]) yield deterministic per-record reduction fingerprints; a
// corrupted coefficient changes them at every non-skipped site.
VerifyReport verify_compatibility(const CompatibleSystemDataset& ds,
                                  const std::vector<HeckeCharacter>* candidates, size_t site_sample, u64 seed);

}  // namespace reciplab
