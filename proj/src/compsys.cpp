#include "reciplab/compsys.hpp"

#include "reciplab/primes.hpp"
#include "reciplab/residue.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace reciplab {

namespace {

u64 fnv1a(const std::vector<u64>& xs) {
    u64 h = 1469598103934665603ULL;
    for (u64 v : xs)
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    return h;
}

}  // namespace

std::vector<AlgebraicInteger> monic_from_roots(const FieldPtr& L, const std::vector<FieldElement>& values) {
    const FieldElement one = to_field_element(L->one());
    const FieldElement zero = to_field_element(L->zero());
    std::vector<FieldElement> c{one};  // c[i] = coefficient of X^i
    for (const FieldElement& v : values) {
        std::vector<FieldElement> nx(c.size() + 1, zero);
        for (size_t i = 0; i < c.size(); ++i) {
            nx[i + 1] = nx[i + 1] + c[i];
            nx[i] = nx[i] - v * c[i];
        }
        c = std::move(nx);
    }
    std::vector<AlgebraicInteger> out;
    out.reserve(c.size());
    for (const FieldElement& coeff : c) {
        if (!is_integral(coeff)) throw DataError("charpoly coefficient is not an algebraic integer");
        out.push_back(to_algebraic_integer(coeff));
    }
    return out;
}

CompatibleSystemDataset generate_dataset(const std::vector<HeckeCharacter>& characters, size_t prime_budget,
                                         u64 seed, const Int& max_norm) {
    if (characters.empty()) throw ConfigError("generate: need at least one character");
    const FieldPtr& K = characters.front().K;
    const FieldPtr& L = characters.front().L;
    for (const HeckeCharacter& chi : characters) {
        if (chi.K->conductor() != K->conductor() || chi.L->conductor() != L->conductor())
            throw ConfigError("generate: characters must share base and coefficient fields");
        ValidationReport rep = validate_character(chi);
        if (!rep.valid) {
            std::ostringstream os;
            os << "generate: invalid character:";
            for (const std::string& f : rep.failures) os << ' ' << f << ';';
            throw ConfigError(os.str());
        }
    }

    CompatibleSystemDataset ds;
    ds.K = K;
    ds.L = L;
    ds.n = static_cast<unsigned>(characters.size());
    std::set<Int> support;
    for (const HeckeCharacter& chi : characters)
        for (const Int& p : chi.finite_part.support()) support.insert(p);
    ds.S.assign(support.begin(), support.end());

    SeededRng rng(seed);
    std::set<Int> avoid = support;  // records stay coprime to every modulus, norms distinct
    ds.records.reserve(prime_budget);
    for (size_t i = 0; i < prime_budget; ++i) {
        SplitPrime r = sample_split_prime(K, max_norm, avoid, rng);
        avoid.insert(r.rational_norm);
        std::vector<FieldElement> values;
        values.reserve(characters.size());
        for (const HeckeCharacter& chi : characters) values.push_back(evaluate_on_prime(chi, r));
        ds.records.push_back({std::move(r), monic_from_roots(L, values)});
    }
    return ds;
}

ReducedRepresentationTable reduce_dataset_at(const CompatibleSystemDataset& ds, const ReductionSite& site) {
    if (site.N != ds.L->conductor()) throw ConfigError("reduce: site conductor does not match L");
    for (const Int& p : ds.T_extra)
        if (p == site.q) throw ConfigError("reduce: site prime lies in the defect set");

    ReducedRepresentationTable table;
    table.site = site;
    table.entries.reserve(ds.records.size());
    SeededRng rng(site.q * 0x9e3779b97f4a7c15ULL + site.omega);
    for (const DatasetRecord& rec : ds.records) {
        RecordReduction rr;
        if (rec.r.rational_norm == site.q) {
            rr.skipped = true;
            table.entries.push_back(std::move(rr));
            continue;
        }
        fq::Poly f;
        f.reserve(rec.charpoly.size());
        for (const AlgebraicInteger& c : rec.charpoly) f.push_back(reduce(c, site));
        if (fq::trim(f).size() != ds.n + 1)
            throw DataError("reduce: reduced polynomial has wrong degree (corrupt record?)");
        auto rts = fq::roots_with_multiplicity(f, site.q, rng);
        size_t total = 0;
        for (const auto& [root, mult] : rts) total += mult;
        if (total != ds.n) throw DataError("reduce: polynomial does not split into linear factors at the site");
        for (const auto& [root, mult] : rts)
            for (unsigned j = 0; j < mult; ++j) rr.roots.push_back(root);
        std::sort(rr.roots.begin(), rr.roots.end());
        table.entries.push_back(std::move(rr));
    }
    return table;
}

VerifyReport verify_compatibility(const CompatibleSystemDataset& ds,
                                  const std::vector<HeckeCharacter>* candidates, size_t site_sample, u64 seed) {
    VerifyReport rep;
    auto fail = [&rep](std::string msg) {
        rep.structural_ok = false;
        rep.structural_failures.push_back(std::move(msg));
    };

    if (!ds.K || !ds.L) {
        fail("dataset is missing field data");
        return rep;
    }
    if (ds.L->conductor() % ds.K->conductor() != 0) fail("K does not embed in L");
    if (ds.n == 0) fail("system dimension n must be positive");
    for (size_t i = 1; i < ds.S.size(); ++i)
        if (!(ds.S[i - 1] < ds.S[i])) fail("S is not strictly increasing");
    for (const Int& p : ds.S)
        if (!is_prime_int(p)) fail("S contains a non-prime: " + p.get_str());
    for (const Int& p : ds.T_extra)
        if (!is_prime_int(p)) fail("T_extra contains a non-prime: " + p.get_str());

    std::set<Int> seen_norms;
    for (size_t i = 0; i < ds.records.size(); ++i) {
        const DatasetRecord& rec = ds.records[i];
        std::ostringstream tag;
        tag << "record " << i << " (norm " << rec.r.rational_norm << ")";
        if (!generates_split_prime(rec.r.generator)) {
            fail(tag.str() + ": generator does not cut out a degree-one prime");
            continue;
        }
        Int nrm = rec.r.generator.norm();
        if (nrm < 0) nrm = -nrm;
        if (nrm != rec.r.rational_norm) fail(tag.str() + ": stored norm disagrees with the generator");
        if (!(canonical_associate(rec.r.generator) == rec.r.generator))
            fail(tag.str() + ": generator is not in canonical form");
        if (!seen_norms.insert(rec.r.rational_norm).second) fail(tag.str() + ": duplicate norm");
        if (std::binary_search(ds.S.begin(), ds.S.end(), rec.r.rational_norm))
            fail(tag.str() + ": norm lies in the ramification set");
        if (rec.charpoly.size() != ds.n + 1) {
            fail(tag.str() + ": charpoly does not have n+1 coefficients");
            continue;
        }
        if (!rec.charpoly.back().is_one()) fail(tag.str() + ": charpoly is not monic");
    }

    if (candidates) {
        rep.candidates_checked = true;
        if (candidates->size() != ds.n) {
            fail("candidate character count does not match n");
            rep.exact_match_ok = false;
        } else {
            for (const HeckeCharacter& chi : *candidates)
                if (chi.K->conductor() != ds.K->conductor() || chi.L->conductor() != ds.L->conductor()) {
                    fail("candidate characters live over different fields than the dataset");
                    rep.exact_match_ok = false;
                }
        }
        if (rep.exact_match_ok) {
            for (size_t i = 0; i < ds.records.size(); ++i) {
                const DatasetRecord& rec = ds.records[i];
                bool match = rec.charpoly.size() == ds.n + 1;
                if (match) {
                    try {
                        std::vector<FieldElement> values;
                        values.reserve(candidates->size());
                        for (const HeckeCharacter& chi : *candidates) values.push_back(evaluate_on_prime(chi, rec.r));
                        std::vector<AlgebraicInteger> expect = monic_from_roots(ds.L, values);
                        for (size_t c = 0; c < expect.size() && match; ++c)
                            if (!(expect[c] == rec.charpoly[c])) match = false;
                    } catch (const Error&) {
                        match = false;  // e.g. record not coprime to a candidate modulus
                    }
                }
                if (!match) {
                    rep.exact_match_ok = false;
                    rep.mismatched_records.push_back(i);
                }
            }
        }
    }

    if (site_sample > 0 && !ds.records.empty()) {
        SeededRng rng(seed);
        const unsigned Np = ds.L->conductor();
        std::set<u64> chosen;
        size_t guard = 0;
        while (chosen.size() < site_sample && guard < 200 * site_sample) {
            ++guard;
            u64 lo = rng.in_range(10000, 900000);
            std::vector<u64> qs = primes_in_class(Np, 1 % Np, lo, 1000000, 1);
            if (qs.empty()) continue;
            u64 q = qs[0];
            bool excluded = false;
            for (const Int& p : ds.S)
                if (p == q) excluded = true;
            for (const Int& p : ds.T_extra)
                if (p == q) excluded = true;
            if (!excluded) chosen.insert(q);
        }
        for (u64 q : chosen) {
            ReductionSite site = make_site(Np, q);
            SiteFingerprint sf;
            sf.q = q;
            sf.omega = site.omega;
            sf.skipped.reserve(ds.records.size());
            sf.record_hash.reserve(ds.records.size());
            for (const DatasetRecord& rec : ds.records) {
                if (rec.r.rational_norm == q) {
                    sf.skipped.push_back(true);
                    sf.record_hash.push_back(0);
                    continue;
                }
                std::vector<u64> res;
                res.reserve(rec.charpoly.size());
                for (const AlgebraicInteger& c : rec.charpoly) res.push_back(reduce(c, site));
                sf.skipped.push_back(false);
                sf.record_hash.push_back(fnv1a(res));
            }
            rep.site_fingerprints.push_back(std::move(sf));
        }
    }
    return rep;
}

}  // namespace reciplab
