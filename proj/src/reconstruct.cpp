#include "reciplab/reconstruct.hpp"

#include "reciplab/fqpoly.hpp"
#include "reciplab/primes.hpp"
#include "reciplab/residue.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace reciplab {

namespace {

// odometer over [lo, hi]^d, least-significant first
bool next_tuple(std::vector<long>& m, long lo, long hi) {
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] < hi) {
            ++m[i];
            for (size_t j = 0; j < i; ++j) m[j] = lo;
            return true;
        }
    }
    return false;
}

AlgebraicInteger poly_eval(const std::vector<AlgebraicInteger>& f, const AlgebraicInteger& x) {
    AlgebraicInteger acc = f.back();
    for (size_t i = f.size() - 1; i-- > 0;) acc = acc * x + f[i];
    return acc;
}

// quotient of f by (X - root) when the division is exact
std::optional<std::vector<AlgebraicInteger>> divide_linear(const std::vector<AlgebraicInteger>& f,
                                                           const AlgebraicInteger& root) {
    std::vector<AlgebraicInteger> q(f.size() - 1, root.field()->zero());
    AlgebraicInteger carry = f.back();
    for (size_t i = f.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = f[i] + root * carry;
    }
    if (!carry.is_zero()) return std::nullopt;
    return q;
}

bool is_power_of(Int v, const Int& p) {
    if (v < 0) v = -v;
    if (v == 0) return false;
    while (v % p == 0) v /= p;
    return v == 1;
}

// next prime q = 1 mod N with q >= lo, or 0 when the scan range is exhausted
u64 next_site_prime(unsigned N, u64 lo) {
    auto qs = primes_in_class(N, 1 % N, lo, 20000000, 1);
    return qs.empty() ? 0 : qs[0];
}

unsigned torsion_order_of(const FieldPtr& L, unsigned exponent) {
    const unsigned W = L->torsion_order();
    return W / std::gcd(W, exponent);
}

}  // namespace

MonomialDecomposition recover_exponent_tuple(const FieldElement& gamma, const AlgebraicInteger& beta, long bound) {
    if (bound < 0) throw ConfigError("recover: bound must be nonnegative");
    if (gamma.is_zero()) throw DomainError("recover: gamma must be nonzero");
    if (!generates_split_prime(beta)) throw DomainError("recover: beta must generate a split prime");
    const FieldPtr& L = gamma.field();
    const FieldPtr& K = beta.field();
    if (L->conductor() % K->conductor() != 0) throw DomainError("recover: value field does not contain K");

    Int p = beta.norm();
    if (p < 0) p = -p;
    {
        Rat ng = gamma.norm();
        Int num = ng.get_num(), den = ng.get_den();
        if (num < 0) num = -num;
        bool ok = (num == 1 || is_power_of(num, p)) && (den == 1 || is_power_of(den, p));
        if (!ok) throw NotFoundError("recover: |norm(gamma)| is not a power of norm(beta)");
    }

    const auto& residues = K->galois_residues();
    const size_t d = residues.size();
    const unsigned W = L->torsion_order();

    std::vector<AlgebraicInteger> conj;
    conj.reserve(d);
    for (unsigned a : residues) conj.push_back(embed(beta.galois(K->automorphism(a)), L));

    // clear denominators so gamma reduces at sites
    Int den(1);
    for (const Rat& c : gamma.coords()) den = lcm(den, c.get_den());
    AlgebraicInteger A = to_algebraic_integer(gamma * to_field_element(L->from_int(den)));

    // two modular filter sites avoiding p and den
    std::vector<ReductionSite> sites;
    for (u64 lo = 100003; sites.size() < 2;) {
        u64 q = next_site_prime(L->conductor(), lo);
        if (q == 0) throw NotFoundError("recover: ran out of filter sites");
        lo = q + 1;
        if (mpz_divisible_ui_p(p.get_mpz_t(), q) || mpz_divisible_ui_p(den.get_mpz_t(), q)) continue;
        sites.push_back(make_site(L->conductor(), q));
    }

    // residual^W = 1, so gamma^W = monomial^W must hold at every site
    struct Table {
        u64 q;
        u64 target;                        // (gamma reduced)^W
        std::vector<std::vector<u64>> pw;  // pw[j][e+bound] = (u_j^W)^e
    };
    std::vector<Table> tabs;
    for (const ReductionSite& site : sites) {
        Table tb;
        tb.q = site.q;
        u64 v = mul_mod(reduce(A, site), inv_mod(mpz_fdiv_ui(den.get_mpz_t(), site.q), site.q), site.q);
        tb.target = pow_mod(v, W, site.q);
        for (size_t j = 0; j < d; ++j) {
            u64 bw = pow_mod(reduce(conj[j], site), W, site.q);
            u64 ibw = inv_mod(bw, site.q);
            std::vector<u64> row(2 * bound + 1);
            row[bound] = 1;
            for (long e = 1; e <= bound; ++e) {
                row[bound + e] = mul_mod(row[bound + e - 1], bw, tb.q);
                row[bound - e] = mul_mod(row[bound - e + 1], ibw, tb.q);
            }
            tb.pw.push_back(std::move(row));
        }
        tabs.push_back(std::move(tb));
    }

    std::optional<MonomialDecomposition> found;
    std::vector<long> m(d, -bound);
    do {
        bool pass = true;
        for (const Table& tb : tabs) {
            u64 prod = 1;
            for (size_t j = 0; j < d; ++j) prod = mul_mod(prod, tb.pw[j][m[j] + bound], tb.q);
            if (prod != tb.target) {
                pass = false;
                break;
            }
        }
        if (!pass) continue;
        FieldElement mono = embed(conjugates_product(beta, ExponentTuple{m}), L);
        FieldElement rho = gamma * invert(mono);
        if (!is_root_of_unity(rho)) continue;
        if (found) throw Error("recover: multiple monomial decompositions (conjugates dependent?)");
        unsigned e = *torsion_exponent(rho);
        found = MonomialDecomposition{ExponentTuple{m}, L->root_of_unity(e), torsion_order_of(L, e)};
    } while (next_tuple(m, -bound, bound));

    if (!found) throw NotFoundError("recover: no exponent tuple within bound");
    return *found;
}

std::vector<Int> separating_difference_norms(const AlgebraicInteger& alpha, long bound) {
    if (bound < 0) throw ConfigError("difference norms: bound must be nonnegative");
    if (!generates_split_prime(alpha)) throw DomainError("difference norms: alpha must generate a split prime");
    const FieldPtr& K = alpha.field();
    const auto& residues = K->galois_residues();
    const size_t d = residues.size();
    std::vector<AlgebraicInteger> conj;
    conj.reserve(d);
    for (unsigned a : residues) conj.push_back(alpha.galois(K->automorphism(a)));

    std::set<Int> out;
    std::vector<long> m(d, -bound);
    do {
        // skip zero; take one representative of each {m, -m} pair
        size_t first = 0;
        while (first < d && m[first] == 0) ++first;
        if (first == d || m[first] < 0) continue;
        AlgebraicInteger pos = K->one(), neg = K->one();
        for (size_t j = 0; j < d; ++j) {
            if (m[j] > 0) pos = pos * conj[j].pow(static_cast<unsigned long>(m[j]));
            if (m[j] < 0) neg = neg * conj[j].pow(static_cast<unsigned long>(-m[j]));
        }
        Int nn = (pos - neg).norm();
        if (nn < 0) nn = -nn;
        if (nn == 0) throw DomainError("difference norms: conjugates are multiplicatively dependent");
        out.insert(nn);
    } while (next_tuple(m, -bound, bound));
    return {out.begin(), out.end()};
}

Int select_separating_prime(const AlgebraicInteger& alpha, long N_b, const std::set<Int>& forbidden) {
    if (N_b < 0) throw ConfigError("separating prime: bound must be nonnegative");
    Int pnorm = alpha.norm();
    if (pnorm < 0) pnorm = -pnorm;
    // distinct tuples with entries bounded by N_b differ by a tuple bounded by
    // 2*N_b, so the screen must cover the doubled range
    std::vector<Int> diffs = separating_difference_norms(alpha, 2 * N_b);

    Int c(1);
    while (true) {
        mpz_nextprime(c.get_mpz_t(), c.get_mpz_t());
        if (c > 1000000) throw NotFoundError("separating prime: search budget exhausted");
        if (forbidden.count(c) != 0) continue;
        if (pnorm % c == 0) continue;
        bool ok = true;
        for (const Int& dnorm : diffs)
            if (dnorm % c == 0) {
                ok = false;
                break;
            }
        if (ok) return c;
    }
}

namespace {

// one canonical generator of some prime of norm p, by box search
AlgebraicInteger prime_generator_above(const FieldPtr& K, const Int& p) {
    const size_t d = K->degree();
    double radius = std::pow(p.get_d(), 1.0 / static_cast<double>(d)) * (d <= 2 ? 2.0 : 3.0) + 2.0;
    long R = static_cast<long>(radius);
    std::vector<long> c(d, -R);
    do {
        bool zero = std::all_of(c.begin(), c.end(), [](long v) { return v == 0; });
        if (zero) continue;
        std::vector<Int> coords(c.begin(), c.end());
        AlgebraicInteger x = K->element(std::move(coords));
        Int nn = x.norm();
        if (nn < 0) nn = -nn;
        if (nn == p) return canonical_associate(x);
    } while (next_tuple(c, -R, R));
    throw DomainError("no degree-one prime of norm " + p.get_str() + " found (residue degree > 1?)");
}

}  // namespace

bool are_multiplicatively_independent(const std::vector<AlgebraicInteger>& xs) {
    if (xs.empty()) return true;
    const FieldPtr& K = xs.front().field();
    for (const AlgebraicInteger& x : xs) {
        if (x.is_zero() || is_unit(x)) throw DomainError("independence: inputs must be nonzero non-units");
        if (x.field()->conductor() != K->conductor()) throw DomainError("independence: mixed fields");
    }

    std::set<Int> rational;
    for (const AlgebraicInteger& x : xs) {
        Int nn = x.norm();
        if (nn < 0) nn = -nn;
        for (const Int& p : prime_factors(nn)) rational.insert(p);
    }

    // all prime ideals above the relevant rational primes, one generator each
    std::vector<AlgebraicInteger> gens;
    for (const Int& p : rational) {
        AlgebraicInteger g = prime_generator_above(K, p);
        for (const AlgebraicInteger& cg : conjugate_primes(SplitPrime{g, p})) {
            bool known = false;
            for (const AlgebraicInteger& h : gens) {
                auto r = try_divide_exact(cg, h);
                if (r && is_unit(*r)) known = true;
            }
            if (!known) gens.push_back(cg);
        }
    }

    // valuation vectors by exact division
    std::vector<std::vector<Rat>> rows;
    for (const AlgebraicInteger& x : xs) {
        std::vector<Rat> row;
        AlgebraicInteger rem = x;
        for (const AlgebraicInteger& g : gens) {
            long v = 0;
            while (true) {
                auto qo = try_divide_exact(rem, g);
                if (!qo) break;
                rem = *qo;
                ++v;
            }
            row.push_back(Rat(v));
        }
        if (!is_unit(rem)) throw DomainError("independence: a norm factor has residue degree > 1");
        rows.push_back(std::move(row));
    }

    // rank over the rationals
    size_t rank = 0;
    const size_t cols = gens.size();
    for (size_t col = 0; col < cols && rank < rows.size(); ++col) {
        size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][col] == 0) continue;
            Rat f = rows[r][col] / rows[rank][col];
            for (size_t cc = col; cc < cols; ++cc) rows[r][cc] -= f * rows[rank][cc];
        }
        ++rank;
    }
    return rank == xs.size();
}

MatchResult match_multiplicities(const SplitPrime& alpha, const SplitPrime& beta, const Int& p_prime,
                                 const std::vector<ExponentTuple>& tuples_a,
                                 const std::vector<ExponentTuple>& tuples_b) {
    if (p_prime <= 1 || !is_prime_int(p_prime)) throw ConfigError("matching: p' must be prime");
    const FieldPtr& K = alpha.generator.field();
    if (K->conductor() != beta.generator.field()->conductor()) throw DomainError("matching: mixed fields");

    MatchResult res;
    res.congruent_pair = true;
    {
        AlgebraicInteger diff = beta.generator - alpha.generator;
        for (const Int& c : diff.coords())
            if (c % p_prime != 0) res.congruent_pair = false;
    }
    if (tuples_a.size() != tuples_b.size()) return res;

    long shift = 0;
    for (const auto& list : {tuples_a, tuples_b})
        for (const ExponentTuple& t : list)
            for (long e : t.m) shift = std::max(shift, std::abs(e));

    auto key = [&](const ExponentTuple& t) {
        ExponentTuple s = t;
        for (long& e : s.m) e += shift;
        AlgebraicInteger mono = conjugates_product_integral(alpha.generator, s);
        std::vector<Int> kk;
        kk.reserve(mono.coords().size());
        for (const Int& c : mono.coords()) kk.push_back(((c % p_prime) + p_prime) % p_prime);
        return kk;
    };

    std::map<std::vector<Int>, std::vector<size_t>> pool;
    for (size_t j = 0; j < tuples_b.size(); ++j) pool[key(tuples_b[j])].push_back(j);
    res.pairing.assign(tuples_a.size(), static_cast<size_t>(-1));
    for (size_t i = 0; i < tuples_a.size(); ++i) {
        auto it = pool.find(key(tuples_a[i]));
        if (it == pool.end() || it->second.empty()) {
            res.counterexample = i;
            return res;
        }
        res.pairing[i] = it->second.back();
        it->second.pop_back();
    }
    res.matched = true;
    return res;
}

namespace {

RecordDecomposition decompose_record(const DatasetRecord& rec, const FieldPtr& K, const FieldPtr& L, long bound,
                                     unsigned n) {
    const auto& residues = K->galois_residues();
    const size_t d = residues.size();
    const unsigned W = L->torsion_order();

    std::vector<AlgebraicInteger> conj;
    conj.reserve(d);
    for (unsigned a : residues) conj.push_back(embed(rec.r.generator.galois(K->automorphism(a)), L));

    ReductionSite site{};
    for (u64 lo = 10007;;) {
        u64 q = next_site_prime(L->conductor(), lo);
        if (q == 0) throw NotFoundError("decompose: ran out of sites");
        lo = q + 1;
        if (rec.r.rational_norm == q) continue;
        site = make_site(L->conductor(), q);
        break;
    }
    const u64 q = site.q;

    SeededRng rng(q ^ 0x5bf03635u);
    fq::Poly fp;
    fp.reserve(rec.charpoly.size());
    for (const AlgebraicInteger& c : rec.charpoly) fp.push_back(reduce(c, site));
    auto reduced_roots = fq::roots_with_multiplicity(fp, q, rng);

    u64 tg = reduce(L->torsion_generator(), site);
    std::vector<std::vector<u64>> pw;
    for (size_t j = 0; j < d; ++j) {
        u64 u = reduce(conj[j], site);
        u64 iu = inv_mod(u, q);
        std::vector<u64> row(2 * bound + 1);
        row[bound] = 1;
        for (long e = 1; e <= bound; ++e) {
            row[bound + e] = mul_mod(row[bound + e - 1], u, q);
            row[bound - e] = mul_mod(row[bound - e + 1], iu, q);
        }
        pw.push_back(std::move(row));
    }

    // exact root candidates: torsion^e * prod_j sigma_j(beta)^{m_j}
    struct Candidate {
        AlgebraicInteger gamma;
        ExponentTuple tuple;
        unsigned e;
    };
    std::vector<Candidate> cands;
    for (const auto& [v, mult] : reduced_roots) {
        (void)mult;
        std::vector<long> m(d, -bound);
        do {
            u64 prod = 1;
            for (size_t j = 0; j < d; ++j) prod = mul_mod(prod, pw[j][m[j] + bound], q);
            u64 target = mul_mod(v, inv_mod(prod, q), q);
            u64 acc = 1;
            unsigned e = W;
            for (unsigned i = 0; i < W; ++i) {
                if (acc == target) {
                    e = i;
                    break;
                }
                acc = mul_mod(acc, tg, q);
            }
            if (e == W) continue;  // no torsion part makes this tuple reduce to v
            FieldElement mono = embed(conjugates_product(rec.r.generator, ExponentTuple{m}), L);
            FieldElement gammaF = to_field_element(L->root_of_unity(static_cast<long>(e))) * mono;
            if (!is_integral(gammaF)) continue;
            AlgebraicInteger gamma = to_algebraic_integer(gammaF);
            if (!poly_eval(rec.charpoly, gamma).is_zero()) continue;
            cands.push_back({std::move(gamma), ExponentTuple{m}, e});
        } while (next_tuple(m, -bound, bound));
    }

    RecordDecomposition out;
    std::vector<AlgebraicInteger> remaining = rec.charpoly;
    for (const Candidate& c : cands) {
        while (remaining.size() > 1) {
            auto quot = divide_linear(remaining, c.gamma);
            if (!quot) break;
            remaining = std::move(*quot);
            out.roots.push_back({c.tuple, L->root_of_unity(static_cast<long>(c.e)), torsion_order_of(L, c.e)});
        }
    }
    if (remaining.size() != 1 || out.roots.size() != n)
        throw NotFoundError("decompose: f_r does not split into monomial roots within the bound (record norm " +
                            rec.r.rational_norm.get_str() + ")");
    return out;
}

long derive_bound(const CompatibleSystemDataset& ds) {
    long bound = 1;
    for (const DatasetRecord& rec : ds.records) {
        Int h(1);
        for (const AlgebraicInteger& c : rec.charpoly)
            for (const Int& v : c.coords()) {
                Int a = v < 0 ? Int(-v) : v;
                if (a > h) h = a;
            }
        double lh = std::log(h.get_d());
        double lp = std::log(rec.r.rational_norm.get_d());
        long b = 2 * static_cast<long>(std::ceil(lh / lp));
        bound = std::max(bound, b);
    }
    return bound;
}

struct FactorSpec {
    size_t prime_index;  // into the candidate prime list
    u64 k;
};

struct Candidate {
    std::vector<FactorSpec> factors;  // 0..2 entries
    unsigned special_j = 0;           // 0 = absent
    u64 order = 1;
    std::vector<unsigned> values;  // per record: torsion exponent of the value
};

}  // namespace

DatasetTuples decompose_dataset(const CompatibleSystemDataset& ds, long bound) {
    VerifyReport vr = verify_compatibility(ds, nullptr, 0, 0);
    if (!vr.structural_ok) {
        std::ostringstream os;
        os << "dataset fails structural verification:";
        for (size_t i = 0; i < vr.structural_failures.size() && i < 3; ++i) os << ' ' << vr.structural_failures[i];
        throw DataError(os.str());
    }
    if (ds.n == 0 || ds.records.empty()) throw ConfigError("decompose: empty system");

    const FieldPtr K = ds.K;
    const FieldPtr L = ds.L;
    const size_t R = ds.records.size();

    DatasetTuples out;

    // (1) per-record factorization through the monomial ansatz
    const bool auto_bound = bound <= 0;
    if (auto_bound) bound = derive_bound(ds);
    for (int attempt = 0;; ++attempt) {
        try {
            out.per_record.clear();
            out.per_record.reserve(R);
            for (const DatasetRecord& rec : ds.records)
                out.per_record.push_back(decompose_record(rec, K, L, bound, ds.n));
            break;
        } catch (const NotFoundError&) {
            if (!auto_bound || attempt >= 1) throw;
            bound *= 2;  // data-driven bound was too tight; widen once
        }
    }
    out.bound_used = bound;

    // (2) the tuple multiset must not depend on the record
    auto sorted_tuples = [](const RecordDecomposition& rd) {
        std::vector<ExponentTuple> ts;
        ts.reserve(rd.roots.size());
        for (const MonomialDecomposition& md : rd.roots) ts.push_back(md.tuple);
        std::sort(ts.begin(), ts.end());
        return ts;
    };
    out.tuples = sorted_tuples(out.per_record[0]);
    for (size_t r = 1; r < R; ++r)
        if (sorted_tuples(out.per_record[r]) != out.tuples)
            throw DataError("not abelian-compatible: record " + std::to_string(r) + " (norm " +
                            ds.records[r].r.rational_norm.get_str() + ") has a different exponent-tuple multiset");

    // separating-prime certificate for the multiplicity claim
    long maxent = 0;
    for (const ExponentTuple& t : out.tuples)
        for (long e : t.m) maxent = std::max(maxent, std::abs(e));
    out.separating_prime = select_separating_prime(ds.records[0].r.generator, maxent, {});
    for (size_t r = 1; r < R; ++r) {
        MatchResult mr = match_multiplicities(ds.records[0].r, ds.records[r].r, out.separating_prime, out.tuples,
                                              sorted_tuples(out.per_record[r]));
        if (!mr.matched)
            throw DataError("not abelian-compatible: separating-prime matching failed at record " + std::to_string(r));
    }
    return out;
}

RecoveredSystem reconstruct_system(const CompatibleSystemDataset& ds, const ReconstructConfig& config) {
    if (ds.records.size() < config.min_records)
        throw ConfigError("reconstruct: need at least " + std::to_string(config.min_records) + " records");

    const FieldPtr K = ds.K;
    const FieldPtr L = ds.L;
    const unsigned W = L->torsion_order();
    const size_t R = ds.records.size();

    RecoveredSystem out;
    {
        DatasetTuples dt = decompose_dataset(ds, config.bound);
        out.tuples = std::move(dt.tuples);
        out.per_record = std::move(dt.per_record);
        out.separating_prime = dt.separating_prime;
        out.bound_used = dt.bound_used;
    }
    {
        // a congruent companion prime demonstrates the constrained-pair step
        SeededRng rng(config.seed);
        Int big = out.separating_prime * 2000000;
        Int cap;
        mpz_pow_ui(cap.get_mpz_t(), big.get_mpz_t(), static_cast<unsigned long>(K->degree()));
        try {
            SplitPrime companion = sample_split_prime(K, cap, {}, rng,
                                                      SampleConstraint{ds.records[0].r.generator, out.separating_prime});
            MatchResult mr =
                match_multiplicities(ds.records[0].r, companion, out.separating_prime, out.tuples, out.tuples);
            std::ostringstream os;
            os << "constrained pair: companion prime of norm " << companion.rational_norm
               << (mr.congruent_pair && mr.matched ? " matches" : " FAILS");
            out.notes.push_back(os.str());
        } catch (const NotFoundError&) {
            out.notes.push_back("constrained pair: no companion prime within budget");
        }
    }

    // (3) group roots by tuple; collect residual exponents per record
    std::map<ExponentTuple, size_t> group_count;
    for (const ExponentTuple& t : out.tuples) ++group_count[t];
    struct Group {
        ExponentTuple tuple;
        size_t count;
        std::vector<std::vector<unsigned>> residuals;  // per record, sorted exponents
    };
    std::vector<Group> groups;
    for (const auto& [t, cnt] : group_count) groups.push_back({t, cnt, {}});
    for (Group& g : groups) {
        // the infinity type alone must send units to roots of unity
        for (const AlgebraicInteger& u : K->unit_basis())
            if (!is_root_of_unity(embed(conjugates_product(u, g.tuple), L)))
                throw DataError("recovered infinity type fails the unit condition");
        g.residuals.assign(R, {});
        for (size_t r = 0; r < R; ++r) {
            for (const MonomialDecomposition& md : out.per_record[r].roots)
                if (md.tuple == g.tuple) g.residuals[r].push_back(*torsion_exponent(to_field_element(md.residual)));
            std::sort(g.residuals[r].begin(), g.residuals[r].end());
        }
    }

    // (4) candidate finite parts over the configured modulus primes
    std::vector<SplitPrime> cand_primes =
        config.modulus_candidates ? *config.modulus_candidates : enumerate_split_primes(K, config.modulus_norm_bound);
    {
        std::set<Int> record_norms;
        for (const DatasetRecord& rec : ds.records) record_norms.insert(rec.r.rational_norm);
        std::vector<SplitPrime> kept;
        for (SplitPrime& sp : cand_primes) {
            if (record_norms.count(sp.rational_norm)) {
                out.notes.push_back("modulus candidate of norm " + sp.rational_norm.get_str() +
                                    " dropped (collides with a record)");
                continue;
            }
            kept.push_back(std::move(sp));
        }
        cand_primes = std::move(kept);
    }

    const bool allow_special = K->conductor() == 4;
    const AlgebraicInteger tgK = K->torsion_generator();

    // dlog caches: one per candidate prime, for every record and for zeta_K
    struct PrimeCache {
        u64 p, g0, t;
        u64 d_tg;                // dlog of the torsion generator
        std::vector<u64> d_rec;  // dlog of each record generator
    };
    std::vector<PrimeCache> caches;
    for (const SplitPrime& sp : cand_primes) {
        PrimeCache pc;
        pc.p = sp.rational_norm.get_ui();
        pc.g0 = primitive_root(pc.p);
        pc.t = std::gcd(pc.p - 1, static_cast<u64>(W));
        ReductionSite site = make_site(K->conductor(), pc.p, residue_zeta_image(sp));
        pc.d_tg = discrete_log(pc.g0, reduce(tgK, site), pc.p);
        pc.d_rec.reserve(R);
        for (const DatasetRecord& rec : ds.records) pc.d_rec.push_back(discrete_log(pc.g0, reduce(rec.r.generator, site), pc.p));
        caches.push_back(std::move(pc));
    }
    std::vector<unsigned> special_rec;
    unsigned special_tg = 0;
    if (allow_special) {
        special_tg = special_two_exponent(tgK);
        special_rec.reserve(R);
        for (const DatasetRecord& rec : ds.records) special_rec.push_back(special_two_exponent(rec.r.generator));
    }

    auto factor_value = [&](const PrimeCache& pc, u64 k, u64 dlog) -> unsigned {
        return static_cast<unsigned>((W / pc.t) * ((k * dlog) % pc.t) % W);
    };
    auto special_value = [&](unsigned j, unsigned jx) -> unsigned { return (W / 4) * ((j * jx) % 4) % W; };

    // enumerate candidates: <= 2 factor primes, optional two-power part
    std::vector<Candidate> cands;
    auto push_candidate = [&](std::vector<FactorSpec> fs, unsigned j) {
        Candidate c;
        c.factors = std::move(fs);
        c.special_j = j;
        c.order = 1;
        for (const FactorSpec& f : c.factors) {
            u64 t = caches[f.prime_index].t;
            c.order = std::lcm(c.order, t / std::gcd(t, f.k));
        }
        if (j != 0) c.order = std::lcm(c.order, static_cast<u64>(4 / std::gcd(4u, j)));
        if (c.order > config.finite_order_bound) return;
        c.values.reserve(R);
        for (size_t r = 0; r < R; ++r) {
            unsigned v = 0;
            for (const FactorSpec& f : c.factors)
                v = (v + factor_value(caches[f.prime_index], f.k, caches[f.prime_index].d_rec[r])) % W;
            if (j != 0) v = (v + special_value(j, special_rec[r])) % W;
            c.values.push_back(v);
        }
        cands.push_back(std::move(c));
    };
    const unsigned max_j = allow_special ? 3 : 0;
    for (unsigned j = 0; j <= max_j; ++j) {
        push_candidate({}, j);
        for (size_t a = 0; a < caches.size(); ++a) {
            for (u64 ka = 1; ka < caches[a].t; ++ka) {
                push_candidate({{a, ka}}, j);
                for (size_t b = a + 1; b < caches.size(); ++b)
                    for (u64 kb = 1; kb < caches[b].t; ++kb) push_candidate({{a, ka}, {b, kb}}, j);
            }
        }
    }

    // (5) per group: keep candidates that satisfy the torsion-unit identity for
    // this infinity type and whose value is an observed residual at every record
    struct GroupChoice {
        std::vector<size_t> cand_index;                  // admissible candidates
        std::vector<std::vector<size_t>> solutions;      // multisets of positions into cand_index
    };
    std::vector<GroupChoice> choices(groups.size());
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        const Group& g = groups[gi];
        unsigned e0 = *torsion_exponent(embed(conjugates_product(tgK, g.tuple), L));
        for (size_t ci = 0; ci < cands.size(); ++ci) {
            const Candidate& c = cands[ci];
            unsigned etg = e0;
            for (const FactorSpec& f : c.factors)
                etg = (etg + factor_value(caches[f.prime_index], f.k, caches[f.prime_index].d_tg)) % W;
            if (c.special_j != 0) etg = (etg + special_value(c.special_j, special_tg)) % W;
            if (etg != 0) continue;  // fails on the torsion generator
            bool admissible = true;
            for (size_t r = 0; r < R && admissible; ++r)
                admissible = std::binary_search(g.residuals[r].begin(), g.residuals[r].end(), c.values[r]);
            if (admissible) choices[gi].cand_index.push_back(ci);
        }

        // exact cover: multiset of `count` candidates reproducing every record's residuals
        std::vector<std::vector<unsigned>> remaining(R, std::vector<unsigned>(W, 0));
        for (size_t r = 0; r < R; ++r)
            for (unsigned e : g.residuals[r]) ++remaining[r][e];
        std::vector<size_t> picked;
        std::function<void(size_t)> search = [&](size_t from) {
            if (choices[gi].solutions.size() >= config.max_solutions) return;
            if (picked.size() == g.count) {
                choices[gi].solutions.push_back(picked);
                return;
            }
            for (size_t pos = from; pos < choices[gi].cand_index.size(); ++pos) {
                const Candidate& c = cands[choices[gi].cand_index[pos]];
                bool fits = true;
                for (size_t r = 0; r < R; ++r)
                    if (remaining[r][c.values[r]] == 0) {
                        fits = false;
                        break;
                    }
                if (!fits) continue;
                for (size_t r = 0; r < R; ++r) --remaining[r][c.values[r]];
                picked.push_back(pos);
                search(pos);
                picked.pop_back();
                for (size_t r = 0; r < R; ++r) ++remaining[r][c.values[r]];
            }
        };
        search(0);
        if (choices[gi].solutions.empty())
            throw NotFoundError("finite part outside configured search space (infinity type " +
                                [&] {
                                    std::ostringstream os;
                                    os << '(';
                                    for (size_t i = 0; i < g.tuple.m.size(); ++i)
                                        os << (i ? "," : "") << g.tuple.m[i];
                                    os << ')';
                                    return os.str();
                                }() +
                                ")");
    }

    // (6) assemble solutions across groups
    auto build_character = [&](const Group& g, const Candidate& c) {
        std::vector<FactorCharacter> fcs;
        for (const FactorSpec& f : c.factors) {
            FactorCharacter fc;
            fc.prime = cand_primes[f.prime_index];
            fc.g = caches[f.prime_index].g0;
            fc.t = caches[f.prime_index].t;
            fc.k = f.k;
            fcs.push_back(std::move(fc));
        }
        std::optional<SpecialTwoPart> sp;
        if (c.special_j != 0) sp = SpecialTwoPart{c.special_j};
        return make_hecke_character(K, L, g.tuple, FiniteOrderCharacter(K, L, std::move(fcs), sp));
    };

    std::vector<std::vector<HeckeCharacter>> assembled;
    std::vector<size_t> pick(groups.size(), 0);
    while (true) {
        std::vector<HeckeCharacter> sol;
        bool valid = true;
        for (size_t gi = 0; gi < groups.size() && valid; ++gi) {
            const auto& sel = choices[gi].solutions[pick[gi]];
            for (size_t pos : sel) {
                HeckeCharacter chi = build_character(groups[gi], cands[choices[gi].cand_index[pos]]);
                if (!validate_character(chi).valid) valid = false;
                sol.push_back(std::move(chi));
            }
        }
        if (valid) {
            bool dup = false;
            for (const auto& prev : assembled) {
                bool same = prev.size() == sol.size();
                for (size_t i = 0; same && i < sol.size(); ++i) same = characters_equal(prev[i], sol[i]);
                if (same) dup = true;
            }
            if (!dup && assembled.size() < config.max_solutions) assembled.push_back(std::move(sol));
        }
        size_t gi = 0;
        while (gi < groups.size() && ++pick[gi] == choices[gi].solutions.size()) pick[gi++] = 0;
        if (gi == groups.size()) break;
    }
    if (assembled.empty()) throw NotFoundError("finite part outside configured search space (no valid assembly)");
    out.solutions = std::move(assembled);
    out.characters = out.solutions.front();
    if (out.solutions.size() > 1)
        out.notes.push_back("ambiguous reconstruction: " + std::to_string(out.solutions.size()) + " solutions");
    out.notes.push_back("separating prime " + out.separating_prime.get_str());
    out.notes.push_back("bound " + std::to_string(out.bound_used));
    return out;
}

}  // namespace reciplab
