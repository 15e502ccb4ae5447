#include "reciplab/kummer.hpp"

#include "reciplab/hecke.hpp"
#include "reciplab/residue.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>

namespace reciplab {

namespace {

bool same_ideal(const AlgebraicInteger& a, const AlgebraicInteger& b) {
    auto q = try_divide_exact(a, b);
    return q && is_unit(*q);
}

u64 norm_mod(long v, u64 ell) {
    long r = v % static_cast<long>(ell);
    if (r < 0) r += static_cast<long>(ell);
    return static_cast<u64>(r);
}

// reduce v in place against reduced echelon rows; true when it lands in the span
bool reduce_against(std::vector<u64>& v, const std::vector<std::vector<u64>>& rows, const std::vector<size_t>& pivots,
                    u64 ell, std::vector<u64>* used = nullptr) {
    for (size_t i = 0; i < rows.size(); ++i) {
        u64 c = v[pivots[i]];
        if (used) (*used)[i] = c;
        if (c == 0) continue;
        for (size_t j = 0; j < v.size(); ++j) v[j] = (v[j] + (ell - c) * rows[i][j]) % ell;
    }
    return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
}

}  // namespace

FlSubspace::FlSubspace(u64 ell, size_t dim, const std::vector<std::vector<u64>>& spanning_rows)
    : ell_(ell), dim_(dim) {
    if (!is_prime_int(Int(static_cast<unsigned long>(ell)))) throw ConfigError("subspace modulus must be prime");
    if (dim == 0) throw ConfigError("subspace ambient dimension must be positive");
    for (const auto& r : spanning_rows) {
        if (r.size() != dim) throw ConfigError("subspace row width does not match the ambient dimension");
        std::vector<u64> v(dim);
        for (size_t j = 0; j < dim; ++j) v[j] = r[j] % ell;
        if (reduce_against(v, rows_, pivots_, ell_)) continue;  // dependent row
        size_t p = 0;
        while (v[p] == 0) ++p;
        u64 inv = inv_mod(v[p], ell_);
        for (auto& x : v) x = mul_mod(x, inv, ell_);
        // clear the new pivot column in the existing rows
        for (auto& row : rows_) {
            u64 c = row[p];
            if (c == 0) continue;
            for (size_t j = 0; j < dim; ++j) row[j] = (row[j] + (ell_ - c) * v[j]) % ell_;
        }
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
        // keep rows sorted by pivot column
        for (size_t i = rows_.size(); i-- > 1;)
            if (pivots_[i] < pivots_[i - 1]) {
                std::swap(pivots_[i], pivots_[i - 1]);
                std::swap(rows_[i], rows_[i - 1]);
            }
    }
}

bool FlSubspace::contains(const std::vector<u64>& v) const {
    if (v.size() != dim_) throw ConfigError("vector width does not match the ambient dimension");
    std::vector<u64> w(dim_);
    for (size_t j = 0; j < dim_; ++j) w[j] = v[j] % ell_;
    return reduce_against(w, rows_, pivots_, ell_);
}

std::vector<u64> KummerClass::flatten() const {
    std::vector<u64> v = valuations;
    v.push_back(torsion);
    v.insert(v.end(), unit_coords.begin(), unit_coords.end());
    return v;
}

KummerClass kummer_class(const FieldElement& x, const std::vector<AlgebraicInteger>& support, u64 ell) {
    if (!is_prime_int(Int(static_cast<unsigned long>(ell)))) throw ConfigError("class modulus must be prime");
    if (x.is_zero()) throw DomainError("kummer class of zero");
    const FieldPtr& K = x.field();
    for (size_t i = 0; i < support.size(); ++i) {
        if (support[i].field()->conductor() != K->conductor()) throw ConfigError("support prime from a different field");
        if (!generates_split_prime(support[i])) throw ConfigError("support element is not a split prime");
        for (size_t j = i + 1; j < support.size(); ++j)
            if (support[i].norm() == support[j].norm() && same_ideal(support[i], support[j]))
                throw ConfigError("support primes must be pairwise non-associate");
    }

    Int den(1);
    for (const Rat& c : x.coords()) den = lcm(den, c.get_den());
    AlgebraicInteger num = to_algebraic_integer(x * to_field_element(K->from_int(den)));
    AlgebraicInteger denom = K->from_int(den);

    auto strip = [&](AlgebraicInteger v, std::vector<long>& vals) {
        vals.assign(support.size(), 0);
        for (size_t i = 0; i < support.size(); ++i)
            while (true) {
                auto q = try_divide_exact(v, support[i]);
                if (!q) break;
                v = *q;
                ++vals[i];
            }
        return v;
    };
    std::vector<long> vn, vd;
    AlgebraicInteger rn = strip(num, vn);
    AlgebraicInteger rd = strip(denom, vd);

    // outside the support, numerator and denominator must cancel to a unit
    auto quo = try_divide_exact(rn, rd);
    if (!quo || !is_unit(*quo)) throw DomainError("element is not supported on the declared primes");
    AlgebraicInteger u = *quo;

    // decompose the leftover unit as zeta^e * prod units^b by bounded search
    const auto& units = K->unit_basis();
    std::vector<long> b(units.size(), 0);
    unsigned e = 0;
    if (units.empty()) {
        e = *torsion_exponent(to_field_element(u));
    } else {
        const long B = 12;
        std::vector<long> probe(units.size(), -B);
        bool found = false;
        do {
            FieldElement v = to_field_element(u);
            for (size_t i = 0; i < units.size(); ++i) v = v * power(to_field_element(units[i]), -probe[i]);
            if (is_root_of_unity(v)) {
                e = *torsion_exponent(v);
                b = probe;
                found = true;
                break;
            }
            size_t i = 0;
            while (i < probe.size() && probe[i] == B) probe[i++] = -B;
            if (i == probe.size()) break;
            ++probe[i];
        } while (true);
        if (!found) throw DomainError("unit part outside the decomposition search box");
    }

    KummerClass cls;
    cls.ell = ell;
    cls.valuations.resize(support.size());
    for (size_t i = 0; i < support.size(); ++i) cls.valuations[i] = norm_mod(vn[i] - vd[i], ell);
    u64 g = std::gcd(static_cast<u64>(K->torsion_order()), ell);
    cls.torsion = e % g;
    cls.unit_coords.resize(units.size());
    for (size_t i = 0; i < units.size(); ++i) cls.unit_coords[i] = norm_mod(b[i], ell);
    return cls;
}

LemmaReport lemma_splitting_check(const SplitPrime& r, const SplitPrime& rp, const ExponentTuple& tuple_i,
                                  const std::vector<ExponentTuple>& tuples_j, u64 ell, const Int& sample_bound,
                                  const std::vector<Int>& ramified) {
    const FieldPtr& K = r.generator.field();
    const unsigned N = K->conductor();
    if (N % 4 != 0) throw ConfigError("splitting check needs i in the field (4 | N)");
    if (rp.generator.field()->conductor() != N) throw ConfigError("mixed fields");
    Int ellz(static_cast<unsigned long>(ell));
    if (!is_prime_int(ellz)) throw ConfigError("ell must be prime");
    if (r.rational_norm % ellz == 0 || rp.rational_norm % ellz == 0)
        throw ConfigError("ell must not divide the norms of r, r'");
    const size_t d = K->degree();
    for (const Int& p : ramified) {
        if (p % ellz == 0) throw ConfigError("ell divides a ramified residue characteristic");
        Int m;
        mpz_powm_ui(m.get_mpz_t(), p.get_mpz_t(), d, ellz.get_mpz_t());
        if (m == 1) throw ConfigError("ell divides the residue group order at a ramified prime");
    }
    if (tuple_i.m.size() != d) throw ConfigError("tuple width does not match the field degree");
    for (const auto& t : tuples_j)
        if (t.m.size() != d) throw ConfigError("tuple width does not match the field degree");

    // the sample pool depends only on (field, bound): cache it across calls
    static std::mutex pool_mutex;
    static std::map<std::pair<unsigned, Int>, std::vector<SplitPrime>> pools;
    const std::vector<SplitPrime>* pool;
    {
        std::lock_guard<std::mutex> lk(pool_mutex);
        auto key = std::make_pair(N, sample_bound);
        auto it = pools.find(key);
        if (it == pools.end()) it = pools.emplace(key, enumerate_split_primes(K, sample_bound)).first;
        pool = &it->second;
    }

    const auto& residues = K->galois_residues();
    std::vector<AlgebraicInteger> cr, crp;
    for (unsigned a : residues) {
        cr.push_back(r.generator.galois(K->automorphism(a)));
        crp.push_back(rp.generator.galois(K->automorphism(a)));
    }

    LemmaReport rep;
    rep.scanned = pool->size();
    for (const SplitPrime& s : *pool) {
        u64 q = s.rational_norm.get_ui();
        if ((q - 1) % ell != 0) continue;
        if (r.rational_norm % s.rational_norm == 0 || rp.rational_norm % s.rational_norm == 0) continue;
        ReductionSite site = make_site(N, q, residue_zeta_image(s));

        std::vector<u64> vr(d), vrp(d);
        for (size_t j = 0; j < d; ++j) {
            vr[j] = reduce(cr[j], site);
            vrp[j] = reduce(crp[j], site);
        }
        bool qual = true;
        for (size_t j = 0; j < d && qual; ++j) qual = is_lth_power_residue(mul_mod(vr[j], vrp[j], q), ell, q);
        if (!qual) continue;
        ++rep.samples;

        auto monomial = [&](const ExponentTuple& ti, const ExponentTuple& tj) {
            u64 m = 1;
            for (size_t j = 0; j < d; ++j) {
                u64 base = ti.m[j] >= 0 ? vr[j] : inv_mod(vr[j], q);
                m = mul_mod(m, pow_mod(base, std::abs(ti.m[j]), q), q);
                base = tj.m[j] >= 0 ? vrp[j] : inv_mod(vrp[j], q);
                m = mul_mod(m, pow_mod(base, std::abs(tj.m[j]), q), q);
            }
            return m;
        };
        bool hit = false;
        for (const auto& tj : tuples_j)
            if (is_lth_power_residue(monomial(tuple_i, tj), ell, q)) {
                hit = true;
                break;
            }
        if (!hit) rep.violations.push_back(s);
    }
    rep.inconclusive = rep.samples == 0;
    return rep;
}

CorollaryResult corollary_subgroup_check(const SplitPrime& r, const SplitPrime& rp, const ExponentTuple& tuple_i,
                                         const std::vector<ExponentTuple>& tuples_j, u64 ell) {
    const FieldPtr& K = r.generator.field();
    if (rp.generator.field()->conductor() != K->conductor()) throw ConfigError("mixed fields");
    if (!is_prime_int(Int(static_cast<unsigned long>(ell)))) throw ConfigError("ell must be prime");

    // support: the conjugate primes of r and r', merged up to associates
    std::vector<AlgebraicInteger> support = conjugate_primes(r);
    for (const AlgebraicInteger& g : conjugate_primes(rp)) {
        bool known = false;
        for (const AlgebraicInteger& h : support)
            if (g.norm() == h.norm() && same_ideal(g, h)) known = true;
        if (!known) support.push_back(g);
    }

    const auto& residues = K->galois_residues();
    FieldElement prod = to_field_element(r.generator * rp.generator);
    std::vector<std::vector<u64>> gen_rows;
    for (unsigned a : residues)
        gen_rows.push_back(kummer_class(prod.galois(K->automorphism(a)), support, ell).flatten());

    // reduced echelon form of the generator rows plus the expressing
    // combination of each reduced row in terms of the originals
    const size_t w = gen_rows.front().size();
    std::vector<std::vector<u64>> rows, combo;
    std::vector<size_t> pivots;
    for (size_t i = 0; i < gen_rows.size(); ++i) {
        std::vector<u64> v = gen_rows[i];
        std::vector<u64> c(gen_rows.size(), 0);
        c[i] = 1;
        for (size_t k = 0; k < rows.size(); ++k) {
            u64 f = v[pivots[k]];
            if (f == 0) continue;
            for (size_t j = 0; j < w; ++j) v[j] = (v[j] + (ell - f) * rows[k][j]) % ell;
            for (size_t j = 0; j < c.size(); ++j) c[j] = (c[j] + (ell - f) * combo[k][j]) % ell;
        }
        if (std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; })) continue;
        size_t p = 0;
        while (v[p] == 0) ++p;
        u64 inv = inv_mod(v[p], ell);
        for (auto& x : v) x = mul_mod(x, inv, ell);
        for (auto& x : c) x = mul_mod(x, inv, ell);
        rows.push_back(std::move(v));
        combo.push_back(std::move(c));
        pivots.push_back(p);
    }

    CorollaryResult res;
    for (size_t j = 0; j < tuples_j.size(); ++j) {
        FieldElement x =
            conjugates_product(r.generator, tuple_i) * conjugates_product(rp.generator, tuples_j[j]);
        std::vector<u64> v = kummer_class(x, support, ell).flatten();
        std::vector<u64> coeff(gen_rows.size(), 0);
        for (size_t k = 0; k < rows.size(); ++k) {
            u64 f = v[pivots[k]];
            if (f == 0) continue;
            for (size_t jj = 0; jj < w; ++jj) v[jj] = (v[jj] + (ell - f) * rows[k][jj]) % ell;
            for (size_t jj = 0; jj < coeff.size(); ++jj) coeff[jj] = (coeff[jj] + f * combo[k][jj]) % ell;
        }
        if (std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; })) {
            res.found = true;
            res.witness = j;
            res.coefficients = std::move(coeff);
            return res;
        }
    }
    res.note = "no candidate monomial lies in the subgroup generated by the conjugates of r*r'";
    return res;
}

std::vector<u64> find_uncovered_vector(const std::vector<FlSubspace>& subspaces, SeededRng& rng) {
    if (subspaces.empty()) throw ConfigError("need at least one subspace");
    const u64 ell = subspaces.front().ell();
    const size_t d = subspaces.front().dim();
    for (const FlSubspace& s : subspaces) {
        if (s.ell() != ell || s.dim() != d) throw ConfigError("subspaces disagree on modulus or dimension");
        if (!s.proper()) throw ConfigError("subspaces must be proper");
    }
    if (ell <= subspaces.size())
        throw ConfigError("need ell > k: " + std::to_string(subspaces.size()) +
                          " proper subspaces can cover all of the space mod " + std::to_string(ell));

    auto covered = [&](const std::vector<u64>& v) {
        for (const FlSubspace& s : subspaces)
            if (s.contains(v)) return true;
        return false;
    };

    // k proper subspaces cover at most k/ell of the space, so random draws
    // succeed with probability >= 1 - k/ell each
    std::vector<u64> v(d);
    for (int tries = 0; tries < 64; ++tries) {
        for (auto& x : v) x = rng.below(ell);
        if (!covered(v)) return v;
    }
    // deterministic sweep; guaranteed to hit an uncovered point
    std::fill(v.begin(), v.end(), 0);
    while (true) {
        if (!covered(v)) return v;
        size_t i = 0;
        while (i < d && v[i] == ell - 1) v[i++] = 0;
        if (i == d) throw Error("exhausted the space without an uncovered vector");
        ++v[i];
    }
}

}  // namespace reciplab
