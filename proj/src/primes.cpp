#include "reciplab/primes.hpp"

#include <algorithm>
#include <map>

namespace reciplab {

namespace {

bool lex_less(const std::vector<Int>& a, const std::vector<Int>& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// Coordinate box radius for norm-bounded searches: norms of elements with
// coordinates in [-C, C] comfortably cover all primes below the bound.
long box_radius(const FieldPtr& K, const Int& bound) {
    double b = bound.get_d();
    double c = std::pow(std::max(b, 2.0), 1.0 / static_cast<double>(K->degree()));
    return std::max(2L, static_cast<long>(c) + 2);
}

}  // namespace

AlgebraicInteger canonical_associate(const AlgebraicInteger& x) {
    const auto& F = x.field();
    AlgebraicInteger best = x;
    AlgebraicInteger cur = x;
    auto g = F->torsion_generator();
    for (unsigned e = 1; e < F->torsion_order(); ++e) {
        cur = cur * g;
        if (lex_less(best.coords(), cur.coords())) best = cur;
    }
    return best;
}

bool generates_split_prime(const AlgebraicInteger& x) {
    if (x.is_zero()) return false;
    Int p = abs_int(x.norm());
    if (!is_prime_int(p)) return false;
    return (p - 1) % x.field()->conductor() == 0;
}

SplitPrime make_split_prime(const AlgebraicInteger& beta) {
    if (!generates_split_prime(beta))
        throw DomainError("not a split prime generator: " + beta.str());
    return SplitPrime{canonical_associate(beta), abs_int(beta.norm())};
}

SplitPrime sample_split_prime(const FieldPtr& K, const Int& norm_bound, const std::set<Int>& avoid,
                              SeededRng& rng, const std::optional<SampleConstraint>& constraint) {
    const unsigned d = K->degree();
    if (constraint) {
        const auto& alpha = constraint->alpha;
        if (alpha.field()->conductor() != K->conductor())
            throw DomainError("sample_split_prime: constraint from a different field");
        const Int& pp = constraint->modulus;
        if (pp <= 1) throw DomainError("sample_split_prime: constraint modulus must be > 1");
        for (long i = 1; i <= 100000; ++i) {
            long k = (i % 2 == 1) ? (i + 1) / 2 : -(i / 2);  // 1, -1, 2, -2, ...
            AlgebraicInteger beta = alpha + K->from_int(pp * k);
            if (!generates_split_prime(beta)) continue;
            Int p = abs_int(beta.norm());
            if (p > norm_bound || avoid.count(p)) continue;
            return SplitPrime{canonical_associate(beta), std::move(p)};
        }
        throw NotFoundError("sample_split_prime: constrained search exhausted");
    }
    const long C = box_radius(K, norm_bound);
    for (long tries = 0; tries < 500000; ++tries) {
        std::vector<Int> c(d);
        for (auto& v : c) v = static_cast<long>(rng.in_range(0, 2 * static_cast<u64>(C))) - C;
        AlgebraicInteger beta = K->element(std::move(c));
        if (beta.is_zero()) continue;
        if (!generates_split_prime(beta)) continue;
        Int p = abs_int(beta.norm());
        if (p > norm_bound || avoid.count(p)) continue;
        return SplitPrime{canonical_associate(beta), std::move(p)};
    }
    throw NotFoundError("sample_split_prime: no admissible prime below the bound");
}

std::vector<AlgebraicInteger> conjugate_primes(const SplitPrime& r) {
    std::vector<AlgebraicInteger> out;
    for (const auto& s : r.generator.field()->automorphisms())
        out.push_back(canonical_associate(r.generator.galois(s)));
    return out;
}

std::vector<SplitPrime> enumerate_split_primes(const FieldPtr& K, const Int& bound) {
    const unsigned d = K->degree();
    const long C = box_radius(K, bound);
    std::map<std::vector<Int>, SplitPrime> seen;  // canonical coords -> prime
    std::vector<Int> c(d, Int(-C));
    for (;;) {
        AlgebraicInteger beta = K->element(c);
        if (!beta.is_zero() && generates_split_prime(beta)) {
            Int p = abs_int(beta.norm());
            if (p <= bound) {
                auto canon = canonical_associate(beta);
                seen.emplace(canon.coords(), SplitPrime{canon, p});
            }
        }
        // odometer over the box
        size_t i = 0;
        while (i < d && c[i] == C) c[i++] = -C;
        if (i == d) break;
        c[i] += 1;
    }
    // Fields with infinite unit group can surface one ideal under several
    // non-torsion-associate generators; keep one per ideal (the lex-greatest).
    std::vector<SplitPrime> out;
    for (auto& [_, sp] : seen) {
        bool merged = false;
        for (auto& kept : out) {
            if (kept.rational_norm != sp.rational_norm) continue;
            auto ratio = try_divide_exact(sp.generator, kept.generator);
            if (ratio && is_unit(*ratio)) {
                if (lex_less(kept.generator.coords(), sp.generator.coords())) kept = sp;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(sp);
    }
    std::sort(out.begin(), out.end(), [](const SplitPrime& a, const SplitPrime& b) {
        int c0 = cmp(a.rational_norm, b.rational_norm);
        if (c0 != 0) return c0 < 0;
        return lex_less(a.generator.coords(), b.generator.coords());
    });
    return out;
}

}  // namespace reciplab
