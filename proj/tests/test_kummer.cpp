#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "reciplab/kummer.hpp"
#include "reciplab/residue.hpp"

#include <set>

using namespace reciplab;

namespace {

FieldPtr F4() {
    static auto F = CyclotomicField::make(4);
    return F;
}
FieldPtr F8() {
    static auto F = CyclotomicField::make(8);
    return F;
}

AlgebraicInteger mk4(long a, long b) { return F4()->element(std::vector<Int>{a, b}); }

}  // namespace

TEST_CASE("subspaces over a prime field") {
    // two dependent rows collapse to rank 1
    FlSubspace line(7, 3, {{1, 2, 3}, {2, 4, 6}});
    CHECK(line.rank() == 1);
    CHECK(line.proper());
    CHECK(line.contains({3, 6, 2}));   // 3 * (1,2,3) mod 7
    CHECK_FALSE(line.contains({1, 2, 4}));
    CHECK(line.contains({0, 0, 0}));

    FlSubspace plane(7, 3, {{1, 0, 0}, {1, 1, 0}});
    CHECK(plane.rank() == 2);
    CHECK(plane.contains({5, 3, 0}));
    CHECK_FALSE(plane.contains({0, 0, 1}));

    FlSubspace full(5, 2, {{1, 0}, {0, 1}});
    CHECK(full.rank() == 2);
    CHECK_FALSE(full.proper());

    CHECK_THROWS_AS(FlSubspace(6, 2, {{1, 0}}), ConfigError);           // modulus not prime
    CHECK_THROWS_AS(FlSubspace(7, 2, {{1, 0, 0}}), ConfigError);        // width mismatch
    CHECK_THROWS_AS(line.contains(std::vector<u64>{1, 2}), ConfigError);
}

TEST_CASE("kummer classes read off monomial exponents") {
    AlgebraicInteger beta = mk4(3, 2);
    auto support = conjugate_primes(make_split_prime(beta));
    REQUIRE(support.size() == 2);

    // x = s1(b)^4 * s2(b)^-1: valuations (4, -1) mod 7 = (4, 6)
    FieldElement x = conjugates_product(beta, ExponentTuple{{4, -1}});
    auto cls = kummer_class(x, support, 7);
    CHECK(cls.valuations == std::vector<u64>{4, 6});
    CHECK(cls.torsion == 0);  // gcd(4, 7) = 1 kills the torsion coordinate
    CHECK(cls.unit_coords.empty());
    CHECK(cls.flatten() == std::vector<u64>{4, 6, 0});

    // ell = 2 divides the torsion order, so the i-part survives
    auto twisted = kummer_class(to_field_element(F4()->torsion_generator() * beta), support, 2);
    CHECK(twisted.valuations == std::vector<u64>{1, 0});
    CHECK(twisted.torsion == 1);

    // elements with primes outside the support have no class
    CHECK_THROWS_AS(kummer_class(to_field_element(mk4(2, 1)), support, 7), DomainError);
    // support entries must generate distinct ideals
    auto assoc = support;
    assoc.push_back(support[0] * F4()->torsion_generator());
    CHECK_THROWS_AS(kummer_class(x, assoc, 7), ConfigError);
    CHECK_THROWS_AS(kummer_class(to_field_element(mk4(0, 0)), support, 7), DomainError);
}

TEST_CASE("kummer classes decompose fundamental-unit parts") {
    auto K = F8();
    AlgebraicInteger g17 = K->element(std::vector<Int>{1, 2, 0, 0});
    auto support = conjugate_primes(make_split_prime(g17));
    REQUIRE(support.size() == 4);

    AlgebraicInteger u = K->unit_basis()[0];  // 1 + z - z^3
    FieldElement x = to_field_element(u * u * support[0]) * invert(to_field_element(u));
    auto cls = kummer_class(x, support, 5);
    CHECK(cls.valuations == std::vector<u64>{1, 0, 0, 0});
    CHECK(cls.unit_coords == std::vector<u64>{1});
    CHECK(cls.torsion == 0);
}

TEST_CASE("lth power residues against brute force") {
    // cubes mod 13 are {1, 5, 8, 12}
    CHECK(is_lth_power_residue(5, 3, 13));
    CHECK(is_lth_power_residue(8, 3, 13));
    CHECK_FALSE(is_lth_power_residue(2, 3, 13));
    CHECK_FALSE(is_lth_power_residue(3, 3, 13));

    // gcd(5, 6) = 1: the fifth-power map permutes F_7*
    for (u64 x = 1; x < 7; ++x) CHECK(is_lth_power_residue(x, 5, 7));

    for (u64 q : {11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u, 43u, 47u}) {
        for (u64 ell : {2u, 3u, 5u, 7u}) {
            std::set<u64> powers;
            for (u64 w = 1; w < q; ++w) powers.insert(pow_mod(w, ell, q));
            for (u64 x = 1; x < q; ++x) CHECK(is_lth_power_residue(x, ell, q) == (powers.count(x) != 0));
        }
    }
}

TEST_CASE("residue-level splitting check on a diagonal pair of tuples") {
    SplitPrime r = make_split_prime(mk4(2, 1));
    SplitPrime rp = make_split_prime(mk4(3, 2));
    std::vector<ExponentTuple> sys{{{0, 0}}, {{1, 1}}};  // trivial and norm

    for (u64 ell : {7u, 11u}) {
        for (const auto& ti : sys) {
            auto rep = lemma_splitting_check(r, rp, ti, sys, ell, Int(100000));
            CHECK(rep.samples > 0);
            CHECK(rep.violations.empty());
            CHECK(rep.ok());
        }
    }

    // tuple_i = 0 with 0 among the candidates never violates: 1 is a power
    auto rep = lemma_splitting_check(r, rp, ExponentTuple{{0, 0}}, {ExponentTuple{{0, 0}}}, 7, Int(50000));
    CHECK(rep.ok());
    CHECK(rep.samples > 0);
}

TEST_CASE("splitting check flags mismatched tuples") {
    SplitPrime r = make_split_prime(mk4(2, 1));
    SplitPrime rp = make_split_prime(mk4(3, 2));

    // candidate s2(r) * s1(r') is unrelated to the classes of s(r r')
    auto rep = lemma_splitting_check(r, rp, ExponentTuple{{0, 1}}, {ExponentTuple{{1, 0}}}, 7, Int(100000));
    CHECK(rep.samples > 0);
    CHECK(rep.violations.size() > 0);
    CHECK_FALSE(rep.ok());
    // every violation is a qualifying sample from the scanned pool
    CHECK(rep.violations.size() <= rep.samples);
    for (const auto& s : rep.violations) CHECK((s.rational_norm - 1) % 7 == 0);
}

TEST_CASE("splitting check preconditions") {
    SplitPrime r = make_split_prime(mk4(2, 1));
    SplitPrime rp = make_split_prime(mk4(3, 2));
    std::vector<ExponentTuple> sys{{{1, 1}}};

    // the field must contain i
    auto K3 = CyclotomicField::make(3);
    SplitPrime r3 = make_split_prime(K3->element(std::vector<Int>{3, 1}));  // norm 7
    SplitPrime rp3 = make_split_prime(K3->element(std::vector<Int>{4, 1}));
    CHECK_THROWS_AS(lemma_splitting_check(r3, rp3, ExponentTuple{{1, 1}}, {ExponentTuple{{1, 1}}}, 5, Int(1000)),
                    ConfigError);

    // ell may not divide a norm
    CHECK_THROWS_AS(lemma_splitting_check(r, rp, sys[0], sys, 5, Int(1000)), ConfigError);
    CHECK_THROWS_AS(lemma_splitting_check(r, rp, sys[0], sys, 13, Int(1000)), ConfigError);
    // 13 is 1 mod 4: ell = 7 divides 13^2 - 1 = 168, so S = {13} is rejected
    CHECK_THROWS_AS(lemma_splitting_check(r, rp, sys[0], sys, 7, Int(1000), {Int(13)}), ConfigError);
    CHECK_THROWS_AS(lemma_splitting_check(r, rp, sys[0], sys, 7, Int(1000), {Int(7)}), ConfigError);
    // S = {2, 5} is fine for ell = 7: 2*3 and 5*24 avoid it
    CHECK_NOTHROW(lemma_splitting_check(r, rp, sys[0], sys, 7, Int(2000), {Int(2), Int(5)}));
    CHECK_THROWS_AS(lemma_splitting_check(r, rp, sys[0], sys, 4, Int(1000)), ConfigError);  // ell not prime

    // a bound below any usable sample is inconclusive, not a silent pass
    auto rep = lemma_splitting_check(r, rp, sys[0], sys, 7, Int(20));
    CHECK(rep.samples == 0);
    CHECK(rep.inconclusive);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("subgroup membership of candidate monomials") {
    SplitPrime r = make_split_prime(mk4(2, 1));
    SplitPrime rp = make_split_prime(mk4(3, 2));

    // diagonal tuple (1,1): the candidate is exactly s1(rr') * s2(rr')
    auto res = corollary_subgroup_check(r, rp, ExponentTuple{{1, 1}}, {ExponentTuple{{0, 0}}, ExponentTuple{{1, 1}}}, 7);
    REQUIRE(res.found);
    CHECK(res.witness == 1);
    CHECK(res.coefficients == std::vector<u64>{1, 1});

    // zero tuple with the zero candidate: witnessed by the empty combination
    res = corollary_subgroup_check(r, rp, ExponentTuple{{0, 0}}, {ExponentTuple{{0, 0}}}, 7);
    REQUIRE(res.found);
    CHECK(res.witness == 0);
    CHECK(res.coefficients == std::vector<u64>{0, 0});

    // candidates outside the span of the conjugates of r r'
    res = corollary_subgroup_check(r, rp, ExponentTuple{{1, 0}}, {ExponentTuple{{0, 1}}}, 7);
    CHECK_FALSE(res.found);
    CHECK_FALSE(res.note.empty());

    // scaled diagonal: (2,2) = 2 * [s(rr')] classes
    res = corollary_subgroup_check(r, rp, ExponentTuple{{2, 2}}, {ExponentTuple{{2, 2}}}, 7);
    REQUIRE(res.found);
    CHECK(res.coefficients == std::vector<u64>{2, 2});

    // mixed diagonal: (1,1) against candidate (2,2) is off by one power of rr'
    res = corollary_subgroup_check(r, rp, ExponentTuple{{1, 1}},
                                   {ExponentTuple{{2, 2}}, ExponentTuple{{3, 3}}, ExponentTuple{{1, 1}}}, 11);
    REQUIRE(res.found);
    CHECK(res.witness == 2);
}

TEST_CASE("corollary witnesses are consistent with the splitting sample") {
    SplitPrime r = make_split_prime(mk4(2, 1));
    SplitPrime rp = make_split_prime(mk4(3, 2));
    std::vector<ExponentTuple> tuples{{{1, 0}}, {{1, 1}}, {{2, 1}}};

    for (const auto& ti : tuples) {
        auto cor = corollary_subgroup_check(r, rp, ti, tuples, 7);
        if (!cor.found) continue;
        auto lem = lemma_splitting_check(r, rp, ti, {tuples[cor.witness]}, 7, Int(50000));
        CHECK(lem.samples > 0);
        CHECK(lem.violations.empty());
    }
    // at least the diagonal tuples admit witnesses
    CHECK(corollary_subgroup_check(r, rp, tuples[1], tuples, 7).found);
}

TEST_CASE("uncovered vectors outside unions of proper subspaces") {
    SeededRng rng(42);

    FlSubspace ax(5, 2, {{1, 0}});
    FlSubspace ay(5, 2, {{0, 1}});
    auto v = find_uncovered_vector({ax, ay}, rng);
    CHECK_FALSE(ax.contains(v));
    CHECK_FALSE(ay.contains(v));
    CHECK(v[0] != 0);
    CHECK(v[1] != 0);

    // randomized grid: rechecked membership on every output
    for (u64 ell : {7u, 11u, 13u}) {
        for (size_t d : {2u, 3u, 4u}) {
            for (int inst = 0; inst < 20; ++inst) {
                std::vector<FlSubspace> subs;
                size_t k = 1 + rng.below(ell > 5 ? 5 : ell - 1);
                for (size_t s = 0; s < k; ++s) {
                    size_t rank = 1 + rng.below(d - 1 ? d - 1 : 1);
                    std::vector<std::vector<u64>> rows(rank, std::vector<u64>(d));
                    for (auto& row : rows)
                        for (auto& x : row) x = rng.below(ell);
                    subs.emplace_back(ell, d, rows);
                    if (!subs.back().proper()) subs.pop_back();
                }
                if (subs.empty()) subs.emplace_back(ell, d, std::vector<std::vector<u64>>{});
                auto w = find_uncovered_vector(subs, rng);
                for (const auto& s : subs) CHECK_FALSE(s.contains(w));
            }
        }
    }

    // the hypothesis ell > k is enforced: the three lines of F_3^2 cover it
    FlSubspace l1(3, 2, {{1, 0}});
    FlSubspace l2(3, 2, {{0, 1}});
    FlSubspace l3(3, 2, {{1, 1}});
    CHECK_THROWS_AS(find_uncovered_vector({l1, l2, l3}, rng), ConfigError);
    CHECK_THROWS_AS(find_uncovered_vector({FlSubspace(5, 2, {{1, 0}, {0, 1}})}, rng), ConfigError);
    CHECK_THROWS_AS(find_uncovered_vector({}, rng), ConfigError);
    CHECK_THROWS_AS(find_uncovered_vector({ax, l1}, rng), ConfigError);  // mixed moduli
}
