#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "reciplab/primes.hpp"
#include "reciplab/residue.hpp"

#include <set>

using namespace reciplab;

namespace {
AlgebraicInteger mk4(long a, long b) {
    static auto F = CyclotomicField::make(4);
    return F->element(std::vector<Int>{a, b});
}
}  // namespace

TEST_CASE("canonical associates pick the lex-greatest torsion multiple") {
    CHECK(canonical_associate(mk4(2, 1)) == mk4(2, 1));
    CHECK(canonical_associate(mk4(-1, 2)) == mk4(2, 1));    // i*(2+i)
    CHECK(canonical_associate(mk4(-2, -1)) == mk4(2, 1));
    CHECK(canonical_associate(mk4(1, -2)) == mk4(2, 1));
    CHECK(canonical_associate(mk4(2, -1)) == mk4(2, -1));

    auto F8 = CyclotomicField::make(8);
    auto x = F8->element(std::vector<Int>{1, 2, 0, 0});
    CHECK(canonical_associate(x) == F8->element(std::vector<Int>{2, 0, 0, -1}));

    auto F1 = CyclotomicField::make(1);
    CHECK(canonical_associate(F1->from_int(-7)) == F1->from_int(7));

    SeededRng rng(99);
    for (unsigned N : {3u, 4u, 8u, 12u}) {
        auto F = CyclotomicField::make(N);
        for (int i = 0; i < 200; ++i) {
            std::vector<Int> c(F->degree());
            for (auto& v : c) v = static_cast<long>(rng.in_range(0, 20)) - 10;
            auto y = F->element(std::move(c));
            auto cy = canonical_associate(y);
            // idempotent, and invariant across the whole torsion orbit
            CHECK(canonical_associate(cy) == cy);
            CHECK(canonical_associate(y * F->torsion_generator()) == cy);
        }
    }
}

TEST_CASE("split prime recognition") {
    CHECK(generates_split_prime(mk4(2, 1)));        // norm 5
    CHECK_FALSE(generates_split_prime(mk4(1, 1)));  // norm 2 (ramified)
    CHECK_FALSE(generates_split_prime(mk4(3, 0)));  // norm 9
    CHECK_FALSE(generates_split_prime(mk4(0, 0)));
    auto sp = make_split_prime(mk4(-1, 2));
    CHECK(sp.generator == mk4(2, 1));
    CHECK(sp.rational_norm == 5);
    CHECK_THROWS_AS(make_split_prime(mk4(1, 1)), DomainError);

    // inert rational prime: norm 49 in Q(i)
    CHECK_FALSE(generates_split_prime(mk4(7, 0)));
}

TEST_CASE("unconstrained sampling respects bound and avoid set") {
    auto F = CyclotomicField::make(4);
    SeededRng rng(7);
    auto sp = sample_split_prime(F, 10, {}, rng);
    CHECK(sp.rational_norm == 5);  // the only split prime below 10
    CHECK((sp.generator == mk4(2, 1) || sp.generator == mk4(2, -1)));

    auto sp2 = sample_split_prime(F, 100, {Int(5)}, rng);
    CHECK(sp2.rational_norm != 5);
    CHECK(sp2.rational_norm % 4 == 1);

    SeededRng rng2(123);
    for (unsigned N : {1u, 3u, 4u, 5u, 8u, 12u, 15u, 16u, 20u, 24u}) {
        CAPTURE(N);
        auto K = CyclotomicField::make(N);
        std::set<Int> avoid = {Int(5)};
        for (int i = 0; i < 50; ++i) {
            auto s = sample_split_prime(K, 200000, avoid, rng2);
            CHECK(is_prime_int(s.rational_norm));
            CHECK((s.rational_norm - 1) % N == 0);
            CHECK(s.rational_norm != 5);
            CHECK(canonical_associate(s.generator) == s.generator);
            Int n = s.generator.norm();
            CHECK((n == s.rational_norm || n == -s.rational_norm));
        }
    }
}

TEST_CASE("constrained sampling walks k = 1, -1, 2, -2, ...") {
    auto F = CyclotomicField::make(4);
    SeededRng rng(0);
    auto sp = sample_split_prime(F, Int(1000000), {}, rng, SampleConstraint{mk4(2, 1), Int(7)});
    CHECK(sp.generator == mk4(16, 1));
    CHECK(sp.rational_norm == 257);

    // congruence holds coordinate-wise
    for (size_t i = 0; i < 2; ++i) CHECK((sp.generator.coords()[i] - mk4(2, 1).coords()[i]) % 7 == 0);

    CHECK_THROWS_AS(sample_split_prime(F, Int(1000000), {}, rng, SampleConstraint{mk4(2, 1), Int(1)}),
                    DomainError);
    // bound below every reachable norm exhausts
    CHECK_THROWS_AS(sample_split_prime(F, Int(20), {}, rng, SampleConstraint{mk4(2, 1), Int(7)}),
                    NotFoundError);
}

TEST_CASE("constrained samples with varying alpha cover all residue classes") {
    // finite surjectivity stand-in: beta = alpha mod 7 for random alpha should
    // hit every class of (O/q)^* for the norm-13 prime q = 3+2i (site omega=5)
    auto F = CyclotomicField::make(4);
    auto site = make_site(4, 13, 5);
    CHECK((3 + 2 * site.omega) % site.q == 0);  // 3 + 2*omega = 0: the site lies above (3+2i)
    SeededRng rng(2024);
    std::set<u64> classes;
    int produced = 0;
    for (int i = 0; i < 200; ++i) {
        std::vector<Int> c = {Int(static_cast<long>(rng.in_range(0, 40)) - 20),
                              Int(static_cast<long>(rng.in_range(0, 40)) - 20)};
        auto alpha = F->element(std::move(c));
        SplitPrime sp;
        try {
            sp = sample_split_prime(F, Int("100000000000"), {Int(13)}, rng, SampleConstraint{alpha, Int(7)});
        } catch (const NotFoundError&) {
            continue;  // e.g. alpha with both coords even can never work
        }
        ++produced;
        classes.insert(reduce(sp.generator, site));
    }
    CHECK(produced > 150);
    CHECK(classes == std::set<u64>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
}

TEST_CASE("conjugate primes are pairwise non-associate and cover the orbit") {
    auto sp = make_split_prime(mk4(2, 1));
    auto conj = conjugate_primes(sp);
    REQUIRE(conj.size() == 2);
    CHECK(conj[0] == mk4(2, 1));
    CHECK(conj[1] == mk4(2, -1));

    auto sp2 = make_split_prime(mk4(3, 2));
    auto conj2 = conjugate_primes(sp2);
    CHECK(conj2[0] == mk4(3, 2));
    CHECK(conj2[1] == mk4(3, -2));

    SeededRng rng(5);
    for (unsigned N : {4u, 8u, 12u}) {
        auto K = CyclotomicField::make(N);
        auto s = sample_split_prime(K, 100000, {}, rng);
        auto cs = conjugate_primes(s);
        REQUIRE(cs.size() == K->degree());
        for (size_t i = 0; i < cs.size(); ++i)
            for (size_t j = i + 1; j < cs.size(); ++j) {
                auto ratio = try_divide_exact(cs[i], cs[j]);
                bool associate = ratio.has_value() && is_unit(*ratio);
                CHECK_FALSE(associate);
            }
    }
}

TEST_CASE("norms multiply across independent samples") {
    auto F = CyclotomicField::make(8);
    SeededRng rng(31337);
    for (int i = 0; i < 25; ++i) {
        auto a = sample_split_prime(F, 100000, {}, rng);
        auto b = sample_split_prime(F, 100000, {}, rng);
        Int n = (a.generator * b.generator).norm();
        if (n < 0) n = -n;
        CHECK(n == a.rational_norm * b.rational_norm);
    }
}

TEST_CASE("exhaustive enumeration of small split primes") {
    auto F = CyclotomicField::make(4);
    auto all = enumerate_split_primes(F, 40);
    std::vector<long> norms;
    for (const auto& s : all) norms.push_back(s.rational_norm.get_si());
    CHECK(norms == std::vector<long>{5, 5, 13, 13, 17, 17, 29, 29, 37, 37});
    // canonical generators, two per rational prime, ascending lex within a norm
    CHECK(all[0].generator == mk4(2, -1));
    CHECK(all[1].generator == mk4(2, 1));
    CHECK(all[4].generator == mk4(4, -1));
    CHECK(all[5].generator == mk4(4, 1));

    auto F3 = CyclotomicField::make(3);
    auto all3 = enumerate_split_primes(F3, 20);
    std::vector<long> n3;
    for (const auto& s : all3) n3.push_back(s.rational_norm.get_si());
    CHECK(n3 == std::vector<long>{7, 7, 13, 13, 19, 19});

    auto F8 = CyclotomicField::make(8);
    auto all8 = enumerate_split_primes(F8, 40);
    std::vector<long> n8;
    for (const auto& s : all8) n8.push_back(s.rational_norm.get_si());
    CHECK(n8 == std::vector<long>{17, 17, 17, 17});  // 17 and 41 are 1 mod 8; only 17 <= 40
    for (const auto& s : all8) CHECK(canonical_associate(s.generator) == s.generator);
}
