#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "reciplab/fqpoly.hpp"
#include "reciplab/residue.hpp"

#include <map>
#include <set>

using namespace reciplab;

namespace {

std::vector<u64> primes_upto(u64 n) {
    std::vector<u64> ps;
    for (u64 q = 2; q <= n; ++q)
        if (is_prime_u64(q)) ps.push_back(q);
    return ps;
}

AlgebraicInteger rand_elem(const FieldPtr& F, SeededRng& rng, long box = 50) {
    std::vector<Int> c(F->degree());
    for (auto& v : c) v = static_cast<long>(rng.in_range(0, 2 * box)) - box;
    return F->element(std::move(c));
}

}  // namespace

TEST_CASE("sites pick the smallest image of zeta and reject bad primes") {
    // order-4 elements mod 5 are 2 and 3
    auto s = make_site(4, 5);
    CHECK(s.omega == 2);
    CHECK(zeta_images(4, 5) == std::vector<u64>{2, 3});
    // 3 + 2*zeta reduces to 3 + 4 = 2 mod 5
    auto F = CyclotomicField::make(4);
    CHECK(reduce(F->element(std::vector<Int>{3, 2}), s) == 2);

    CHECK_THROWS_AS(make_site(4, 7), ConfigError);    // 7 != 1 mod 4
    CHECK_THROWS_AS(make_site(4, 15), ConfigError);   // composite
    CHECK_THROWS_AS(make_site(4, 13, 6), ConfigError);  // 6 has order 12, not 4
    CHECK(make_site(4, 13, 5).omega == 5);            // 5^2 = 25 = -1 mod 13
    CHECK(make_site(1, 7).omega == 1);
}

TEST_CASE("reduction is a ring map and respects the Galois twist") {
    SeededRng rng(424242);
    for (unsigned N : {1u, 3u, 4u, 5u, 8u, 12u, 15u, 16u, 20u, 24u}) {
        CAPTURE(N);
        auto F = CyclotomicField::make(N);
        auto qs = primes_in_class(N, 1, N + 2, 100000, 6);
        REQUIRE(!qs.empty());
        for (u64 q : qs) {
            auto site = make_site(N, q);
            for (int i = 0; i < 40; ++i) {
                auto x = rand_elem(F, rng), y = rand_elem(F, rng);
                CHECK(reduce(x * y, site) == mul_mod(reduce(x, site), reduce(y, site), q));
                CHECK(reduce(x + y, site) == add_mod(reduce(x, site), reduce(y, site), q));
                // twisting the site by a matches acting by sigma_a upstairs
                const auto& res = F->galois_residues();
                unsigned a = res[rng.below(res.size())];
                auto twisted = make_site(N, q, pow_mod(site.omega, a, q));
                CHECK(reduce(x, twisted) == reduce(x.galois(F->automorphism(a)), site));
            }
            // zeta goes to omega, and omega has exact order N
            CHECK(reduce(F->zeta(), site) == site.omega % q);
            CHECK(multiplicative_order(site.omega, q) == N);
        }
    }
}

TEST_CASE("primitive roots: frozen small table and brute-force order check") {
    const std::map<u64, u64> known = {{2, 1},  {3, 2},  {5, 2},  {7, 3},  {11, 2}, {13, 2}, {17, 3},
                                      {19, 2}, {23, 5}, {29, 2}, {31, 3}, {37, 2}, {41, 6}, {43, 3}};
    for (auto [q, g] : known) CHECK(primitive_root(q) == g);

    for (u64 q : primes_upto(200)) {
        u64 g = primitive_root(q);
        // brute-force multiplicative order
        u64 v = g % q, ord = 1;
        while (v != 1) {
            v = mul_mod(v, g, q);
            ++ord;
        }
        CHECK(ord == q - 1);
    }
    CHECK_THROWS_AS(primitive_root(15), DomainError);
}

TEST_CASE("discrete log is exhaustively correct for every prime below 10^4") {
    u64 checked = 0;
    for (u64 q : primes_upto(10000)) {
        u64 g = primitive_root(q);
        u64 x = 1;
        for (u64 k = 0; k + 1 < q; ++k) {
            u64 e = discrete_log(g, x, q);
            if (e != k) {
                CAPTURE(q);
                CAPTURE(k);
                REQUIRE(e == k);
            }
            ++checked;
            x = mul_mod(x, g, q);
        }
    }
    CHECK(checked > 5000000);  // the sweep really covered all of F_q^* for all q
}

TEST_CASE("discrete log in a proper subgroup") {
    // 2^10 = 1024, order of 2 mod 1024-splitting prime... use q = 31: ord(5) = 3
    CHECK(multiplicative_order(5, 31) == 3);
    CHECK(discrete_log_order(5, 25, 3, 31) == 2);
    CHECK_THROWS_AS(discrete_log_order(5, 2, 3, 31), NotFoundError);
    CHECK_THROWS_AS(discrete_log(3, 0, 7), DomainError);
}

TEST_CASE("power residue test agrees with brute force below 500") {
    for (u64 q : primes_upto(500)) {
        if (q == 2) continue;
        for (u64 ell : {2ull, 3ull, 5ull, 7ull, 11ull}) {
            std::set<u64> powers;
            for (u64 y = 1; y < q; ++y) powers.insert(pow_mod(y, ell, q));
            for (u64 x = 1; x < q; ++x) CHECK(is_lth_power_residue(x, ell, q) == (powers.count(x) > 0));
        }
    }
    CHECK_THROWS_AS(is_lth_power_residue(0, 3, 7), DomainError);
}

TEST_CASE("prime streams by residue class") {
    auto qs = primes_in_class(4, 1, 2, 100, 100);
    CHECK(qs == std::vector<u64>{5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97});
    auto one = primes_in_class(8, 1, 100, 1000000, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == 113);
    CHECK(primes_in_class(2, 0, 3, 100, 10).empty());  // even numbers > 2 are never prime
}

TEST_CASE("fq polynomial division, gcd and evaluation") {
    const u64 q = 101;
    fq::Poly a = {3, 0, 1};           // x^2 + 3
    fq::Poly b = {5, 1};              // x + 5
    auto prod = fq::mul(a, b, q);
    CHECK(fq::div_exact(prod, b, q) == a);
    CHECK(fq::rem(prod, b, q).empty());
    CHECK_THROWS_AS(fq::div_exact(fq::Poly{1, 1}, fq::Poly{0, 0, 1}, q), DomainError);
    CHECK(fq::eval(prod, 7, q) == mul_mod(fq::eval(a, 7, q), fq::eval(b, 7, q), q));

    // gcd of (x-2)(x-3) and (x-3)(x-4) is x-3 (monic)
    auto f1 = fq::mul(fq::Poly{q - 2, 1}, fq::Poly{q - 3, 1}, q);
    auto f2 = fq::mul(fq::Poly{q - 3, 1}, fq::Poly{q - 4, 1}, q);
    CHECK(fq::gcd(f1, f2, q) == fq::Poly{q - 3, 1});
}

TEST_CASE("root extraction with multiplicities") {
    SeededRng rng(1);
    const u64 q = 101;
    // (x-2)(x-3)^2
    auto f = fq::mul(fq::Poly{q - 2, 1}, fq::mul(fq::Poly{q - 3, 1}, fq::Poly{q - 3, 1}, q), q);
    auto roots = fq::roots_with_multiplicity(f, q, rng);
    CHECK(roots == std::vector<std::pair<u64, unsigned>>{{2, 1}, {3, 2}});

    // x^2 - n for a non-residue n has no roots
    u64 nr = 0;
    for (u64 c = 2; c < q; ++c)
        if (!is_lth_power_residue(c, 2, q)) {
            nr = c;
            break;
        }
    CHECK(fq::roots_with_multiplicity(fq::Poly{q - nr, 0, 1}, q, rng).empty());

    // randomized reconstruction across sizes, including a large prime
    for (u64 qq : {u64{13}, u64{101}, u64{65537}, u64{999983}}) {
        for (int it = 0; it < 25; ++it) {
            std::map<u64, unsigned> want;
            fq::Poly f2 = {1};
            unsigned nroots = 1 + static_cast<unsigned>(rng.below(5));
            for (unsigned i = 0; i < nroots; ++i) {
                u64 r = rng.below(qq);
                unsigned m = 1 + static_cast<unsigned>(rng.below(2));
                want[r] += m;
                for (unsigned j = 0; j < m; ++j) f2 = fq::mul(f2, fq::Poly{sub_mod(0, r, qq), 1}, qq);
            }
            // optional irreducible factor so not everything splits
            if (rng.below(2)) {
                u64 nr2 = 2;
                while (is_lth_power_residue(nr2, 2, qq)) ++nr2;
                f2 = fq::mul(f2, fq::Poly{sub_mod(0, nr2, qq), 0, 1}, qq);
            }
            auto got = fq::roots_with_multiplicity(f2, qq, rng);
            std::map<u64, unsigned> gotm(got.begin(), got.end());
            CHECK(gotm == want);
        }
    }
    CHECK_THROWS_AS(fq::roots_with_multiplicity(fq::Poly{}, 7, rng), DomainError);
}
