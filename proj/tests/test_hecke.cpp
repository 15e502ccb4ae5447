#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "reciplab/hecke.hpp"

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

// canonical character of Q(i): modulus (1+i)^3, infinity type (1,0),
// eps(i^j) = i^{-j}
HeckeCharacter canonical_qi() {
    FiniteOrderCharacter fin(F4(), F4(), {}, SpecialTwoPart{3});
    return make_hecke_character(F4(), F4(), ExponentTuple{{1, 0}}, std::move(fin));
}

HeckeCharacter trivial_qi() {
    return make_hecke_character(F4(), F4(), ExponentTuple{{0, 0}}, FiniteOrderCharacter::trivial(F4(), F4()));
}

HeckeCharacter norm_qi() {
    return make_hecke_character(F4(), F4(), ExponentTuple{{1, 1}}, FiniteOrderCharacter::trivial(F4(), F4()));
}

// type (2,1) with the order-4 factor at (2+i): x -> zeta_4^{dlog_2(x mod P)}
HeckeCharacter order4_qi() {
    FactorCharacter f{make_split_prime(mk4(2, 1)), 2, 4, 1, 0};
    FiniteOrderCharacter fin(F4(), F4(), {f}, std::nullopt);
    return make_hecke_character(F4(), F4(), ExponentTuple{{2, 1}}, std::move(fin));
}

}  // namespace

TEST_CASE("special residue system of (O/(1+i)^3)^*") {
    CHECK(special_two_exponent(F4()->one()) == 0);
    CHECK(special_two_exponent(F4()->zeta()) == 1);
    CHECK(special_two_exponent(mk4(0, -1)) == 3);
    CHECK(special_two_exponent(mk4(3, 2)) == 0);   // 3+2i = 1 mod (1+i)^3
    CHECK(special_two_exponent(mk4(2, 1)) == 3);   // 2+i = -i mod (1+i)^3
    CHECK_THROWS_AS(special_two_exponent(mk4(1, 1)), DomainError);  // even norm
    CHECK_THROWS_AS(special_two_exponent(F8()->one()), DomainError);

    // multiplicativity of j over odd elements
    SeededRng rng(11);
    for (int i = 0; i < 200; ++i) {
        auto x = mk4(static_cast<long>(rng.in_range(0, 20)) - 10, static_cast<long>(rng.in_range(0, 20)) - 10);
        auto y = mk4(static_cast<long>(rng.in_range(0, 20)) - 10, static_cast<long>(rng.in_range(0, 20)) - 10);
        if (x.norm() % 2 == 0 || y.norm() % 2 == 0) continue;
        CHECK(special_two_exponent(x * y) == (special_two_exponent(x) + special_two_exponent(y)) % 4);
    }
}

TEST_CASE("factor construction derives omega and validates the data") {
    FactorCharacter f{make_split_prime(mk4(2, 1)), 2, 4, 1, 0};
    FiniteOrderCharacter fin(F4(), F4(), {f}, std::nullopt);
    REQUIRE(fin.factors().size() == 1);
    CHECK(fin.factors()[0].omega == 3);  // (i-3)/(2+i) = -1+i is integral

    // conjugate prime picks the other image of zeta
    FactorCharacter fc{make_split_prime(mk4(2, -1)), 2, 4, 1, 0};
    FiniteOrderCharacter finc(F4(), F4(), {fc}, std::nullopt);
    CHECK(finc.factors()[0].omega == 2);

    // bad data rejected
    CHECK_THROWS_AS(FiniteOrderCharacter(F4(), F4(), {FactorCharacter{make_split_prime(mk4(2, 1)), 4, 4, 1, 0}},
                                         std::nullopt),
                    ConfigError);  // 4 is not a primitive root mod 5
    CHECK_THROWS_AS(FiniteOrderCharacter(F4(), F4(), {FactorCharacter{make_split_prime(mk4(2, 1)), 2, 3, 1, 0}},
                                         std::nullopt),
                    ConfigError);  // 3 does not divide 5-1
    CHECK_THROWS_AS(FiniteOrderCharacter(F4(), F4(), {FactorCharacter{make_split_prime(mk4(2, 1)), 2, 4, 5, 0}},
                                         std::nullopt),
                    ConfigError);  // k >= t
    CHECK_THROWS_AS(FiniteOrderCharacter(F8(), F8(), {}, SpecialTwoPart{1}), ConfigError);  // N != 4
    // associate factors rejected
    FactorCharacter f2{make_split_prime(mk4(-1, 2)), 2, 4, 1, 0};
    CHECK_THROWS_AS(FiniteOrderCharacter(F4(), F4(), {f, f2}, std::nullopt), ConfigError);

    // t must divide the torsion order of L: t=8 impossible over Q(i)
    auto p17 = make_split_prime(F4()->element(std::vector<Int>{4, 1}));
    CHECK_THROWS_AS(FiniteOrderCharacter(F4(), F4(), {FactorCharacter{p17, 3, 8, 1, 0}}, std::nullopt),
                    ConfigError);
    // ... but is fine over L = Q(zeta_8)
    FiniteOrderCharacter ok(F4(), F8(), {FactorCharacter{p17, 3, 8, 1, 0}}, std::nullopt);
    CHECK(ok.order() == 8);
}

TEST_CASE("validation: canonical character valid, trivial finite part is not") {
    auto rep = validate_character(canonical_qi());
    CHECK(rep.valid);
    CHECK(rep.failures.empty());

    // same infinity type with trivial eps: zeta is a witness
    auto bad = make_hecke_character(F4(), F4(), ExponentTuple{{1, 0}}, FiniteOrderCharacter::trivial(F4(), F4()));
    auto rep2 = validate_character(bad);
    CHECK_FALSE(rep2.valid);
    REQUIRE(!rep2.failures.empty());

    CHECK(validate_character(trivial_qi()).valid);
    CHECK(validate_character(norm_qi()).valid);
    CHECK(validate_character(order4_qi()).valid);

    // order-4 factor with the wrong exponent breaks torsion triviality
    FactorCharacter f{make_split_prime(mk4(2, 1)), 2, 4, 3, 0};
    auto bad2 = make_hecke_character(F4(), F4(), ExponentTuple{{2, 1}},
                                     FiniteOrderCharacter(F4(), F4(), {f}, std::nullopt));
    CHECK_FALSE(validate_character(bad2).valid);
}

TEST_CASE("validation over Q(zeta_8): unit-kernel condition constrains the type") {
    auto rep = validate_character(
        make_hecke_character(F8(), F8(), ExponentTuple{{1, 1, 1, 1}}, FiniteOrderCharacter::trivial(F8(), F8())));
    CHECK(rep.valid);  // prod sigma(u) = norm(u) = 1

    auto rep2 = validate_character(
        make_hecke_character(F8(), F8(), ExponentTuple{{1, 0, 0, 0}}, FiniteOrderCharacter::trivial(F8(), F8())));
    CHECK_FALSE(rep2.valid);  // 1+zeta-zeta^3 itself is not a root of unity

    // the order-2 finite part at the norm-17 prime 1+2zeta stays valid
    auto p17 = make_split_prime(F8()->element(std::vector<Int>{1, 2, 0, 0}));
    FiniteOrderCharacter fin(F8(), F8(), {FactorCharacter{p17, 3, 8, 4, 0}}, std::nullopt);
    CHECK(fin.factors()[0].omega == 8);  // 1 + 2*8 = 17 = 0 mod 17
    auto chi = make_hecke_character(F8(), F8(), ExponentTuple{{2, 2, 2, 2}}, std::move(fin));
    CHECK(validate_character(chi).valid);
    CHECK(character_order_data(chi) == std::pair<long, u64>{2, 2});
}

TEST_CASE("evaluation at split primes: frozen examples") {
    auto r13 = make_split_prime(mk4(3, 2));
    auto v = evaluate_on_prime(canonical_qi(), r13);
    CHECK(to_algebraic_integer(v) == mk4(3, 2));  // 3+2i = 1 mod (1+i)^3

    auto r5 = make_split_prime(mk4(2, 1));
    auto v5 = evaluate_on_prime(canonical_qi(), r5);
    CHECK(to_algebraic_integer(v5) == mk4(-1, 2));  // eps = i^{3*3} = i; i*(2+i) = -1+2i

    CHECK(evaluate_on_prime(trivial_qi(), r13).is_one());
    CHECK(to_algebraic_integer(evaluate_on_prime(norm_qi(), r13)) == F4()->from_int(13));

    // order-4 character: eps(3+2i) = zeta^{dlog_2(4 mod 5)} = zeta^2 = -1
    auto v4 = evaluate_on_prime(order4_qi(), r13);
    CHECK(to_algebraic_integer(v4) == mk4(-39, -26));

    // support error: the order-4 character cannot be evaluated at its own modulus prime
    CHECK_THROWS_AS(evaluate_on_prime(order4_qi(), r5), DomainError);
}

TEST_CASE("order data") {
    CHECK(character_order_data(canonical_qi()) == std::pair<long, u64>{1, 4});
    CHECK(character_order_data(trivial_qi()) == std::pair<long, u64>{0, 1});
    CHECK(character_order_data(order4_qi()) == std::pair<long, u64>{2, 4});
}

TEST_CASE("generator independence across all torsion units and many primes") {
    SeededRng rng(808);
    std::vector<HeckeCharacter> chars = {canonical_qi(), trivial_qi(), norm_qi(), order4_qi()};
    auto avoid = std::set<Int>{Int(2), Int(5)};
    for (int i = 0; i < 100; ++i) {
        auto sp = sample_split_prime(F4(), 100000, avoid, rng);
        for (const auto& chi : chars) {
            auto base = evaluate_on_prime(chi, sp);
            auto g = F4()->torsion_generator();
            auto beta = sp.generator;
            for (unsigned e = 1; e < F4()->torsion_order(); ++e) {
                beta = beta * g;
                CHECK(evaluate_element(chi, beta) == base);
            }
        }
    }
}

TEST_CASE("values are multiplicative and sit over the monomial by a root of unity") {
    SeededRng rng(555);
    auto chi = order4_qi();
    auto avoid = std::set<Int>{Int(2), Int(5)};
    for (int i = 0; i < 50; ++i) {
        auto a = sample_split_prime(F4(), 100000, avoid, rng);
        auto b = sample_split_prime(F4(), 100000, avoid, rng);
        auto va = evaluate_on_prime(chi, a);
        auto vb = evaluate_on_prime(chi, b);
        CHECK(evaluate_element(chi, a.generator * b.generator) == va * vb);

        // v / monomial is torsion of order dividing the finite order
        auto mon = conjugates_product(a.generator, chi.infinity_type);
        auto ratio = va * invert(mon);
        CHECK(is_root_of_unity(ratio));
        CHECK(ratio.pow(chi.finite_part.order()).is_one());
    }
}

TEST_CASE("finite part equality is by function, not by raw data") {
    auto sp = make_split_prime(mk4(2, 1));
    FiniteOrderCharacter a(F4(), F4(), {FactorCharacter{sp, 2, 4, 2, 0}}, std::nullopt);
    FiniteOrderCharacter b(F4(), F4(), {FactorCharacter{sp, 2, 2, 1, 0}}, std::nullopt);
    CHECK(finite_parts_equal(a, b));  // zeta_4^{2d} = (-1)^d = zeta_2^d
    CHECK(a.canonicalized().factors()[0].t == 2);

    // same data at a different primitive root: 3 = 2^3 mod 5, so k must adjust
    FiniteOrderCharacter c(F4(), F4(), {FactorCharacter{sp, 3, 4, 1, 0}}, std::nullopt);
    FiniteOrderCharacter d(F4(), F4(), {FactorCharacter{sp, 2, 4, 3, 0}}, std::nullopt);
    CHECK(finite_parts_equal(c, d));  // dlog_3 = 3*dlog_2 mod 4
    CHECK_FALSE(finite_parts_equal(a, c));

    // trivial factor (k=0) equals no factor at all
    FiniteOrderCharacter e(F4(), F4(), {FactorCharacter{sp, 2, 4, 0, 0}}, std::nullopt);
    CHECK(finite_parts_equal(e, FiniteOrderCharacter::trivial(F4(), F4())));
    CHECK(e.is_trivial());

    // conjugate-prime factor is a different character
    FiniteOrderCharacter f(F4(), F4(), {FactorCharacter{make_split_prime(mk4(2, -1)), 2, 4, 1, 0}}, std::nullopt);
    FiniteOrderCharacter g(F4(), F4(), {FactorCharacter{sp, 2, 4, 1, 0}}, std::nullopt);
    CHECK_FALSE(finite_parts_equal(f, g));

    // special part
    CHECK(finite_parts_equal(FiniteOrderCharacter(F4(), F4(), {}, SpecialTwoPart{3}),
                             FiniteOrderCharacter(F4(), F4(), {}, SpecialTwoPart{3})));
    CHECK_FALSE(finite_parts_equal(FiniteOrderCharacter(F4(), F4(), {}, SpecialTwoPart{3}),
                                   FiniteOrderCharacter(F4(), F4(), {}, SpecialTwoPart{1})));
    CHECK(finite_parts_equal(FiniteOrderCharacter(F4(), F4(), {}, SpecialTwoPart{0}),
                             FiniteOrderCharacter::trivial(F4(), F4())));

    CHECK(characters_equal(canonical_qi(), canonical_qi()));
    CHECK_FALSE(characters_equal(canonical_qi(), norm_qi()));
}

TEST_CASE("probing equality: equal finite parts agree on random coprime elements") {
    auto sp = make_split_prime(mk4(2, 1));
    FiniteOrderCharacter c(F4(), F4(), {FactorCharacter{sp, 3, 4, 1, 0}}, std::nullopt);
    FiniteOrderCharacter d(F4(), F4(), {FactorCharacter{sp, 2, 4, 3, 0}}, std::nullopt);
    SeededRng rng(321);
    for (int i = 0; i < 300; ++i) {
        auto x = mk4(static_cast<long>(rng.in_range(0, 30)) - 15, static_cast<long>(rng.in_range(0, 30)) - 15);
        if (!c.is_coprime(x)) continue;
        CHECK(c.evaluate(x) == d.evaluate(x));
    }
}
