// Algebraic Hecke characters on K = Q(zeta_N): an infinity type over the
// Galois group plus a finite-order character with square-free degree-one
// modulus (and, for Q(i), the special (1+i)^3 part), evaluated exactly with
// values in a cyclotomic coefficient field L.
#pragma once

#include "reciplab/cyclotomic.hpp"
#include "reciplab/primes.hpp"
#include "reciplab/residue.hpp"

#include <optional>
#include <string>
#include <vector>

namespace reciplab {

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> failures;
    void fail(std::string msg) {
        valid = false;
        failures.push_back(std::move(msg));
    }
};

// Character factor at one split prime P = (pi) of K with residue field F_p:
// x -> zeta_t ^ (k * dlog_g(x mod P)), zeta_t realized in L as the
// (W_L/t)-th power of L's torsion generator. omega (the image of zeta_K in
// F_p picked out by P) is derived from the generator, not configured.
struct FactorCharacter {
    SplitPrime prime;
    u64 g = 0;      // primitive root of F_p
    u64 t = 1;      // value order bound: t | p-1 and t | W_L
    u64 k = 0;      // exponent, 0 <= k < t
    u64 omega = 0;  // derived: zeta_K mod P
};

// The hard-coded residue system for (O_K/(1+i)^3)^* in Q(i): the group has
// order 4 and is generated by the class of i; eps(x) = i^(k * j) where
// x = i^j mod (1+i)^3. Only legal for N = 4.
struct SpecialTwoPart {
    unsigned k = 0;  // 0 <= k < 4
};

class FiniteOrderCharacter {
  public:
    // Validates factor data (generator, primitive root, t | p-1, t | W_L,
    // k < t, pairwise non-associate primes) and derives each omega.
    FiniteOrderCharacter(FieldPtr K, FieldPtr L, std::vector<FactorCharacter> factors,
                         std::optional<SpecialTwoPart> special);

    static FiniteOrderCharacter trivial(FieldPtr K, FieldPtr L) {
        return FiniteOrderCharacter(std::move(K), std::move(L), {}, std::nullopt);
    }

    const FieldPtr& base_field() const { return K_; }
    const FieldPtr& value_field() const { return L_; }
    const std::vector<FactorCharacter>& factors() const { return factors_; }
    const std::optional<SpecialTwoPart>& special() const { return special_; }

    // Rational primes under the modulus (the ramification set contribution).
    std::vector<Int> support() const;

    bool is_coprime(const AlgebraicInteger& x) const;

    // eps(x) in L; DomainError when x is not coprime to the modulus.
    AlgebraicInteger evaluate(const AlgebraicInteger& x) const;

    // Character order: lcm of the factor orders t/gcd(t,k) (and the special
    // part's order).
    u64 order() const;
    bool is_trivial() const { return order() == 1; }

    // Same character with trivial factors dropped and each (t, k) reduced to
    // lowest terms; factors sorted by (p, generator).
    FiniteOrderCharacter canonicalized() const;

  private:
    FieldPtr K_, L_;
    std::vector<FactorCharacter> factors_;
    std::optional<SpecialTwoPart> special_;
};

struct HeckeCharacter {
    FieldPtr K, L;
    ExponentTuple infinity_type;  // aligned with K->galois_residues()
    FiniteOrderCharacter finite_part;
};

HeckeCharacter make_hecke_character(FieldPtr K, FieldPtr L, ExponentTuple infinity_type,
                                    FiniteOrderCharacter finite_part);

// Checks the two character invariants exactly: triviality of
// eps(u) * prod_sigma sigma(u)^{m_sigma} on every torsion unit u coprime to
// the modulus, and root-of-unity value on every configured non-torsion unit.
ValidationReport validate_character(const HeckeCharacter& chi);

// eps(x) * prod_sigma sigma(x)^{m_sigma} in L for any x coprime to the
// modulus (the evaluation formula applied to an arbitrary element).
FieldElement evaluate_element(const HeckeCharacter& chi, const AlgebraicInteger& x);

// Character value at a split prime, via its stored generator; independent of
// the generator choice for valid characters.
FieldElement evaluate_on_prime(const HeckeCharacter& chi, const SplitPrime& r);

// (max |m_sigma|, finite order) — the search bounds reconstruction needs.
std::pair<long, u64> character_order_data(const HeckeCharacter& chi);

// Equality as functions on all residues coprime to both moduli: canonical
// forms must agree factor-by-factor (same ideal, same value on the canonical
// primitive root) and in the special part.
bool finite_parts_equal(const FiniteOrderCharacter& a, const FiniteOrderCharacter& b);

// Same field data, identical infinity type, equal finite parts.
bool characters_equal(const HeckeCharacter& a, const HeckeCharacter& b);

// j with x = i^j mod (1+i)^3 in Z[i]; DomainError if norm(x) is even.
unsigned special_two_exponent(const AlgebraicInteger& x);

// The image of zeta_N in the residue field at P: the unique omega with
// P | zeta - omega.
u64 residue_zeta_image(const SplitPrime& P);

}  // namespace reciplab
