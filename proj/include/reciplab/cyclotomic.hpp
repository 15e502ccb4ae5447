// Exact arithmetic in cyclotomic fields Q(zeta_N) for the supported
// class-number-one conductors. Elements are coordinate vectors in the power
// basis 1, zeta, ..., zeta^{phi(N)-1}; all arithmetic is exact (GMP).
#pragma once

#include "reciplab/numeric.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace reciplab {

class CyclotomicField;
template <typename C>
class ElementT;

using AlgebraicInteger = ElementT<Int>;
using FieldElement = ElementT<Rat>;

// Automorphism zeta -> zeta^a of Q(zeta_N), gcd(a, N) = 1. Composition is
// multiplication of exponents mod N.
struct GaloisAutomorphism {
    unsigned a;
    friend bool operator==(const GaloisAutomorphism&, const GaloisAutomorphism&) = default;
};

// Integer exponent vector indexed by the Galois group, stored in the order of
// CyclotomicField::galois_residues().
struct ExponentTuple {
    std::vector<long> m;

    bool all_zero() const {
        return std::all_of(m.begin(), m.end(), [](long v) { return v == 0; });
    }
    long max_abs() const {
        long b = 0;
        for (long v : m) b = std::max(b, v < 0 ? -v : v);
        return b;
    }
    long sum() const {
        long s = 0;
        for (long v : m) s += v;
        return s;
    }
    friend bool operator==(const ExponentTuple&, const ExponentTuple&) = default;
    friend auto operator<=>(const ExponentTuple& x, const ExponentTuple& y) { return x.m <=> y.m; }
};

std::ostream& operator<<(std::ostream& os, const ExponentTuple& t);

class CyclotomicField : public std::enable_shared_from_this<CyclotomicField> {
  public:
    // Conductors whose cyclotomic field has class number one and which the
    // rest of the pipeline supports.
    static bool supported_conductor(unsigned N);

    // Field with the built-in unit basis for N (empty for unit rank 0).
    static std::shared_ptr<const CyclotomicField> make(unsigned N);
    // Field with a configured unit basis; every unit is validated (norm +-1,
    // not a root of unity). Completeness as a fundamental system is the
    // configuration's responsibility and is not checked.
    static std::shared_ptr<const CyclotomicField> make(unsigned N,
                                                      const std::vector<std::vector<Int>>& unit_coords);

    unsigned conductor() const { return N_; }
    unsigned degree() const { return degree_; }
    // Residues a coprime to N, sorted; the Galois group under a -> (zeta -> zeta^a).
    const std::vector<unsigned>& galois_residues() const { return galois_; }
    std::vector<GaloisAutomorphism> automorphisms() const;
    GaloisAutomorphism automorphism(unsigned a) const;

    // Number of roots of unity: 2N for odd N, N for even N.
    unsigned torsion_order() const { return torsion_order_; }

    AlgebraicInteger zero() const;
    AlgebraicInteger one() const;
    AlgebraicInteger zeta() const;
    AlgebraicInteger from_int(const Int& n) const;
    AlgebraicInteger element(std::vector<Int> coords) const;
    FieldElement element(std::vector<Rat> coords) const;
    // Generator of the torsion subgroup: zeta for even N, -zeta for odd N.
    AlgebraicInteger torsion_generator() const;
    // torsion_generator()^e, exponent taken mod torsion_order().
    AlgebraicInteger root_of_unity(long e) const;

    const std::vector<AlgebraicInteger>& unit_basis() const { return units_; }

    // Coefficients of the N-th cyclotomic polynomial, constant term first.
    const std::vector<Int>& cyclotomic_polynomial() const { return phi_; }

    // zeta^k (0 <= k < N) expressed in the power basis.
    const std::vector<Int>& zeta_power(unsigned k) const { return zeta_pow_[k % N_]; }

    // Reduction rows: zeta^{degree+i} in the power basis, 0 <= i <= degree-2.
    const std::vector<std::vector<Int>>& reduction_rows() const { return red_; }

  private:
    CyclotomicField(unsigned N, const std::vector<std::vector<Int>>& unit_coords);

    unsigned N_;
    unsigned degree_;
    unsigned torsion_order_;
    std::vector<unsigned> galois_;
    std::vector<Int> phi_;
    std::vector<std::vector<Int>> red_;
    std::vector<std::vector<Int>> zeta_pow_;
    std::vector<AlgebraicInteger> units_;
};

using FieldPtr = std::shared_ptr<const CyclotomicField>;

namespace detail {
inline void coeff_assign(Rat& dst, const Int& src) { dst = src; }
inline void coeff_assign(Rat& dst, const Rat& src) { dst = src; }
inline void coeff_assign(Int& dst, const Int& src) { dst = src; }
// gmpxx only canonicalizes fractions produced by arithmetic, not by the
// (num, den) constructor; force the invariant on entry.
inline void coeff_canonicalize(Rat& v) { v.canonicalize(); }
inline void coeff_canonicalize(Int&) {}
}  // namespace detail

// An element of Q(zeta_N) with coordinates of type C (Int for Z[zeta_N],
// Rat for the full field). Immutable value type; all operations are pure.
template <typename C>
class ElementT {
  public:
    ElementT() = default;
    ElementT(FieldPtr field, std::vector<C> coords) : field_(std::move(field)), coords_(std::move(coords)) {
        if (coords_.size() != field_->degree()) throw DomainError("element: wrong coordinate count");
        for (C& v : coords_) detail::coeff_canonicalize(v);
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<C>& coords() const { return coords_; }

    bool is_zero() const {
        return std::all_of(coords_.begin(), coords_.end(), [](const C& c) { return c == 0; });
    }
    bool is_one() const {
        if (coords_[0] != 1) return false;
        for (size_t i = 1; i < coords_.size(); ++i)
            if (coords_[i] != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < coords_.size(); ++i)
            if (coords_[i] != 0) return false;
        return true;
    }
    const C& rational_value() const {
        if (!is_rational()) throw DomainError("element is not rational");
        return coords_[0];
    }

    friend bool operator==(const ElementT& x, const ElementT& y) {
        return x.field_->conductor() == y.field_->conductor() && x.coords_ == y.coords_;
    }

    ElementT operator-() const {
        std::vector<C> c(coords_);
        for (auto& v : c) v = -v;
        return ElementT(field_, std::move(c));
    }

    friend ElementT operator+(const ElementT& x, const ElementT& y) {
        x.check_same_field(y);
        std::vector<C> c(x.coords_);
        for (size_t i = 0; i < c.size(); ++i) c[i] += y.coords_[i];
        return ElementT(x.field_, std::move(c));
    }
    friend ElementT operator-(const ElementT& x, const ElementT& y) {
        x.check_same_field(y);
        std::vector<C> c(x.coords_);
        for (size_t i = 0; i < c.size(); ++i) c[i] -= y.coords_[i];
        return ElementT(x.field_, std::move(c));
    }
    friend ElementT operator*(const ElementT& x, const ElementT& y) {
        x.check_same_field(y);
        const size_t d = x.coords_.size();
        std::vector<C> prod(2 * d - 1);
        for (size_t i = 0; i < d; ++i) {
            if (x.coords_[i] == 0) continue;
            for (size_t j = 0; j < d; ++j) prod[i + j] += x.coords_[i] * y.coords_[j];
        }
        // Fold zeta^{d+i} back into the basis via the reduction rows.
        const auto& rows = x.field_->reduction_rows();
        std::vector<C> c(prod.begin(), prod.begin() + d);
        for (size_t i = d; i < prod.size(); ++i) {
            if (prod[i] == 0) continue;
            const auto& row = rows[i - d];
            for (size_t j = 0; j < d; ++j) c[j] += prod[i] * row[j];
        }
        return ElementT(x.field_, std::move(c));
    }

    ElementT pow(unsigned long e) const {
        ElementT r = field_unity();
        ElementT b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    ElementT galois(const GaloisAutomorphism& sigma) const {
        const size_t d = coords_.size();
        const unsigned N = field_->conductor();
        std::vector<C> c(d);
        for (size_t i = 0; i < d; ++i) {
            if (coords_[i] == 0) continue;
            const auto& row = field_->zeta_power(static_cast<unsigned>((static_cast<unsigned long>(sigma.a) * i) % N));
            for (size_t j = 0; j < d; ++j) c[j] += coords_[i] * row[j];
        }
        return ElementT(field_, std::move(c));
    }

    // prod_{sigma in Gal} sigma(x); always rational.
    C norm() const {
        auto sigmas = field_->galois_residues();
        ElementT p = *this;
        for (size_t k = 1; k < sigmas.size(); ++k) p = p * galois(GaloisAutomorphism{sigmas[k]});
        if (!p.is_rational()) throw DomainError("norm: conjugate product not rational (internal)");
        return p.coords_[0];
    }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const ElementT& x) {
        bool first = true;
        for (size_t i = 0; i < x.coords_.size(); ++i) {
            if (x.coords_[i] == 0) continue;
            if (!first) os << " + ";
            os << x.coords_[i];
            if (i >= 1) os << "*z" << (i > 1 ? std::to_string(i) : std::string());
            first = false;
        }
        if (first) os << "0";
        return os;
    }

    void check_same_field(const ElementT& y) const {
        if (field_->conductor() != y.field_->conductor()) throw DomainError("elements from different fields");
    }

  private:
    ElementT field_unity() const {
        std::vector<C> c(field_->degree());
        detail::coeff_assign(c[0], Int(1));
        return ElementT(field_, std::move(c));
    }

    FieldPtr field_;
    std::vector<C> coords_;
};

// -- conversions --------------------------------------------------------------

FieldElement to_field_element(const AlgebraicInteger& x);
bool is_integral(const FieldElement& x);
AlgebraicInteger to_algebraic_integer(const FieldElement& x);

// -- field operations ---------------------------------------------------------

// Multiplicative inverse, via the conjugate product divided by the norm.
FieldElement invert(const FieldElement& x);
FieldElement invert(const AlgebraicInteger& x);

// x^e with e possibly negative (inverts first); x != 0 when e < 0.
FieldElement power(const FieldElement& x, long e);

// prod_sigma sigma(x)^{m_sigma}, exponents aligned with galois_residues().
FieldElement conjugates_product(const FieldElement& x, const ExponentTuple& m);
FieldElement conjugates_product(const AlgebraicInteger& x, const ExponentTuple& m);
// All-nonnegative exponent variant staying in Z[zeta_N].
AlgebraicInteger conjugates_product_integral(const AlgebraicInteger& x, const ExponentTuple& m);

// True iff x^W = 1 for W the field's torsion order.
bool is_root_of_unity(const FieldElement& x);
bool is_root_of_unity(const AlgebraicInteger& x);
// Multiplicative order of a root of unity (divisor of W); error if not torsion.
unsigned torsion_element_order(const FieldElement& x);
// Exponent e with x = torsion_generator()^e, if x is torsion.
std::optional<unsigned> torsion_exponent(const FieldElement& x);

// True iff norm(x) = +-1.
bool is_unit(const AlgebraicInteger& x);

// x / y when the quotient is an algebraic integer.
std::optional<AlgebraicInteger> try_divide_exact(const AlgebraicInteger& x, const AlgebraicInteger& y);

// Image of x under Q(zeta_N) -> Q(zeta_M), N | M, zeta_N -> zeta_M^{M/N}.
AlgebraicInteger embed(const AlgebraicInteger& x, const FieldPtr& target);
FieldElement embed(const FieldElement& x, const FieldPtr& target);

}  // namespace reciplab
