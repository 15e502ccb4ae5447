#include "reciplab/cyclotomic.hpp"

#include <map>
#include <numeric>

namespace reciplab {

namespace {

const std::vector<unsigned> kSupported = {1, 3, 4, 5, 8, 12, 15, 16, 20, 24};

unsigned euler_phi(unsigned n) {
    unsigned r = n;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

using Poly = std::vector<Int>;  // dense, constant term first, no trailing zeros

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// a / b for monic b dividing a exactly.
Poly poly_div_exact(Poly a, const Poly& b) {
    if (a.size() < b.size()) throw DomainError("poly_div_exact: degree underflow");
    Poly q(a.size() - b.size() + 1);
    for (size_t k = q.size(); k-- > 0;) {
        Int c = a[k + b.size() - 1];
        q[k] = c;
        if (c == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) a[k + j] -= c * b[j];
    }
    for (const Int& r : a)
        if (r != 0) throw DomainError("poly_div_exact: nonzero remainder");
    return q;
}

Poly cyclotomic_poly(unsigned n) {
    static std::map<unsigned, Poly> memo;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    Poly p(n + 1);  // x^n - 1
    p[0] = -1;
    p[n] = 1;
    for (unsigned d = 1; d < n; ++d)
        if (n % d == 0) p = poly_div_exact(std::move(p), cyclotomic_poly(d));
    memo[n] = p;
    return p;
}

// Built-in non-torsion units (power-basis coordinates). Rank-zero fields
// (N in {1,3,4}) have none. For the rest we ship one convenient cyclotomic
// unit: 1 - zeta when Phi_N(1) = 1, otherwise a hand-picked unit. These need
// not generate the full unit group; downstream code only requires configured
// units to be non-torsion units, adding more via configuration is supported.
std::vector<std::vector<long>> builtin_units(unsigned N) {
    switch (N) {
        case 5:  return {{1, 1, 0, 0}};                               // 1 + z
        case 8:  return {{1, 1, 0, -1}};                              // 1 + z - z^3 = 1 + sqrt2
        case 12: return {{1, -1, 0, 0}};                              // 1 - z
        case 15: return {{1, -1, 0, 0, 0, 0, 0, 0}};                  // 1 - z
        case 16: return {{1, 1, 1, 0, 0, 0, 0, 0}};                   // 1 + z + z^2
        case 20: return {{1, -1, 0, 0, 0, 0, 0, 0}};                  // 1 - z
        case 24: return {{1, -1, 0, 0, 0, 0, 0, 0}};                  // 1 - z
        default: return {};
    }
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const ExponentTuple& t) {
    os << "(";
    for (size_t i = 0; i < t.m.size(); ++i) os << (i ? "," : "") << t.m[i];
    return os << ")";
}

bool CyclotomicField::supported_conductor(unsigned N) {
    return std::find(kSupported.begin(), kSupported.end(), N) != kSupported.end();
}

CyclotomicField::CyclotomicField(unsigned N, const std::vector<std::vector<Int>>& unit_coords) : N_(N) {
    if (!supported_conductor(N)) throw ConfigError("unsupported conductor N=" + std::to_string(N));
    degree_ = euler_phi(N);
    torsion_order_ = (N % 2 == 1) ? 2 * N : N;
    for (unsigned a = 1; a <= N; ++a)
        if (std::gcd(a, N) == 1) galois_.push_back(a);  // N=1 contributes the single residue 1
    phi_ = cyclotomic_poly(N);

    // zeta^{degree} = -(phi minus its leading term); higher rows by shifting.
    std::vector<Int> top(degree_);
    for (unsigned j = 0; j < degree_; ++j) top[j] = -phi_[j];
    if (degree_ >= 2) {
        red_.push_back(top);
        for (unsigned i = 1; i + 1 < degree_; ++i) {
            const auto& prev = red_.back();
            std::vector<Int> row(degree_);
            for (unsigned j = 0; j + 1 < degree_; ++j) row[j + 1] = prev[j];
            const Int& carry = prev[degree_ - 1];
            if (carry != 0)
                for (unsigned j = 0; j < degree_; ++j) row[j] += carry * top[j];
            red_.push_back(std::move(row));
        }
    }

    zeta_pow_.resize(N);
    zeta_pow_[0] = std::vector<Int>(degree_);
    zeta_pow_[0][0] = 1;
    for (unsigned k = 1; k < N; ++k) {
        const auto& prev = zeta_pow_[k - 1];
        std::vector<Int> row(degree_);
        for (unsigned j = 0; j + 1 < degree_; ++j) row[j + 1] = prev[j];
        const Int& carry = prev[degree_ - 1];
        if (carry != 0)
            for (unsigned j = 0; j < degree_; ++j) row[j] += carry * top[j];
        zeta_pow_[k] = std::move(row);
    }
}

std::shared_ptr<const CyclotomicField> CyclotomicField::make(unsigned N) {
    std::vector<std::vector<Int>> coords;
    for (const auto& u : builtin_units(N)) coords.emplace_back(u.begin(), u.end());
    return make(N, coords);
}

std::shared_ptr<const CyclotomicField> CyclotomicField::make(unsigned N,
                                                             const std::vector<std::vector<Int>>& unit_coords) {
    auto f = std::shared_ptr<CyclotomicField>(new CyclotomicField(N, unit_coords));
    for (const auto& c : unit_coords) {
        AlgebraicInteger u = f->element(c);
        if (!is_unit(u)) throw ConfigError("configured unit has norm != +-1: " + u.str());
        if (is_root_of_unity(u)) throw ConfigError("configured unit is a root of unity: " + u.str());
        f->units_.push_back(std::move(u));
    }
    return f;
}

std::vector<GaloisAutomorphism> CyclotomicField::automorphisms() const {
    std::vector<GaloisAutomorphism> v;
    for (unsigned a : galois_) v.push_back({a});
    return v;
}

GaloisAutomorphism CyclotomicField::automorphism(unsigned a) const {
    unsigned r = a % N_;
    if (N_ == 1) r = 1;
    if (r == 0 || std::gcd(r, N_) != 1)
        throw DomainError("not an automorphism exponent for N=" + std::to_string(N_) + ": " + std::to_string(a));
    return {r};
}

AlgebraicInteger CyclotomicField::zero() const {
    return AlgebraicInteger(shared_from_this(), std::vector<Int>(degree_));
}

AlgebraicInteger CyclotomicField::one() const { return from_int(1); }

AlgebraicInteger CyclotomicField::from_int(const Int& n) const {
    std::vector<Int> c(degree_);
    c[0] = n;
    return AlgebraicInteger(shared_from_this(), std::move(c));
}

AlgebraicInteger CyclotomicField::zeta() const {
    return AlgebraicInteger(shared_from_this(), zeta_pow_[1 % N_]);
}

AlgebraicInteger CyclotomicField::element(std::vector<Int> coords) const {
    return AlgebraicInteger(shared_from_this(), std::move(coords));
}

FieldElement CyclotomicField::element(std::vector<Rat> coords) const {
    return FieldElement(shared_from_this(), std::move(coords));
}

AlgebraicInteger CyclotomicField::torsion_generator() const {
    return N_ % 2 == 0 ? zeta() : -zeta();
}

AlgebraicInteger CyclotomicField::root_of_unity(long e) const {
    long w = torsion_order_;
    long r = e % w;
    if (r < 0) r += w;
    return torsion_generator().pow(static_cast<unsigned long>(r));
}

// -- conversions --------------------------------------------------------------

FieldElement to_field_element(const AlgebraicInteger& x) {
    std::vector<Rat> c(x.coords().begin(), x.coords().end());
    return FieldElement(x.field(), std::move(c));
}

bool is_integral(const FieldElement& x) {
    for (const Rat& c : x.coords())
        if (c.get_den() != 1) return false;
    return true;
}

AlgebraicInteger to_algebraic_integer(const FieldElement& x) {
    std::vector<Int> c;
    c.reserve(x.coords().size());
    for (const Rat& v : x.coords()) {
        if (v.get_den() != 1) throw DomainError("element is not integral: " + x.str());
        c.push_back(v.get_num());
    }
    return AlgebraicInteger(x.field(), std::move(c));
}

// -- field operations ---------------------------------------------------------

namespace {
FieldElement scale(const FieldElement& x, const Rat& s) {
    std::vector<Rat> c(x.coords());
    for (auto& v : c) v *= s;
    return FieldElement(x.field(), std::move(c));
}
}  // namespace

FieldElement invert(const FieldElement& x) {
    if (x.is_zero()) throw DomainError("invert: zero element");
    const auto& sigmas = x.field()->galois_residues();
    if (sigmas.size() == 1)  // degree-one field: plain rational inverse
        return scale(to_field_element(x.field()->one()), Rat(1) / x.coords()[0]);
    FieldElement acc = x.galois(GaloisAutomorphism{sigmas[1]});
    for (size_t k = 2; k < sigmas.size(); ++k) acc = acc * x.galois(GaloisAutomorphism{sigmas[k]});
    FieldElement nx = x * acc;
    if (!nx.is_rational()) throw DomainError("invert: norm not rational (internal)");
    return scale(acc, Rat(1) / nx.coords()[0]);
}

FieldElement invert(const AlgebraicInteger& x) { return invert(to_field_element(x)); }

FieldElement power(const FieldElement& x, long e) {
    if (e >= 0) return x.pow(static_cast<unsigned long>(e));
    return invert(x).pow(static_cast<unsigned long>(-e));
}

FieldElement conjugates_product(const FieldElement& x, const ExponentTuple& m) {
    const auto& sigmas = x.field()->galois_residues();
    if (m.m.size() != sigmas.size()) throw DomainError("exponent tuple has wrong length");
    FieldElement r = to_field_element(x.field()->one());
    for (size_t k = 0; k < sigmas.size(); ++k) {
        if (m.m[k] == 0) continue;
        r = r * power(x.galois(GaloisAutomorphism{sigmas[k]}), m.m[k]);
    }
    return r;
}

FieldElement conjugates_product(const AlgebraicInteger& x, const ExponentTuple& m) {
    return conjugates_product(to_field_element(x), m);
}

AlgebraicInteger conjugates_product_integral(const AlgebraicInteger& x, const ExponentTuple& m) {
    const auto& sigmas = x.field()->galois_residues();
    if (m.m.size() != sigmas.size()) throw DomainError("exponent tuple has wrong length");
    AlgebraicInteger r = x.field()->one();
    for (size_t k = 0; k < sigmas.size(); ++k) {
        if (m.m[k] == 0) continue;
        if (m.m[k] < 0) throw DomainError("conjugates_product_integral: negative exponent");
        r = r * x.galois(GaloisAutomorphism{sigmas[k]}).pow(static_cast<unsigned long>(m.m[k]));
    }
    return r;
}

bool is_root_of_unity(const FieldElement& x) {
    if (x.is_zero()) return false;
    return x.pow(x.field()->torsion_order()).is_one();
}

bool is_root_of_unity(const AlgebraicInteger& x) { return is_root_of_unity(to_field_element(x)); }

unsigned torsion_element_order(const FieldElement& x) {
    if (!is_root_of_unity(x)) throw DomainError("not a root of unity: " + x.str());
    unsigned W = x.field()->torsion_order();
    for (unsigned t = 1; t <= W; ++t)
        if (W % t == 0 && x.pow(t).is_one()) return t;
    throw DomainError("torsion order not found (internal)");
}

std::optional<unsigned> torsion_exponent(const FieldElement& x) {
    unsigned W = x.field()->torsion_order();
    FieldElement g = to_field_element(x.field()->torsion_generator());
    FieldElement p = to_field_element(x.field()->one());
    for (unsigned e = 0; e < W; ++e) {
        if (p == x) return e;
        p = p * g;
    }
    return std::nullopt;
}

bool is_unit(const AlgebraicInteger& x) {
    Int n = x.norm();
    return n == 1 || n == -1;
}

std::optional<AlgebraicInteger> try_divide_exact(const AlgebraicInteger& x, const AlgebraicInteger& y) {
    if (y.is_zero()) throw DomainError("try_divide_exact: divisor is zero");
    FieldElement q = to_field_element(x) * invert(y);
    if (!is_integral(q)) return std::nullopt;
    return to_algebraic_integer(q);
}

namespace {
template <typename C>
ElementT<C> embed_impl(const ElementT<C>& x, const FieldPtr& target) {
    unsigned N = x.field()->conductor();
    unsigned M = target->conductor();
    if (M % N != 0) throw DomainError("embed: conductor " + std::to_string(N) + " does not divide " + std::to_string(M));
    unsigned stride = M / N;
    std::vector<C> c(target->degree());
    for (size_t i = 0; i < x.coords().size(); ++i) {
        if (x.coords()[i] == 0) continue;
        const auto& row = target->zeta_power(static_cast<unsigned>((static_cast<unsigned long>(stride) * i) % M));
        for (size_t j = 0; j < c.size(); ++j) c[j] += x.coords()[i] * row[j];
    }
    return ElementT<C>(target, std::move(c));
}
}  // namespace

AlgebraicInteger embed(const AlgebraicInteger& x, const FieldPtr& target) { return embed_impl(x, target); }
FieldElement embed(const FieldElement& x, const FieldPtr& target) { return embed_impl(x, target); }

}  // namespace reciplab
