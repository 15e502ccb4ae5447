#include "reciplab/hecke.hpp"

#include <algorithm>
#include <numeric>

namespace reciplab {

namespace {

// The unique image of zeta_K in F_p singled out by the prime (pi):
// omega with pi | zeta - omega.
u64 derive_omega(const SplitPrime& sp) {
    const auto& K = sp.generator.field();
    if (!sp.rational_norm.fits_ulong_p())
        throw ConfigError("factor prime norm too large: " + sp.rational_norm.get_str());
    u64 p = sp.rational_norm.get_ui();
    u64 found = 0;
    bool have = false;
    for (u64 w : zeta_images(K->conductor(), p)) {
        auto diff = K->zeta() - K->from_int(Int(static_cast<unsigned long>(w)));
        if (try_divide_exact(diff, sp.generator).has_value()) {
            if (have) throw ConfigError("omega derivation ambiguous (internal)");
            found = w;
            have = true;
        }
    }
    if (!have) throw ConfigError("no residue image of zeta matches generator " + sp.generator.str());
    return found;
}

bool associates(const AlgebraicInteger& a, const AlgebraicInteger& b) {
    auto r = try_divide_exact(a, b);
    return r.has_value() && is_unit(*r);
}

}  // namespace

unsigned special_two_exponent(const AlgebraicInteger& x) {
    const auto& F = x.field();
    if (F->conductor() != 4) throw DomainError("special two-part lives in Q(i) only");
    if (x.norm() % 2 == 0) throw DomainError("element not coprime to 1+i: " + x.str());
    auto modulus = F->element(std::vector<Int>{-2, 2});  // (1+i)^3
    auto u = F->one();
    for (unsigned j = 0; j < 4; ++j) {
        if (try_divide_exact(x - u, modulus).has_value()) return j;
        u = u * F->zeta();
    }
    throw DomainError("residue of " + x.str() + " not a power of i mod (1+i)^3 (internal)");
}

FiniteOrderCharacter::FiniteOrderCharacter(FieldPtr K, FieldPtr L, std::vector<FactorCharacter> factors,
                                           std::optional<SpecialTwoPart> special)
    : K_(std::move(K)), L_(std::move(L)), factors_(std::move(factors)), special_(special) {
    if (L_->conductor() % K_->conductor() != 0)
        throw ConfigError("coefficient field does not contain the base field");
    if (special_) {
        if (K_->conductor() != 4) throw ConfigError("special two-part requires N = 4");
        if (special_->k >= 4) throw ConfigError("special two-part exponent must be in [0, 4)");
    }
    const u64 W = L_->torsion_order();
    for (auto& f : factors_) {
        if (f.prime.generator.field()->conductor() != K_->conductor())
            throw ConfigError("factor prime from a different field");
        if (!generates_split_prime(f.prime.generator))
            throw ConfigError("factor generator is not a split prime: " + f.prime.generator.str());
        if (!f.prime.rational_norm.fits_ulong_p()) throw ConfigError("factor norm out of range");
        u64 p = f.prime.rational_norm.get_ui();
        if (f.t == 0 || (p - 1) % f.t != 0)
            throw ConfigError("factor order t=" + std::to_string(f.t) + " does not divide p-1");
        if (W % f.t != 0)
            throw ConfigError("factor order t=" + std::to_string(f.t) + " does not divide the torsion order of L");
        if (f.k >= f.t) throw ConfigError("factor exponent k must satisfy 0 <= k < t");
        if (multiplicative_order(f.g, p) != p - 1)
            throw ConfigError("configured g=" + std::to_string(f.g) + " is not a primitive root mod " + std::to_string(p));
        f.omega = derive_omega(f.prime);
    }
    for (size_t i = 0; i < factors_.size(); ++i)
        for (size_t j = i + 1; j < factors_.size(); ++j)
            if (factors_[i].prime.rational_norm == factors_[j].prime.rational_norm &&
                associates(factors_[i].prime.generator, factors_[j].prime.generator))
                throw ConfigError("modulus factors are associate (not square-free)");
}

std::vector<Int> FiniteOrderCharacter::support() const {
    std::vector<Int> s;
    if (special_) s.push_back(2);
    for (const auto& f : factors_) s.push_back(f.prime.rational_norm);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

bool FiniteOrderCharacter::is_coprime(const AlgebraicInteger& x) const {
    if (x.field()->conductor() != K_->conductor()) throw DomainError("element from a different field");
    if (x.is_zero()) return false;
    if (special_ && x.norm() % 2 == 0) return false;
    for (const auto& f : factors_) {
        ReductionSite site{K_->conductor(), f.prime.rational_norm.get_ui(), f.omega};
        if (reduce(x, site) == 0) return false;
    }
    return true;
}

AlgebraicInteger FiniteOrderCharacter::evaluate(const AlgebraicInteger& x) const {
    if (x.field()->conductor() != K_->conductor()) throw DomainError("element from a different field");
    const u64 W = L_->torsion_order();
    u64 e = 0;  // exponent of L's torsion generator, mod W
    for (const auto& f : factors_) {
        u64 p = f.prime.rational_norm.get_ui();
        ReductionSite site{K_->conductor(), p, f.omega};
        u64 rx = reduce(x, site);
        if (rx == 0) throw DomainError("element not coprime to the modulus: " + x.str());
        u64 d = discrete_log(f.g, rx, p);
        e = (e + (W / f.t) % W * ((f.k * d) % f.t)) % W;
    }
    if (special_) {
        unsigned j = special_two_exponent(x);  // throws when not coprime to 1+i
        e = (e + (W / 4) * ((static_cast<u64>(special_->k) * j) % 4)) % W;
    }
    return L_->root_of_unity(static_cast<long>(e));
}

u64 FiniteOrderCharacter::order() const {
    u64 o = 1;
    for (const auto& f : factors_) o = std::lcm(o, f.t / std::gcd(f.t, f.k == 0 ? f.t : f.k));
    if (special_) o = std::lcm(o, u64{4} / std::gcd(u64{4}, special_->k == 0 ? u64{4} : u64{special_->k}));
    return o;
}

FiniteOrderCharacter FiniteOrderCharacter::canonicalized() const {
    std::vector<FactorCharacter> fs;
    for (const auto& f : factors_) {
        if (f.k % f.t == 0) continue;  // trivial factor
        u64 g = std::gcd(f.t, f.k);
        FactorCharacter c = f;
        c.t = f.t / g;
        c.k = f.k / g;
        fs.push_back(std::move(c));
    }
    std::sort(fs.begin(), fs.end(), [](const FactorCharacter& a, const FactorCharacter& b) {
        int c0 = cmp(a.prime.rational_norm, b.prime.rational_norm);
        if (c0 != 0) return c0 < 0;
        return a.prime.generator.coords() < b.prime.generator.coords();
    });
    std::optional<SpecialTwoPart> sp = special_;
    if (sp && sp->k % 4 == 0) sp.reset();
    return FiniteOrderCharacter(K_, L_, std::move(fs), sp);
}

HeckeCharacter make_hecke_character(FieldPtr K, FieldPtr L, ExponentTuple infinity_type,
                                    FiniteOrderCharacter finite_part) {
    if (infinity_type.m.size() != K->galois_residues().size())
        throw ConfigError("infinity type length != Galois group size");
    if (finite_part.base_field()->conductor() != K->conductor() ||
        finite_part.value_field()->conductor() != L->conductor())
        throw ConfigError("finite part field mismatch");
    return HeckeCharacter{std::move(K), std::move(L), std::move(infinity_type), std::move(finite_part)};
}

FieldElement evaluate_element(const HeckeCharacter& chi, const AlgebraicInteger& x) {
    auto mon = conjugates_product(x, chi.infinity_type);  // in K
    auto monL = embed(mon, chi.L);
    auto eps = chi.finite_part.evaluate(x);
    return monL * to_field_element(eps);
}

FieldElement evaluate_on_prime(const HeckeCharacter& chi, const SplitPrime& r) {
    for (const Int& p : chi.finite_part.support())
        if (p == r.rational_norm) throw DomainError("prime lies in the character support: " + p.get_str());
    return evaluate_element(chi, r.generator);
}

ValidationReport validate_character(const HeckeCharacter& chi) {
    ValidationReport rep;
    const auto& K = chi.K;
    // torsion units coprime to the modulus must evaluate to exactly 1
    for (unsigned e = 0; e < K->torsion_order(); ++e) {
        auto u = K->root_of_unity(static_cast<long>(e));
        if (!chi.finite_part.is_coprime(u)) continue;  // cannot happen: units are coprime
        auto v = evaluate_element(chi, u);
        if (!v.is_one()) rep.fail("torsion unit " + u.str() + " evaluates to " + v.str() + " != 1");
    }
    // configured units must land in the roots of unity of L
    for (const auto& u : K->unit_basis()) {
        auto v = evaluate_element(chi, u);
        if (!is_root_of_unity(v)) rep.fail("unit " + u.str() + " evaluates to non-torsion " + v.str());
    }
    return rep;
}

std::pair<long, u64> character_order_data(const HeckeCharacter& chi) {
    return {chi.infinity_type.max_abs(), chi.finite_part.order()};
}

bool finite_parts_equal(const FiniteOrderCharacter& a, const FiniteOrderCharacter& b) {
    if (a.base_field()->conductor() != b.base_field()->conductor()) return false;
    if (a.value_field()->conductor() != b.value_field()->conductor()) return false;
    auto ca = a.canonicalized();
    auto cb = b.canonicalized();
    bool sa = ca.special().has_value(), sb = cb.special().has_value();
    if (sa != sb) return false;
    if (sa && ca.special()->k != cb.special()->k) return false;
    const auto& fa = ca.factors();
    const auto& fb = cb.factors();
    if (fa.size() != fb.size()) return false;
    const u64 W = a.value_field()->torsion_order();
    std::vector<bool> used(fb.size(), false);
    for (const auto& x : fa) {
        bool matched = false;
        for (size_t j = 0; j < fb.size(); ++j) {
            if (used[j]) continue;
            const auto& y = fb[j];
            if (x.prime.rational_norm != y.prime.rational_norm) continue;
            if (!associates(x.prime.generator, y.prime.generator)) continue;
            // same value on the canonical primitive root g0 of F_p
            u64 p = x.prime.rational_norm.get_ui();
            u64 g0 = primitive_root(p);
            u64 ex = (W / x.t) % W * ((x.k * discrete_log(x.g, g0, p)) % x.t) % W;
            u64 ey = (W / y.t) % W * ((y.k * discrete_log(y.g, g0, p)) % y.t) % W;
            if (ex != ey) continue;
            used[j] = true;
            matched = true;
            break;
        }
        if (!matched) return false;
    }
    return true;
}

bool characters_equal(const HeckeCharacter& a, const HeckeCharacter& b) {
    if (a.K->conductor() != b.K->conductor() || a.L->conductor() != b.L->conductor()) return false;
    if (a.infinity_type != b.infinity_type) return false;
    return finite_parts_equal(a.finite_part, b.finite_part);
}

u64 residue_zeta_image(const SplitPrime& P) { return derive_omega(P); }

}  // namespace reciplab
