#include "reciplab/fqpoly.hpp"

#include <algorithm>

namespace reciplab::fq {

Poly trim(Poly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

bool is_zero(const Poly& f) { return f.empty(); }

Poly add(const Poly& a, const Poly& b, u64 q) {
    Poly c(std::max(a.size(), b.size()));
    for (size_t i = 0; i < c.size(); ++i) {
        u64 x = i < a.size() ? a[i] : 0;
        u64 y = i < b.size() ? b[i] : 0;
        c[i] = add_mod(x, y, q);
    }
    return trim(std::move(c));
}

Poly sub(const Poly& a, const Poly& b, u64 q) {
    Poly c(std::max(a.size(), b.size()));
    for (size_t i = 0; i < c.size(); ++i) {
        u64 x = i < a.size() ? a[i] : 0;
        u64 y = i < b.size() ? b[i] : 0;
        c[i] = sub_mod(x, y, q);
    }
    return trim(std::move(c));
}

Poly mul(const Poly& a, const Poly& b, u64 q) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = add_mod(c[i + j], mul_mod(a[i], b[j], q), q);
    }
    return trim(std::move(c));
}

Poly scale(const Poly& a, u64 c, u64 q) {
    Poly r(a);
    for (u64& v : r) v = mul_mod(v, c % q, q);
    return trim(std::move(r));
}

Poly monic(const Poly& a, u64 q) {
    if (a.empty()) return a;
    return scale(a, inv_mod(a.back(), q), q);
}

Poly rem(Poly a, const Poly& b, u64 q) {
    if (b.empty()) throw DomainError("fq::rem: division by zero polynomial");
    u64 binv = inv_mod(b.back(), q);
    while (a.size() >= b.size()) {
        u64 c = mul_mod(a.back(), binv, q);
        if (c != 0) {
            size_t off = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j) a[off + j] = sub_mod(a[off + j], mul_mod(c, b[j], q), q);
        }
        a.pop_back();
        a = trim(std::move(a));
        if (a.size() < b.size()) break;
    }
    return a;
}

Poly div_exact(Poly a, const Poly& b, u64 q) {
    a = trim(std::move(a));
    if (b.empty()) throw DomainError("fq::div_exact: division by zero polynomial");
    if (a.empty()) return {};
    if (a.size() < b.size()) throw DomainError("fq::div_exact: not divisible");
    u64 binv = inv_mod(b.back(), q);
    Poly quot(a.size() - b.size() + 1, 0);
    for (size_t k = quot.size(); k-- > 0;) {
        u64 c = (a.size() == b.size() + k) ? mul_mod(a.back(), binv, q) : 0;
        quot[k] = c;
        if (c != 0)
            for (size_t j = 0; j < b.size(); ++j) a[k + j] = sub_mod(a[k + j], mul_mod(c, b[j], q), q);
        a = trim(std::move(a));
    }
    if (!a.empty()) throw DomainError("fq::div_exact: nonzero remainder");
    return trim(std::move(quot));
}

Poly gcd(Poly a, Poly b, u64 q) {
    a = trim(std::move(a));
    b = trim(std::move(b));
    while (!b.empty()) {
        Poly r = rem(std::move(a), b, q);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, q);
}

Poly powmod(Poly base, const Int& e, const Poly& f, u64 q) {
    if (f.empty()) throw DomainError("fq::powmod: zero modulus");
    Poly r = {1 % q};
    base = rem(std::move(base), f, q);
    Int n = e;
    if (n < 0) throw DomainError("fq::powmod: negative exponent");
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) r = rem(mul(r, base, q), f, q);
        base = rem(mul(base, base, q), f, q);
        n >>= 1;
    }
    return r;
}

u64 eval(const Poly& f, u64 x, u64 q) {
    u64 acc = 0;
    for (size_t i = f.size(); i-- > 0;) acc = add_mod(mul_mod(acc, x % q, q), f[i], q);
    return acc;
}

namespace {

// All roots of a squarefree product of distinct monic linear factors.
void split_linear(const Poly& f, u64 q, SeededRng& rng, std::vector<u64>& out) {
    if (f.size() <= 1) return;
    if (f.size() == 2) {  // x + c
        out.push_back(sub_mod(0, mul_mod(f[0], inv_mod(f[1], q), q), q));
        return;
    }
    if (q == 2) {  // at most the two candidates
        for (u64 r : {u64{0}, u64{1}})
            if (eval(f, r, q) == 0) out.push_back(r);
        return;
    }
    // random shift splitting: gcd(f, (x+a)^((q-1)/2) - 1)
    for (;;) {
        u64 a = rng.below(q);
        Poly shifted = {a, 1};
        Poly h = powmod(shifted, Int(static_cast<unsigned long>((q - 1) / 2)), f, q);
        h = sub(h, Poly{1}, q);
        Poly g = gcd(h, f, q);
        if (g.size() > 1 && g.size() < f.size()) {
            split_linear(g, q, rng, out);
            split_linear(div_exact(f, g, q), q, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<std::pair<u64, unsigned>> roots_with_multiplicity(const Poly& f0, u64 q, SeededRng& rng) {
    Poly f = trim(f0);
    if (f.empty()) throw DomainError("roots_with_multiplicity: zero polynomial");
    std::vector<u64> roots;
    // pull out x^k first
    size_t k0 = 0;
    while (k0 < f.size() && f[k0] == 0) ++k0;
    if (k0 > 0) {
        roots.push_back(0);
        f.erase(f.begin(), f.begin() + k0);
    }
    if (f.size() > 1) {
        // distinct nonzero roots: gcd with x^{q-1} - 1
        Poly xq = powmod(Poly{0, 1}, Int(static_cast<unsigned long>(q - 1)), f, q);
        Poly g = gcd(sub(xq, Poly{1}, q), f, q);
        split_linear(g, q, rng, roots);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 r : roots) {
        Poly lin = {sub_mod(0, r, q), 1};
        unsigned m = 0;
        Poly cur = trim(f0);
        for (;;) {
            if (cur.size() < 2) break;
            if (eval(cur, r, q) != 0) break;
            cur = div_exact(std::move(cur), lin, q);
            ++m;
        }
        out.emplace_back(r, m);
    }
    return out;
}

}  // namespace reciplab::fq
