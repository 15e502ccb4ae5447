#include "reciplab/residue.hpp"

#include <algorithm>
#include <cmath>

namespace reciplab {

u64 multiplicative_order(u64 x, u64 q) {
    x %= q;
    if (x == 0) throw DomainError("multiplicative_order: zero");
    u64 n = q - 1;
    for (u64 p : prime_factors_u64(q - 1))
        while (n % p == 0 && pow_mod(x, n / p, q) == 1) n /= p;
    return n;
}

u64 primitive_root(u64 q) {
    if (!is_prime_u64(q)) throw DomainError("primitive_root: modulus not prime");
    if (q == 2) return 1;
    auto ps = prime_factors_u64(q - 1);
    for (u64 g = 2; g < q; ++g) {
        bool ok = true;
        for (u64 p : ps)
            if (pow_mod(g, (q - 1) / p, q) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw NotFoundError("primitive_root: none found (impossible for prime modulus)");
}

std::vector<u64> zeta_images(unsigned N, u64 q) {
    if (!is_prime_u64(q)) throw ConfigError("zeta_images: q not prime");
    if ((q - 1) % N != 0) throw ConfigError("zeta_images: q != 1 mod N");
    if (q % N == 0 && N > 1) throw ConfigError("zeta_images: q divides N");
    u64 w = pow_mod(primitive_root(q), (q - 1) / N, q);
    std::vector<u64> out;
    for (unsigned a = 1; a <= N; ++a)
        if (std::gcd(a, N) == 1) out.push_back(pow_mod(w, a, q));
    std::sort(out.begin(), out.end());
    return out;
}

ReductionSite make_site(unsigned N, u64 q) {
    auto imgs = zeta_images(N, q);
    return ReductionSite{N, q, imgs.front()};
}

ReductionSite make_site(unsigned N, u64 q, u64 omega) {
    if (!is_prime_u64(q)) throw ConfigError("make_site: q not prime");
    if ((q - 1) % N != 0) throw ConfigError("make_site: q != 1 mod N");
    omega %= q;
    if (omega == 0 || multiplicative_order(omega, q) != N) throw ConfigError("make_site: omega does not have order N");
    return ReductionSite{N, q, omega};
}

u64 reduce(const AlgebraicInteger& x, const ReductionSite& site) {
    if (x.field()->conductor() != site.N) throw DomainError("reduce: site conductor mismatch");
    u64 acc = 0;
    u64 w = 1;
    for (const Int& c : x.coords()) {
        u64 r = mpz_fdiv_ui(c.get_mpz_t(), site.q);  // nonnegative remainder
        acc = add_mod(acc, mul_mod(r, w, site.q), site.q);
        w = mul_mod(w, site.omega, site.q);
    }
    return acc;
}

u64 discrete_log_order(u64 base, u64 value, u64 n, u64 q) {
    base %= q;
    value %= q;
    if (base == 0 || value == 0) throw DomainError("discrete_log: zero argument");
    if (value == 1) return 0;
    u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(n))));
    // baby steps base^j, flat sorted table (hashing is slower at these sizes)
    std::vector<std::pair<u64, u64>> baby(m);
    u64 bj = 1;
    for (u64 j = 0; j < m; ++j) {
        baby[j] = {bj, j};
        bj = mul_mod(bj, base, q);
    }
    std::sort(baby.begin(), baby.end());
    u64 giant = inv_mod(bj, q);  // base^{-m}
    u64 y = value;
    for (u64 i = 0; i * m <= n; ++i) {
        auto it = std::lower_bound(baby.begin(), baby.end(), std::make_pair(y, u64{0}));
        if (it != baby.end() && it->first == y) {
            u64 e = (i * m + it->second) % n;
            if (pow_mod(base, e, q) == value) return e;  // guards bases of order < n
        }
        y = mul_mod(y, giant, q);
    }
    throw NotFoundError("discrete_log: value not in subgroup");
}

u64 discrete_log(u64 base, u64 value, u64 q) { return discrete_log_order(base, value, q - 1, q); }

bool is_lth_power_residue(u64 x, u64 ell, u64 q) {
    x %= q;
    if (x == 0) throw DomainError("is_lth_power_residue: zero");
    if (ell == 0) throw DomainError("is_lth_power_residue: ell = 0");
    u64 d = std::gcd(ell, q - 1);
    return pow_mod(x, (q - 1) / d, q) == 1;
}

std::vector<u64> primes_in_class(u64 n, u64 r, u64 lo, u64 hi, size_t count) {
    std::vector<u64> out;
    if (n == 0) throw DomainError("primes_in_class: n = 0");
    u64 q = lo + ((r + n - lo % n) % n);
    for (; q <= hi && out.size() < count; q += n)
        if (is_prime_u64(q)) out.push_back(q);
    return out;
}

}  // namespace reciplab
