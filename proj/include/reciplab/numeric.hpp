// Shared numeric helpers: exact bignum aliases, 64-bit modular arithmetic,
// deterministic primality testing and factorization, seeded RNG.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace reciplab {

using Int = mpz_class;
using Rat = mpq_class;

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Base class for all recoverable errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Bad configuration or malformed input files.
struct ConfigError : Error {
    using Error::Error;
};
// Precondition violations on operation inputs (division by zero, zero base
// with negative exponent, ...).
struct DomainError : Error {
    using Error::Error;
};
// A bounded search ran out of budget; the caller may retry with a larger bound.
struct NotFoundError : Error {
    using Error::Error;
};
// Structurally invalid dataset / artifact contents.
struct DataError : Error {
    using Error::Error;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 add_mod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Modular inverse of a mod m for gcd(a, m) = 1.
inline u64 inv_mod(u64 a, u64 m) {
    long long t = 0, nt = 1;
    long long r = static_cast<long long>(m), nr = static_cast<long long>(a % m);
    while (nr != 0) {
        long long q = r / nr;
        long long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw DomainError("inv_mod: not invertible");
    return t < 0 ? static_cast<u64>(t + static_cast<long long>(m)) : static_cast<u64>(t);
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Distinct prime factors of n by trial division (odometer scale: n up to ~2^50
// factors quickly as long as at most one factor exceeds the trial bound).
inline std::vector<u64> prime_factors_u64(u64 n) {
    std::vector<u64> fs;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            fs.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

// Distinct prime factors of an exact integer. A cofactor beyond the trial
// bound must itself be prime (checked), otherwise the input is out of scope.
std::vector<Int> prime_factors(const Int& n);

inline bool is_prime_int(const Int& n) {
    if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
    // 50 rounds of mpz probab prime; treat "probably prime" as prime at desk scale.
    return mpz_probab_prime_p(n.get_mpz_t(), 50) > 0;
}

// Deterministic seeded RNG. mt19937_64 output is fully specified by the
// standard; bounded draws below avoid the unspecified std distributions.
class SeededRng {
  public:
    explicit SeededRng(u64 seed) : eng_(seed) {}

    u64 next_u64() { return eng_(); }

    // Uniform draw in [0, n) without modulo bias.
    u64 below(u64 n) {
        if (n == 0) throw DomainError("SeededRng::below(0)");
        u64 limit = ~u64{0} - (~u64{0} % n);
        u64 v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    // Uniform in [lo, hi] inclusive.
    u64 in_range(u64 lo, u64 hi) { return lo + below(hi - lo + 1); }

  private:
    std::mt19937_64 eng_;
};

inline long gcd_long(long a, long b) {
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

inline long lcm_long(long a, long b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd_long(a, b) * b;
}

}  // namespace reciplab
