#include "reciplab/numeric.hpp"

namespace reciplab {

std::vector<Int> prime_factors(const Int& n) {
    if (n <= 1) throw DomainError("prime_factors: argument must be > 1");
    std::vector<Int> out;
    Int m = n;
    if (m.fits_ulong_p()) {
        for (u64 p : prime_factors_u64(m.get_ui())) out.push_back(Int(static_cast<unsigned long>(p)));
        return out;
    }
    // Large inputs: strip small factors, then insist the remainder is prime.
    // Good enough for the sizes this project produces (norms of split primes).
    for (u64 p = 2; p < 2000000; p = (p == 2 ? 3 : p + 2)) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
            out.push_back(Int(static_cast<unsigned long>(p)));
            m /= static_cast<unsigned long>(p);
        }
        if (m == 1) return out;
    }
    if (!is_prime_int(m)) throw DomainError("prime_factors: composite cofactor too large to factor");
    out.push_back(m);
    return out;
}

}  // namespace reciplab
