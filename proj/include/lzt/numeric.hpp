// Integer and prime-field helpers shared by the exact arithmetic layers.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace lzt {

using Rational = boost::rational<std::int64_t>;

/// Raised when an enumeration would exceed the configured element budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an internal consistency check fails (a bug, never bad input).
class InternalFault : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace num {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: not invertible");
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % sp == 0) return n == sp;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

/// Smallest prime P >= lower with P == 1 (mod e).
inline std::uint64_t prime_one_mod(std::uint64_t e, std::uint64_t lower) {
    std::uint64_t k = lower / e + 1;
    for (;; ++k) {
        std::uint64_t cand = k * e + 1;
        if (cand >= lower && is_prime(cand)) return cand;
    }
}

/// A primitive e-th root of unity modulo the prime P (requires e | P-1).
/// Deterministic: tries bases 2, 3, ... in order.
inline std::uint64_t primitive_root_of_unity(std::uint64_t e, std::uint64_t P) {
    if ((P - 1) % e != 0) throw std::domain_error("primitive_root_of_unity: e does not divide P-1");
    if (e == 1) return 1;
    const auto primes = prime_factors(e);
    for (std::uint64_t a = 2; a < P; ++a) {
        std::uint64_t z = powmod(a, (P - 1) / e, P);
        bool primitive = true;
        for (auto l : primes) {
            if (powmod(z, e / l, P) == 1) { primitive = false; break; }
        }
        if (primitive) return z;
    }
    throw InternalFault("no primitive root of unity found");
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

/// Symmetric residue of x modulo P, in (-P/2, P/2].
inline std::int64_t symmetric(std::uint64_t x, std::uint64_t P) {
    return x > P / 2 ? -static_cast<std::int64_t>(P - x) : static_cast<std::int64_t>(x);
}

inline std::uint64_t to_mod(std::int64_t x, std::uint64_t P) {
    std::int64_t r = x % static_cast<std::int64_t>(P);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(P) : r);
}

}  // namespace num
}  // namespace lzt
