// Exact arithmetic in cyclotomic fields Q(zeta_e).
//
// A value is stored over the power basis 1, z, ..., z^(phi(e)-1) of Q(zeta_e)
// after reduction by the e-th cyclotomic polynomial, with integer numerators
// and one positive common denominator. Values of different conductors are
// combined by lifting both to the lcm of the conductors.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lzt/numeric.hpp"

namespace lzt {

/// Cached data for Q(zeta_e): the cyclotomic polynomial and reduced powers of zeta.
struct CycloField {
    int e = 1;
    int phi = 1;
    std::vector<std::int64_t> poly;                  // monic Phi_e, low degree first
    std::vector<std::vector<std::int64_t>> powers;   // powers[j] = zeta^j reduced, 0 <= j < e
};

namespace detail {

inline std::vector<std::int64_t> poly_divide_exact(std::vector<std::int64_t> num,
                                                   const std::vector<std::int64_t>& den) {
    // den monic
    const int dn = static_cast<int>(den.size()) - 1;
    const int nn = static_cast<int>(num.size()) - 1;
    std::vector<std::int64_t> q(static_cast<std::size_t>(nn - dn + 1), 0);
    for (int i = nn; i >= dn; --i) {
        std::int64_t c = num[static_cast<std::size_t>(i)];
        q[static_cast<std::size_t>(i - dn)] = c;
        if (c == 0) continue;
        for (int j = 0; j <= dn; ++j) num[static_cast<std::size_t>(i - dn + j)] -= c * den[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < dn; ++i) {
        if (num[static_cast<std::size_t>(i)] != 0) throw InternalFault("cyclotomic polynomial division not exact");
    }
    return q;
}

template <class Recurse>
std::shared_ptr<const CycloField> build_field(int e, Recurse&& recurse) {
    auto f = std::make_shared<CycloField>();
    f->e = e;
    std::vector<std::int64_t> p(static_cast<std::size_t>(e + 1), 0);
    p[0] = -1;
    p[static_cast<std::size_t>(e)] = 1;
    for (int d = 1; d < e; ++d) {
        if (e % d == 0) p = poly_divide_exact(p, recurse(d)->poly);
    }
    f->poly = p;
    f->phi = static_cast<int>(p.size()) - 1;
    const int phi = f->phi;
    f->powers.assign(static_cast<std::size_t>(e), std::vector<std::int64_t>(static_cast<std::size_t>(phi), 0));
    std::vector<std::int64_t> cur(static_cast<std::size_t>(phi), 0);
    cur[0] = 1;
    for (int j = 0; j < e; ++j) {
        f->powers[static_cast<std::size_t>(j)] = cur;
        // multiply by x, reduce x^phi = -sum poly[i] x^i
        std::int64_t top = cur[static_cast<std::size_t>(phi - 1)];
        for (int i = phi - 1; i > 0; --i) cur[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i - 1)];
        cur[0] = 0;
        if (top != 0) {
            for (int i = 0; i < phi; ++i) cur[static_cast<std::size_t>(i)] -= top * p[static_cast<std::size_t>(i)];
        }
    }
    return f;
}

}  // namespace detail

/// Field data for Q(zeta_e); built once per conductor and shared.
inline const CycloField& cyclo_field(int e) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const CycloField>> cache;
    if (e < 1) throw std::invalid_argument("cyclo_field: conductor must be positive");
    std::lock_guard<std::mutex> lock(mu);
    auto get = [&](auto&& self, int k) -> std::shared_ptr<const CycloField> {
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        auto f = detail::build_field(k, [&](int d) { return self(self, d); });
        cache.emplace(k, f);
        return f;
    };
    return *get(get, e);
}

class Cyclotomic {
public:
    Cyclotomic() : e_(1), c_(1, 0), den_(1) {}

    static Cyclotomic integer(std::int64_t v, int e = 1) {
        Cyclotomic r = zero(e);
        r.c_[0] = v;
        return r;
    }

    static Cyclotomic zero(int e) {
        Cyclotomic r;
        r.e_ = e;
        r.c_.assign(static_cast<std::size_t>(cyclo_field(e).phi), 0);
        return r;
    }

    static Cyclotomic rational(Rational q, int e = 1) {
        Cyclotomic r = integer(q.numerator(), e);
        r.den_ = q.denominator();
        return r;
    }

    /// zeta_e^j
    static Cyclotomic root(int e, std::int64_t j) {
        const auto& f = cyclo_field(e);
        Cyclotomic r;
        r.e_ = e;
        r.c_ = f.powers[static_cast<std::size_t>(((j % e) + e) % e)];
        return r;
    }

    /// sum_j mult[j] * zeta_e^j, with mult indexed 0..e-1.
    static Cyclotomic from_exponents(int e, const std::vector<std::int64_t>& mult) {
        const auto& f = cyclo_field(e);
        Cyclotomic r = zero(e);
        for (std::size_t j = 0; j < mult.size(); ++j) {
            if (mult[j] == 0) continue;
            const auto& pw = f.powers[j % static_cast<std::size_t>(e)];
            for (int i = 0; i < f.phi; ++i) r.c_[static_cast<std::size_t>(i)] += mult[j] * pw[static_cast<std::size_t>(i)];
        }
        return r;
    }

    /// Raw constructor from reduced coefficients; validates the length.
    static Cyclotomic from_coefficients(int e, std::vector<std::int64_t> coeffs, std::int64_t den = 1) {
        if (static_cast<int>(coeffs.size()) != cyclo_field(e).phi) {
            throw std::invalid_argument("Cyclotomic: coefficient vector length must equal phi(e)");
        }
        if (den == 0) throw std::invalid_argument("Cyclotomic: zero denominator");
        Cyclotomic r;
        r.e_ = e;
        r.c_ = std::move(coeffs);
        r.den_ = den;
        r.normalize();
        return r;
    }

    int order() const { return e_; }
    const std::vector<std::int64_t>& coefficients() const { return c_; }
    std::int64_t denominator() const { return den_; }

    bool is_zero() const {
        for (auto v : c_) if (v != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i) if (c_[i] != 0) return false;
        return true;
    }

    bool is_integer() const { return is_rational() && den_ == 1; }

    Rational to_rational() const {
        if (!is_rational()) throw std::domain_error("Cyclotomic: value is not rational");
        return Rational(c_[0], den_);
    }

    /// Same value expressed in Q(zeta_target); requires order() | target.
    Cyclotomic lift(int target) const {
        if (target == e_) return *this;
        if (target % e_ != 0) throw std::invalid_argument("Cyclotomic::lift: conductor does not divide target");
        const auto& f = cyclo_field(target);
        const int t = target / e_;
        Cyclotomic r = zero(target);
        r.den_ = den_;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            const auto& pw = f.powers[(i * static_cast<std::size_t>(t)) % static_cast<std::size_t>(target)];
            for (int k = 0; k < f.phi; ++k) r.c_[static_cast<std::size_t>(k)] += c_[i] * pw[static_cast<std::size_t>(k)];
        }
        return r;
    }

    Cyclotomic conj() const {
        const auto& f = cyclo_field(e_);
        Cyclotomic r = zero(e_);
        r.den_ = den_;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            const auto& pw = f.powers[(static_cast<std::size_t>(e_) - i) % static_cast<std::size_t>(e_)];
            for (int k = 0; k < f.phi; ++k) r.c_[static_cast<std::size_t>(k)] += c_[i] * pw[static_cast<std::size_t>(k)];
        }
        return r;
    }

    /// Galois action zeta -> zeta^u (u coprime to the conductor).
    Cyclotomic galois(std::int64_t u) const {
        const auto& f = cyclo_field(e_);
        Cyclotomic r = zero(e_);
        r.den_ = den_;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            std::int64_t j = ((static_cast<std::int64_t>(i) * u) % e_ + e_) % e_;
            const auto& pw = f.powers[static_cast<std::size_t>(j)];
            for (int k = 0; k < f.phi; ++k) r.c_[static_cast<std::size_t>(k)] += c_[i] * pw[static_cast<std::size_t>(k)];
        }
        return r;
    }

    Cyclotomic operator-() const {
        Cyclotomic r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) { return combine(a, b, 1); }
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return combine(a, b, -1); }

    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.e_ != b.e_) {
            const int l = static_cast<int>(num::lcm64(a.e_, b.e_));
            return a.lift(l) * b.lift(l);
        }
        const auto& f = cyclo_field(a.e_);
        const int phi = f.phi;
        std::vector<std::int64_t> prod(static_cast<std::size_t>(2 * phi - 1), 0);
        for (int i = 0; i < phi; ++i) {
            const std::int64_t ai = a.c_[static_cast<std::size_t>(i)];
            if (ai == 0) continue;
            for (int j = 0; j < phi; ++j) prod[static_cast<std::size_t>(i + j)] += ai * b.c_[static_cast<std::size_t>(j)];
        }
        Cyclotomic r = zero(a.e_);
        for (int i = 0; i < phi; ++i) r.c_[static_cast<std::size_t>(i)] = prod[static_cast<std::size_t>(i)];
        for (int k = phi; k < 2 * phi - 1; ++k) {
            const std::int64_t v = prod[static_cast<std::size_t>(k)];
            if (v == 0) continue;
            const auto& pw = f.powers[static_cast<std::size_t>(k % a.e_)];
            for (int i = 0; i < phi; ++i) r.c_[static_cast<std::size_t>(i)] += v * pw[static_cast<std::size_t>(i)];
        }
        r.den_ = a.den_ * b.den_;
        r.normalize();
        return r;
    }

    friend Cyclotomic operator*(std::int64_t s, const Cyclotomic& a) {
        Cyclotomic r = a;
        for (auto& v : r.c_) v *= s;
        r.normalize();
        return r;
    }

    Cyclotomic divided_by(std::int64_t d) const {
        if (d == 0) throw std::domain_error("Cyclotomic: division by zero");
        Cyclotomic r = *this;
        if (d < 0) {
            d = -d;
            for (auto& v : r.c_) v = -v;
        }
        r.den_ *= d;
        r.normalize();
        return r;
    }

    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.e_ != b.e_) {
            const int l = static_cast<int>(num::lcm64(a.e_, b.e_));
            return a.lift(l) == b.lift(l);
        }
        return a.den_ == b.den_ && a.c_ == b.c_;
    }

    /// Image under zeta_e -> z^(E/e) in F_P, where z has multiplicative order E.
    std::uint64_t eval_mod(std::uint64_t P, std::uint64_t z, int E) const {
        if (E % e_ != 0) throw std::invalid_argument("eval_mod: root order not a multiple of conductor");
        const std::uint64_t w = num::powmod(z, static_cast<std::uint64_t>(E / e_), P);
        std::uint64_t acc = 0, pw = 1;
        for (auto v : c_) {
            if (v != 0) acc = (acc + num::mulmod(num::to_mod(v, P), pw, P)) % P;
            pw = num::mulmod(pw, w, P);
        }
        if (den_ != 1) acc = num::mulmod(acc, num::invmod(num::to_mod(den_, P), P), P);
        return acc;
    }

    /// Upper bound for the complex absolute value.
    double abs_bound() const {
        double s = 0;
        for (auto v : c_) s += v < 0 ? -static_cast<double>(v) : static_cast<double>(v);
        return s / static_cast<double>(den_);
    }

    /// Canonical text: "e:c0,c1,...[/den]".
    std::string to_string() const {
        std::ostringstream os;
        os << e_ << ':';
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) os << ',';
            os << c_[i];
        }
        if (den_ != 1) os << '/' << den_;
        return os.str();
    }

    static Cyclotomic parse(const std::string& s) {
        const auto colon = s.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("Cyclotomic::parse: missing ':' in " + s);
        const int e = std::stoi(s.substr(0, colon));
        std::string rest = s.substr(colon + 1);
        std::int64_t den = 1;
        if (auto slash = rest.find('/'); slash != std::string::npos) {
            den = std::stoll(rest.substr(slash + 1));
            rest = rest.substr(0, slash);
        }
        std::vector<std::int64_t> coeffs;
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ',')) coeffs.push_back(std::stoll(tok));
        return from_coefficients(e, std::move(coeffs), den);
    }

    friend std::ostream& operator<<(std::ostream& os, const Cyclotomic& c) { return os << c.to_string(); }

private:
    static Cyclotomic combine(const Cyclotomic& a, const Cyclotomic& b, std::int64_t sign) {
        if (a.e_ != b.e_) {
            const int l = static_cast<int>(num::lcm64(a.e_, b.e_));
            return combine(a.lift(l), b.lift(l), sign);
        }
        Cyclotomic r = a;
        if (a.den_ == b.den_) {
            for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += sign * b.c_[i];
        } else {
            const std::int64_t l = num::lcm64(a.den_, b.den_);
            const std::int64_t fa = l / a.den_, fb = l / b.den_;
            for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] * fa + sign * b.c_[i] * fb;
            r.den_ = l;
        }
        r.normalize();
        return r;
    }

    void normalize() {
        if (den_ == 1) return;
        std::int64_t g = den_;
        for (auto v : c_) {
            g = std::gcd(g, v);
            if (g == 1) return;
        }
        den_ /= g;
        for (auto& v : c_) v /= g;
    }

    int e_;
    std::vector<std::int64_t> c_;
    std::int64_t den_;
};

}  // namespace lzt
