// GL_n(F_q) for prime q: Harish-Chandra products, cuspidality, cuspidal
// support, mirabolic restriction pieces and the Zelevinsky ring with its
// derivative map D.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lzt/chartheory.hpp"
#include "lzt/ringmat.hpp"

namespace lzt {

/// GL_n(F_q) as a full subgroup handle; q must be prime.
inline Subgroup gl_fq(int n, int q) { return Subgroup::full(gl_group(n, make_ring(q, 1))); }

/// An irreducible character of GL_n(F_q) by table index. Grade 0 has the
/// single label 0, the unit 1_R.
struct IrrLabel {
    int q = 2;
    int n = 0;
    int index = 0;

    friend auto operator<=>(const IrrLabel&, const IrrLabel&) = default;
};

inline std::shared_ptr<const CharacterTable> gl_table(int n, int q) { return character_table(gl_fq(n, q)); }

inline const ClassFunction& irr_character(const IrrLabel& l) {
    if (l.n < 1) throw std::invalid_argument("irr_character: grade 0 has no group");
    return gl_table(l.n, l.q)->irr.at(static_cast<std::size_t>(l.index));
}

inline std::int64_t irr_dim(const IrrLabel& l) { return l.n == 0 ? 1 : irr_character(l).degree(); }

inline std::vector<IrrLabel> irreducibles(int n, int q) {
    std::vector<IrrLabel> out;
    const std::size_t k = n == 0 ? 1 : gl_table(n, q)->size();
    for (std::size_t i = 0; i < k; ++i) out.push_back({q, n, static_cast<int>(i)});
    return out;
}

// ---------------------------------------------------------------------------
// ZElem

/// Element of the Zelevinsky ring over F_q: integer combination of labels.
class ZElem {
public:
    explicit ZElem(int q = 2) : q_(q) {}

    static ZElem one(int q) {
        ZElem r(q);
        r.c_[{0, 0}] = 1;
        return r;
    }
    static ZElem irr(const IrrLabel& l, std::int64_t coeff = 1) {
        ZElem r(l.q);
        if (coeff != 0) r.c_[{l.n, l.index}] = coeff;
        return r;
    }

    int q() const { return q_; }
    const std::map<std::pair<int, int>, std::int64_t>& terms() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    std::int64_t coeff(int n, int index) const {
        auto it = c_.find({n, index});
        return it == c_.end() ? 0 : it->second;
    }
    bool is_genuine() const {
        return std::all_of(c_.begin(), c_.end(), [](const auto& kv) { return kv.second > 0; });
    }
    /// Grades present.
    std::vector<int> grades() const {
        std::vector<int> g;
        for (const auto& [k, v] : c_) if (g.empty() || g.back() != k.first) g.push_back(k.first);
        return g;
    }
    /// Total dimension sum coeff * dim.
    std::int64_t dimension() const {
        std::int64_t d = 0;
        for (const auto& [k, v] : c_) d += v * irr_dim({q_, k.first, k.second});
        return d;
    }

    void add(int n, int index, std::int64_t v) {
        if (v == 0) return;
        auto& x = c_[{n, index}];
        x += v;
        if (x == 0) c_.erase({n, index});
    }

    friend ZElem operator+(const ZElem& a, const ZElem& b) {
        check_q(a, b);
        ZElem r = a;
        for (const auto& [k, v] : b.c_) r.add(k.first, k.second, v);
        return r;
    }
    friend ZElem operator-(const ZElem& a, const ZElem& b) {
        check_q(a, b);
        ZElem r = a;
        for (const auto& [k, v] : b.c_) r.add(k.first, k.second, -v);
        return r;
    }
    friend ZElem operator*(std::int64_t s, const ZElem& a) {
        ZElem r(a.q_);
        for (const auto& [k, v] : a.c_) r.add(k.first, k.second, s * v);
        return r;
    }
    friend bool operator==(const ZElem& a, const ZElem& b) { return a.q_ == b.q_ && a.c_ == b.c_; }

    /// "q; [(n, label, coeff), ...]" ordered by (n, label).
    std::string to_string() const {
        std::ostringstream os;
        os << q_ << "; [";
        bool first = true;
        for (const auto& [k, v] : c_) {
            if (!first) os << ", ";
            first = false;
            os << "(" << k.first << ", " << k.second << ", " << v << ")";
        }
        os << "]";
        return os.str();
    }

    static ZElem parse(const std::string& s) {
        const auto semi = s.find(';');
        if (semi == std::string::npos) throw std::invalid_argument("ZElem::parse: missing ';' in '" + s + "'");
        ZElem r(std::stoi(s.substr(0, semi)));
        std::string rest = s.substr(semi + 1);
        const auto lb = rest.find('['), rb = rest.rfind(']');
        if (lb == std::string::npos || rb == std::string::npos || rb < lb) throw std::invalid_argument("ZElem::parse: missing brackets");
        std::string body = rest.substr(lb + 1, rb - lb - 1);
        std::size_t pos = 0;
        while ((pos = body.find('(', pos)) != std::string::npos) {
            const auto close = body.find(')', pos);
            if (close == std::string::npos) throw std::invalid_argument("ZElem::parse: unbalanced parenthesis");
            std::string tuple = body.substr(pos + 1, close - pos - 1);
            std::replace(tuple.begin(), tuple.end(), ',', ' ');
            std::istringstream ts(tuple);
            int n, label;
            std::int64_t coeff;
            if (!(ts >> n >> label >> coeff)) throw std::invalid_argument("ZElem::parse: bad term '" + tuple + "'");
            r.add(n, label, coeff);
            pos = close + 1;
        }
        return r;
    }

private:
    static void check_q(const ZElem& a, const ZElem& b) {
        if (a.q_ != b.q_) throw std::invalid_argument("ZElem: mixing different q");
    }

    int q_;
    std::map<std::pair<int, int>, std::int64_t> c_;
};

// ---------------------------------------------------------------------------
// Harish-Chandra product

/// The character of GL_n(F_q) represented by a homogeneous ZElem of grade n.
inline ClassFunction zelem_character(const ZElem& x, int n) {
    ClassFunction r = zero_function(gl_fq(n, x.q()));
    for (const auto& [k, v] : x.terms()) {
        if (k.first != n) throw std::invalid_argument("zelem_character: element is not homogeneous of grade " + std::to_string(n));
        r = r + v * irr_character({x.q(), k.first, k.second});
    }
    return r;
}

/// Decomposition of a class function of GL_n(F_q) as a ZElem.
inline ZElem zelem_of(const ClassFunction& chi, int n, int q) {
    const auto T = gl_table(n, q);
    const auto d = decompose(chi, *T);
    if (!d.integral || !d.reconstructs) throw InternalFault("zelem_of: class function is not a virtual character");
    ZElem r(q);
    for (std::size_t i = 0; i < d.mult.size(); ++i) r.add(n, static_cast<int>(i), d.multiplicity(i));
    return r;
}

/// Product of two irreducibles: inflate a (x) b through the block parabolic,
/// induce to GL_{n1+n2}(F_q), decompose.
inline ZElem hc_product(const IrrLabel& a, const IrrLabel& b) {
    if (a.q != b.q) throw std::invalid_argument("hc_product: different q");
    if (a.n == 0) return ZElem::irr(b);
    if (b.n == 0) return ZElem::irr(a);
    static std::mutex mu;
    static std::map<std::pair<IrrLabel, IrrLabel>, ZElem> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find({a, b}); it != cache.end()) return it->second;
    }
    const int n = a.n + b.n;
    const int q = a.q;
    auto Gh = gl_group(n, make_ring(q, 1));
    const Partition I({a.n, b.n});
    const Subgroup P = subgroup(Gh, {SubgroupKind::Parabolic, I, 1});
    const ClassFunction infl = inflate_blocks(P, I, {irr_character(a), irr_character(b)}, 1);
    const ZElem r = zelem_of(induce(P, infl, gl_fq(n, q)), n, q);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_pair(a, b), r);
    return r;
}

inline ZElem operator*(const ZElem& x, const ZElem& y) {
    if (x.q() != y.q()) throw std::invalid_argument("ZElem product: different q");
    ZElem r(x.q());
    for (const auto& [ka, va] : x.terms()) {
        for (const auto& [kb, vb] : y.terms()) {
            r = r + (va * vb) * hc_product({x.q(), ka.first, ka.second}, {y.q(), kb.first, kb.second});
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Cuspidality and cuspidal support

/// Zero invariants under the unipotent radical of every proper maximal
/// block parabolic. Grade 1 labels are always cuspidal.
inline bool is_cuspidal(const IrrLabel& pi) {
    if (pi.n <= 0) throw std::invalid_argument("is_cuspidal: needs n >= 1");
    if (pi.n == 1) return true;
    const auto& chi = irr_character(pi);
    auto Gh = gl_group(pi.n, make_ring(pi.q, 1));
    for (int n1 = 1; n1 < pi.n; ++n1) {
        const Subgroup U = subgroup(Gh, {SubgroupKind::Unipotent, Partition({n1, pi.n - n1}), 1});
        if (inner_product(restrict_to(chi, U), trivial_character(U)).numerator() != 0) return false;
    }
    return true;
}

inline std::vector<IrrLabel> cuspidals(int n, int q) {
    std::vector<IrrLabel> out;
    for (const auto& l : irreducibles(n, q)) if (is_cuspidal(l)) out.push_back(l);
    return out;
}

/// Multiset of (size, cuspidal label), stored sorted.
struct CuspidalSupport {
    std::vector<IrrLabel> parts;

    int n() const {
        int s = 0;
        for (const auto& p : parts) s += p.n;
        return s;
    }
    friend bool operator==(const CuspidalSupport&, const CuspidalSupport&) = default;
    friend auto operator<=>(const CuspidalSupport&, const CuspidalSupport&) = default;
};

/// All multisets of cuspidals with total size n, each sorted.
inline std::vector<CuspidalSupport> cuspidal_multisets(int n, int q) {
    std::vector<IrrLabel> all;
    for (int k = 1; k <= n; ++k) for (const auto& c : cuspidals(k, q)) all.push_back(c);
    std::vector<CuspidalSupport> out;
    std::vector<IrrLabel> cur;
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int left) {
        if (left == 0) {
            out.push_back({cur});
            return;
        }
        for (std::size_t i = start; i < all.size(); ++i) {
            if (all[i].n > left) continue;
            cur.push_back(all[i]);
            rec(i, left - all[i].n);
            cur.pop_back();
        }
    };
    rec(0, n);
    return out;
}

/// Product of the parts of a support, in stored order.
inline ZElem support_product(const CuspidalSupport& s, int q) {
    ZElem r = ZElem::one(q);
    for (const auto& c : s.parts) r = r * ZElem::irr(c);
    return r;
}

/// The unique multiset of cuspidals whose product contains pi.
inline CuspidalSupport cuspidal_support(const IrrLabel& pi) {
    if (pi.n >= 1 && is_cuspidal(pi)) return {{pi}};
    std::optional<CuspidalSupport> found;
    for (const auto& s : cuspidal_multisets(pi.n, pi.q)) {
        if (support_product(s, pi.q).coeff(pi.n, pi.index) > 0) {
            if (found) throw InternalFault("cuspidal_support: two supports contain the same irreducible");
            found = s;
        }
    }
    if (!found) throw InternalFault("cuspidal_support: no support found");
    return *found;
}

// ---------------------------------------------------------------------------
// Mirabolic pieces and derivatives

/// Additive character psi(x) = zeta_p^x of F_p.
inline Cyclotomic psi(int p, std::int64_t x) { return Cyclotomic::root(p, x); }

/// H_k = {[[g, x], [0, u]] : g in GL_{n-k}, u upper unitriangular k x k} in Mir_n.
inline Subgroup mirabolic_piece_domain(int n, int k, int q) {
    auto Gh = gl_group(n, make_ring(q, 1));
    const int top = n - k;
    return *Subgroup::full(Gh).cached<Subgroup>("mirpiece:" + std::to_string(k), [&] {
        return std::make_shared<const Subgroup>(Subgroup::from_predicate(Gh, "MirPiece(" + std::to_string(k) + ")", [=](const Mat& g) {
            for (int i = top; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (j < top && g(i, j) != 0) return false;
                    if (j >= top && j < i && g(i, j) != 0) return false;
                    if (j == i && g(i, j) != 1) return false;
                }
            }
            return true;
        }));
    });
}

inline Subgroup mirabolic(int n, int q) {
    return subgroup(gl_group(n, make_ring(q, 1)), {SubgroupKind::Mirabolic, Partition({n}), 1});
}

/// Character of (Phi+)^{k-1} Psi+(sigma) on Mir_n: induced from H_k of
/// sigma(g) * psi(sum of the superdiagonal of u). sigma has grade n - k.
inline ClassFunction mirabolic_piece(const IrrLabel& sigma, int k, int n) {
    if (k < 1 || k > n) throw std::invalid_argument("mirabolic_piece: k must lie in 1..n");
    if (sigma.n != n - k) throw std::invalid_argument("mirabolic_piece: sigma must have grade n - k");
    const int q = sigma.q;
    const int top = n - k;
    const Subgroup H = mirabolic_piece_domain(n, k, q);
    std::shared_ptr<const GLGroup> small = top > 0 ? gl_group(top, make_ring(q, 1)) : nullptr;
    const ClassFunction* sc = top > 0 ? &irr_character(sigma) : nullptr;
    const ClassFunction lam = from_function(H, [&](const Mat& g) {
        std::int64_t s = 0;
        for (int i = top; i + 1 < n; ++i) s += g(i, i + 1);
        Cyclotomic v = psi(q, s);
        if (top > 0) v = v * sc->at(small->index_of(mat::block(g, 0, 0, top)));
        return v;
    });
    return induce(H, lam, mirabolic(n, q));
}

/// k-th derivative, via multiplicities against the mirabolic pieces.
inline ZElem derivative(const IrrLabel& pi, int k) {
    if (k < 0 || k > pi.n) throw std::invalid_argument("derivative: k out of range");
    if (k == 0) return ZElem::irr(pi);
    static std::mutex mu;
    static std::map<std::pair<IrrLabel, int>, ZElem> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find({pi, k}); it != cache.end()) return it->second;
    }
    const int n = pi.n;
    const ClassFunction res = restrict_to(irr_character(pi), mirabolic(n, pi.q));
    ZElem r(pi.q);
    for (const auto& sigma : irreducibles(n - k, pi.q)) {
        const Rational m = inner_product(res, mirabolic_piece(sigma, k, n));
        if (m.denominator() != 1 || m.numerator() < 0) throw InternalFault("derivative: non-integral multiplicity");
        r.add(sigma.n, sigma.index, m.numerator());
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_pair(pi, k), r);
    return r;
}

/// D(x) = sum over k of the k-th derivatives, extended additively.
inline ZElem D_map(const ZElem& x) {
    ZElem r(x.q());
    for (const auto& [key, v] : x.terms()) {
        const IrrLabel pi{x.q(), key.first, key.second};
        for (int k = 0; k <= pi.n; ++k) r = r + v * derivative(pi, k);
    }
    return r;
}

/// Degree n-k part of prod_i (chi_i + 1_R) for GL_1 labels chi_i.
inline ZElem x_term(const std::vector<IrrLabel>& chis, int k) {
    const int n = static_cast<int>(chis.size());
    if (k < 0 || k > n) throw std::invalid_argument("x_term: k out of range");
    for (const auto& c : chis) if (c.n != 1) throw std::invalid_argument("x_term: expects characters of GL_1");
    const int q = chis.empty() ? 2 : chis[0].q;
    ZElem r(q);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != n - k) continue;
        ZElem t = ZElem::one(q);
        for (int i = 0; i < n; ++i) if (mask & (1u << i)) t = t * ZElem::irr(chis[static_cast<std::size_t>(i)]);
        r = r + t;
    }
    return r;
}

/// Central character value of pi at the scalar a, divided by the degree.
inline Cyclotomic central_value(const IrrLabel& pi, int a) {
    const auto& chi = irr_character(pi);
    const auto& Gh = chi.group.ambient();
    Mat s = mat::zero(pi.n);
    for (int i = 0; i < pi.n; ++i) s(i, i) = a;
    return chi.at(Gh.index_of(s)).divided_by(chi.degree());
}

/// Cuspidals of GL_2(F_q) whose central character is chi (a GL_1 label).
inline std::vector<IrrLabel> gl2_cuspidals_with_central(int q, const IrrLabel& chi) {
    if (chi.n != 1 || chi.q != q) throw std::invalid_argument("gl2_cuspidals_with_central: chi must be a GL_1(F_q) label");
    std::vector<IrrLabel> out;
    for (const auto& c : cuspidals(2, q)) {
        bool ok = true;
        for (int a = 1; a < q && ok; ++a) ok = central_value(c, a) == central_value(chi, a);
        if (ok) out.push_back(c);
    }
    if (out.empty()) throw InternalFault("gl2_cuspidals_with_central: no cuspidal with the given central character");
    return out;
}

/// A non-cuspidal irreducible of G whose restriction to H contains xi.
/// Requires H and U to meet trivially.
inline IrrLabel noncuspidal_cover(int n, int q, const Subgroup& U, const Subgroup& H, const ClassFunction& xi) {
    const Subgroup G = gl_fq(n, q);
    if (!H.is_subgroup_of(G) || !U.is_subgroup_of(G)) throw std::invalid_argument("noncuspidal_cover: subgroups must lie in GL_n(F_q)");
    for (auto x : H.elements()) {
        if (x != G.ambient().identity() && U.contains(x)) {
            throw std::invalid_argument("noncuspidal_cover: H meets U in " + mat::to_string(G.ambient().element(x)));
        }
    }
    for (const auto& sigma : irreducibles(n, q)) {
        if (is_cuspidal(sigma)) continue;
        if (inner_product(restrict_to(irr_character(sigma), H), xi).numerator() > 0) return sigma;
    }
    throw InternalFault("noncuspidal_cover: no non-cuspidal irreducible contains xi");
}

}  // namespace lzt
