// Clifford theory for ind_{P_I(1,m+1)}^{P_I(1,m)}(1): the characters of
// K_I(m)/(K_I(m) ∩ P_I(1,m+1)), their orbits and stabilizers, orbit normal
// forms over the residue field, the explicit (n,1) extension U_eta and the
// Casselman pieces of GL_2.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lzt/chartheory.hpp"
#include "lzt/glnfq.hpp"
#include "lzt/ringmat.hpp"

namespace lzt {

// ---------------------------------------------------------------------------
// KMat: rectangular matrices over F_p

struct KMat {
    int rows = 0, cols = 0;
    std::vector<int> a;

    KMat() = default;
    KMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r * c), 0) {}

    int& operator()(int i, int j) { return a[static_cast<std::size_t>(i * cols + j)]; }
    int operator()(int i, int j) const { return a[static_cast<std::size_t>(i * cols + j)]; }
    bool is_zero() const { return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; }); }

    std::uint64_t key(int p) const {
        std::uint64_t k = 0;
        for (int v : a) k = k * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(v);
        return k;
    }
    static KMat from_key(std::uint64_t k, int r, int c, int p) {
        KMat m(r, c);
        for (int i = r * c - 1; i >= 0; --i) {
            m.a[static_cast<std::size_t>(i)] = static_cast<int>(k % static_cast<std::uint64_t>(p));
            k /= static_cast<std::uint64_t>(p);
        }
        return m;
    }
    static KMat identity(int n) {
        KMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    std::string to_string() const {
        std::ostringstream os;
        os << '[';
        for (int i = 0; i < rows; ++i) {
            if (i) os << ';';
            for (int j = 0; j < cols; ++j) {
                if (j) os << ',';
                os << (*this)(i, j);
            }
        }
        os << ']';
        return os.str();
    }
    friend bool operator==(const KMat&, const KMat&) = default;
};

namespace kmat {

inline KMat mul(const KMat& x, const KMat& y, int p) {
    if (x.cols != y.rows) throw std::invalid_argument("kmat::mul: shape mismatch");
    KMat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < y.cols; ++j) {
            int s = 0;
            for (int k = 0; k < x.cols; ++k) s = (s + x(i, k) * y(k, j)) % p;
            r(i, j) = s;
        }
    return r;
}

inline KMat from_mat(const Mat& g, int p) {
    KMat r(g.n, g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) r(i, j) = g(i, j) % p;
    return r;
}

inline KMat sub(const KMat& x, int r0, int c0, int rows, int cols) {
    KMat r(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r(i, j) = x(r0 + i, c0 + j);
    return r;
}

inline int inv(int x, int p) { return static_cast<int>(num::invmod(static_cast<std::uint64_t>(((x % p) + p) % p), static_cast<std::uint64_t>(p))); }

inline KMat inverse(const KMat& x, int p) {
    const int n = x.rows;
    KMat w(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) w(i, j) = x(i, j);
        w(i, n + i) = 1;
    }
    for (int c = 0; c < n; ++c) {
        int piv = c;
        while (piv < n && w(piv, c) == 0) ++piv;
        if (piv == n) throw std::domain_error("kmat::inverse: singular");
        for (int j = 0; j < 2 * n; ++j) std::swap(w(piv, j), w(c, j));
        const int iv = inv(w(c, c), p);
        for (int j = 0; j < 2 * n; ++j) w(c, j) = w(c, j) * iv % p;
        for (int i = 0; i < n; ++i) {
            if (i == c || w(i, c) == 0) continue;
            const int f = w(i, c);
            for (int j = 0; j < 2 * n; ++j) w(i, j) = ((w(i, j) - f * w(c, j)) % p + p) % p;
        }
    }
    return sub(w, 0, n, n, n);
}

/// P, Q invertible and t with P x Q = [[1_t, 0], [0, 0]].
struct RankForm {
    KMat P, Q;
    int t = 0;
};

inline RankForm rank_form(const KMat& x, int p) {
    KMat w = x;
    KMat P = KMat::identity(x.rows), Q = KMat::identity(x.cols);
    auto row_swap = [&](KMat& m, int i, int j) { for (int c = 0; c < m.cols; ++c) std::swap(m(i, c), m(j, c)); };
    auto col_swap = [&](KMat& m, int i, int j) { for (int r = 0; r < m.rows; ++r) std::swap(m(r, i), m(r, j)); };
    int t = 0;
    for (; t < std::min(w.rows, w.cols); ++t) {
        int pi = -1, pj = -1;
        for (int i = t; i < w.rows && pi < 0; ++i)
            for (int j = t; j < w.cols; ++j)
                if (w(i, j) != 0) { pi = i; pj = j; break; }
        if (pi < 0) break;
        row_swap(w, t, pi);
        row_swap(P, t, pi);
        col_swap(w, t, pj);
        col_swap(Q, t, pj);
        const int iv = inv(w(t, t), p);
        for (int c = 0; c < w.cols; ++c) w(t, c) = w(t, c) * iv % p;
        for (int c = 0; c < P.cols; ++c) P(t, c) = P(t, c) * iv % p;
        for (int i = 0; i < w.rows; ++i) {
            if (i == t || w(i, t) == 0) continue;
            const int f = w(i, t);
            for (int c = 0; c < w.cols; ++c) w(i, c) = ((w(i, c) - f * w(t, c)) % p + p) % p;
            for (int c = 0; c < P.cols; ++c) P(i, c) = ((P(i, c) - f * P(t, c)) % p + p) % p;
        }
        for (int j = 0; j < w.cols; ++j) {
            if (j == t || w(t, j) == 0) continue;
            const int f = w(t, j);
            for (int r = 0; r < w.rows; ++r) w(r, j) = ((w(r, j) - f * w(r, t)) % p + p) % p;
            for (int r = 0; r < Q.rows; ++r) Q(r, j) = ((Q(r, j) - f * Q(r, t)) % p + p) % p;
        }
    }
    return {P, Q, t};
}

/// Basis (as columns of the returned list) of {v : x v = 0}.
inline std::vector<std::vector<int>> right_kernel(const KMat& x, int p) {
    modp::Matrix A(static_cast<std::size_t>(x.rows), modp::Vec(static_cast<std::size_t>(x.cols)));
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<std::uint64_t>(x(i, j));
    std::vector<std::vector<int>> out;
    for (const auto& v : modp::kernel(A, modp::Field{static_cast<std::uint64_t>(p)})) out.emplace_back(v.begin(), v.end());
    return out;
}

/// Basis of the column space.
inline std::vector<std::vector<int>> column_space(const KMat& x, int p) {
    std::vector<modp::Vec> cols;
    for (int j = 0; j < x.cols; ++j) {
        modp::Vec v(static_cast<std::size_t>(x.rows));
        for (int i = 0; i < x.rows; ++i) v[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(x(i, j));
        cols.push_back(v);
    }
    modp::rref(cols, modp::Field{static_cast<std::uint64_t>(p)});
    std::vector<std::vector<int>> out;
    for (const auto& v : cols) out.emplace_back(v.begin(), v.end());
    return out;
}

/// True when g maps span(W) into itself (column action).
inline bool preserves(const KMat& g, const std::vector<std::vector<int>>& W, int p) {
    if (W.empty()) return true;
    const std::size_t n = W[0].size();
    std::vector<modp::Vec> rows;
    for (const auto& w : W) rows.emplace_back(w.begin(), w.end());
    const modp::Field F{static_cast<std::uint64_t>(p)};
    modp::rref(rows, F);
    const std::size_t d = rows.size();
    for (const auto& w : W) {
        modp::Vec img(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = 0;
            for (std::size_t j = 0; j < n; ++j) s += static_cast<std::uint64_t>(g(static_cast<int>(i), static_cast<int>(j)) * w[j]);
            img[i] = s % static_cast<std::uint64_t>(p);
        }
        auto ext = rows;
        ext.push_back(img);
        if (modp::rref(ext, F).size() != d) return false;
    }
    return true;
}

}  // namespace kmat

// ---------------------------------------------------------------------------
// Clifford setup

/// Data for the pair P_I(1,m+1) < P_I(1,m) inside GL_n(Z/p^M).
struct CliffordSetup {
    std::shared_ptr<const GLGroup> G;
    Partition I;
    int p = 2, m = 1, M = 2;
    int top = 0, nr = 0;
    Subgroup P1m, P1m1, K, Kp;
    std::vector<std::int32_t> basis;  // u_ij = 1 + p^m E_{top+i, j}, index i*top + j

    /// (bottom-left block / p^m) mod p, an nr x top matrix.
    KMat cbar(const Mat& k) const {
        const int pm = static_cast<int>(num::ipow(p, m));
        KMat c(nr, top);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < top; ++j) c(i, j) = (k(top + i, j) / pm) % p;
        return c;
    }

    /// Exponent of eta_A(k) = psi(tr(A cbar(k))).
    int eta_exponent(const KMat& A, const Mat& k) const {
        const KMat c = cbar(k);
        int s = 0;
        for (int a = 0; a < top; ++a)
            for (int b = 0; b < nr; ++b) s += A(a, b) * c(b, a);
        return s % p;
    }

    /// Matrix of g . eta_A, where (g . eta)(k) = eta(g^{-1} k g).
    KMat act(std::int32_t g, const KMat& A) const {
        KMat out(top, nr);
        const auto gi = G->inverse(g);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < top; ++j) {
                const auto u = basis[static_cast<std::size_t>(i * top + j)];
                out(j, i) = eta_exponent(A, G->element(G->mul(G->mul(gi, u), g)));
            }
        return out;
    }

    std::size_t character_count() const { return static_cast<std::size_t>(num::ipow(p, top * nr)); }
};

inline CliffordSetup clifford_setup(const Partition& I, int m, int M, int p) {
    if (I.r() < 2) throw std::invalid_argument("clifford: needs a partition with at least two parts");
    if (m < 1 || m + 1 > M) throw std::invalid_argument("clifford: needs 1 <= m and m + 1 <= M");
    CliffordSetup s;
    s.G = gl_group(I.n(), make_ring(p, M));
    s.I = I;
    s.p = p;
    s.m = m;
    s.M = M;
    s.nr = I.last();
    s.top = I.n() - s.nr;
    s.P1m = subgroup(s.G, {SubgroupKind::ParabolicOneM, I, m});
    s.P1m1 = subgroup(s.G, {SubgroupKind::ParabolicOneM, I, m + 1});
    s.K = subgroup(s.G, {SubgroupKind::KI, I, m});
    s.Kp = Subgroup::intersect(s.K, s.P1m1);
    const int pm = static_cast<int>(num::ipow(p, m));
    for (int i = 0; i < s.nr; ++i)
        for (int j = 0; j < s.top; ++j) {
            Mat u = mat::identity(I.n());
            u(s.top + i, j) = pm;
            s.basis.push_back(s.G->index_of(u));
        }
    return s;
}

// ---------------------------------------------------------------------------
// Orbit normal form over the residue field

enum class OrbitTag { Zero, Cond1, Cond2 };

inline std::string to_string(OrbitTag t) {
    switch (t) {
        case OrbitTag::Zero: return "zero";
        case OrbitTag::Cond1: return "cond1";
        case OrbitTag::Cond2: return "cond2";
    }
    return "?";
}

struct NormalForm {
    KMat rep;                               // A' = g1 A g2^{-1}
    KMat g1, g2;                            // the transforming pair
    OrbitTag tag = OrbitTag::Zero;
    int block = 0;                          // j for cond1, i for cond2 (1-based)
    int l = 0;                              // last nonzero block (1-based)
    int t = 0;                              // rank of the block A_l
    std::vector<std::vector<int>> subspace; // invariant subspace for cond1
    bool certified = false;                 // stabilizer enumeration agrees
    std::string certificate;                // human-readable summary
};

namespace detail {

/// Elements of GL_k(F_p) as KMats (cached via the group cache).
inline std::vector<KMat> gl_kmats(int k, int p) {
    std::vector<KMat> out;
    for (const auto& g : gl_group(k, make_ring(p, 1))->elements()) out.push_back(kmat::from_mat(g, p));
    return out;
}

}  // namespace detail

/// Normal form of a nonzero A in M_{(n-n_r) x n_r}(F_p) under
/// P_{I'}(F_p) x GL_{n_r}(F_p), with the condition of the orbit lemma
/// certified by enumerating the stabilizer inside M_I(F_p).
inline NormalForm orbit_normal_form(const KMat& A, const Partition& I, int p) {
    if (I.r() < 2) throw std::invalid_argument("orbit_normal_form: needs r >= 2");
    const int nr = I.last();
    const int top = I.n() - nr;
    if (A.rows != top || A.cols != nr) throw std::invalid_argument("orbit_normal_form: A has the wrong shape");
    if (A.is_zero()) throw std::invalid_argument("orbit_normal_form: A must be nonzero");
    const auto off = I.offsets();
    NormalForm nf;
    for (int k = I.r() - 2; k >= 0; --k) {
        const KMat blk = kmat::sub(A, off[static_cast<std::size_t>(k)], 0, I.parts[static_cast<std::size_t>(k)], nr);
        if (!blk.is_zero()) { nf.l = k + 1; break; }
    }
    const int li = nf.l - 1;
    const int nl = I.parts[static_cast<std::size_t>(li)];
    const int r0 = off[static_cast<std::size_t>(li)];
    const auto rf = kmat::rank_form(kmat::sub(A, r0, 0, nl, nr), p);
    nf.t = rf.t;
    nf.g1 = KMat::identity(top);
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j) nf.g1(r0 + i, r0 + j) = rf.P(i, j);
    nf.g2 = kmat::inverse(rf.Q, p);
    nf.rep = kmat::mul(kmat::mul(nf.g1, A, p), rf.Q, p);

    // Stabilizer of rep inside M_I(F_p): B in GL_{n_r}, M_k in GL_{n_k} with M_k A_k = A_k B.
    std::vector<KMat> blocks;
    for (int k = 0; k + 1 < I.r(); ++k) blocks.push_back(kmat::sub(nf.rep, off[static_cast<std::size_t>(k)], 0, I.parts[static_cast<std::size_t>(k)], nr));
    const auto Bs = detail::gl_kmats(nr, p);
    std::vector<std::vector<KMat>> candidates;
    for (int k = 0; k + 1 < I.r(); ++k) candidates.push_back(detail::gl_kmats(I.parts[static_cast<std::size_t>(k)], p));
    std::vector<KMat> proj_r;
    std::vector<std::vector<KMat>> proj(static_cast<std::size_t>(I.r() - 1));
    bool cond2_holds = true;
    for (const auto& B : Bs) {
        std::vector<std::vector<KMat>> sols(static_cast<std::size_t>(I.r() - 1));
        bool all = true;
        for (int k = 0; k + 1 < I.r() && all; ++k) {
            const auto& Ak = blocks[static_cast<std::size_t>(k)];
            const KMat rhs = kmat::mul(Ak, B, p);
            for (const auto& Mk : candidates[static_cast<std::size_t>(k)]) {
                if (kmat::mul(Mk, Ak, p) == rhs) sols[static_cast<std::size_t>(k)].push_back(Mk);
            }
            all = !sols[static_cast<std::size_t>(k)].empty();
        }
        if (!all) continue;
        proj_r.push_back(B);
        for (int k = 0; k + 1 < I.r(); ++k) {
            auto& dst = proj[static_cast<std::size_t>(k)];
            dst.insert(dst.end(), sols[static_cast<std::size_t>(k)].begin(), sols[static_cast<std::size_t>(k)].end());
        }
        if (nl == nr) {
            for (const auto& Ml : sols[static_cast<std::size_t>(li)]) if (!(Ml == B)) cond2_holds = false;
        }
    }
    if (nf.t == nl && nl == nr) {
        nf.tag = OrbitTag::Cond2;
        nf.block = nf.l;
        nf.certified = cond2_holds;
        nf.certificate = "p_" + std::to_string(nf.l) + " = p_" + std::to_string(I.r()) + " on the stabilizer";
        return nf;
    }
    nf.tag = OrbitTag::Cond1;
    const KMat Al = blocks[static_cast<std::size_t>(li)];
    const auto ker = kmat::right_kernel(Al, p);
    if (!ker.empty() && static_cast<int>(ker.size()) < nr) {
        bool ok = std::all_of(proj_r.begin(), proj_r.end(), [&](const KMat& B) { return kmat::preserves(B, ker, p); });
        if (ok) {
            nf.block = I.r();
            nf.subspace = ker;
            nf.certified = true;
            nf.certificate = "p_" + std::to_string(I.r()) + " preserves ker A_l (dim " + std::to_string(ker.size()) + ")";
            return nf;
        }
    }
    const auto im = kmat::column_space(Al, p);
    if (!im.empty() && static_cast<int>(im.size()) < nl) {
        const auto& pl = proj[static_cast<std::size_t>(li)];
        bool ok = std::all_of(pl.begin(), pl.end(), [&](const KMat& Mk) { return kmat::preserves(Mk, im, p); });
        if (ok) {
            nf.block = nf.l;
            nf.subspace = im;
            nf.certified = true;
            nf.certificate = "p_" + std::to_string(nf.l) + " preserves Im A_l (dim " + std::to_string(im.size()) + ")";
            return nf;
        }
    }
    nf.certificate = "no invariant subspace found";
    return nf;
}

/// Orbits of P_{I'}(F_p) x GL_{n_r}(F_p) on M_{(n-n_r) x n_r}(F_p) under
/// (g1, g2) A = g1 A g2^{-1}; representatives are key-minimal.
inline std::vector<std::vector<KMat>> residue_orbits(const Partition& I, int p) {
    const int nr = I.last();
    const int top = I.n() - nr;
    const Subgroup Pp = subgroup(gl_group(top, make_ring(p, 1)), {SubgroupKind::Parabolic, I.truncated(), 1});
    const Subgroup Gr = Subgroup::full(gl_group(nr, make_ring(p, 1)));
    std::vector<KMat> g1s, g2inv;
    for (auto g : Pp.generators()) g1s.push_back(kmat::from_mat(Pp.ambient().element(g), p));
    for (auto g : Gr.generators()) g2inv.push_back(kmat::inverse(kmat::from_mat(Gr.ambient().element(g), p), p));
    const std::uint64_t total = static_cast<std::uint64_t>(num::ipow(p, top * nr));
    std::vector<int> seen(total, -1);
    std::vector<std::vector<KMat>> orbits;
    for (std::uint64_t k = 0; k < total; ++k) {
        if (seen[k] >= 0) continue;
        const int id = static_cast<int>(orbits.size());
        std::vector<KMat> orb{KMat::from_key(k, top, nr, p)};
        seen[k] = id;
        for (std::size_t q = 0; q < orb.size(); ++q) {
            std::vector<KMat> next;
            for (const auto& g : g1s) next.push_back(kmat::mul(g, orb[q], p));
            for (const auto& h : g2inv) next.push_back(kmat::mul(orb[q], h, p));
            for (auto& y : next) {
                const auto ky = y.key(p);
                if (seen[ky] < 0) {
                    seen[ky] = id;
                    orb.push_back(std::move(y));
                }
            }
        }
        std::sort(orb.begin(), orb.end(), [p](const KMat& a, const KMat& b) { return a.key(p) < b.key(p); });
        orbits.push_back(std::move(orb));
    }
    return orbits;
}

// ---------------------------------------------------------------------------
// Clifford orbits

struct CliffordOrbit {
    std::vector<KMat> members;  // matrices A = theta_I(eta), key-sorted
    KMat rep;                   // key-minimal member
    Subgroup Z;                 // P_I(1,m)-stabilizer of eta_rep
    OrbitTag tag = OrbitTag::Zero;
};

/// Stabilizer in P_I(1,m) of eta_A.
inline Subgroup eta_stabilizer(const CliffordSetup& s, const KMat& A) {
    std::vector<std::int32_t> sel;
    for (auto g : s.P1m.elements()) if (s.act(g, A) == A) sel.push_back(g);
    return Subgroup::from_verified_set(s.G, "Z(" + A.to_string() + ")", std::move(sel));
}

inline std::vector<CliffordOrbit> clifford_orbits(const CliffordSetup& s) {
    const std::uint64_t total = s.character_count();
    std::vector<int> seen(total, -1);
    std::vector<CliffordOrbit> out;
    for (std::uint64_t k = 0; k < total; ++k) {
        if (seen[k] >= 0) continue;
        const int id = static_cast<int>(out.size());
        std::vector<KMat> orb{KMat::from_key(k, s.top, s.nr, s.p)};
        seen[k] = id;
        for (std::size_t q = 0; q < orb.size(); ++q) {
            for (auto g : s.P1m.generators()) {
                KMat y = s.act(g, orb[q]);
                const auto ky = y.key(s.p);
                if (seen[ky] < 0) {
                    seen[ky] = id;
                    orb.push_back(std::move(y));
                }
            }
        }
        std::sort(orb.begin(), orb.end(), [&](const KMat& a, const KMat& b) { return a.key(s.p) < b.key(s.p); });
        CliffordOrbit o;
        o.rep = orb.front();
        o.members = std::move(orb);
        o.Z = eta_stabilizer(s, o.rep);
        o.tag = o.rep.is_zero() ? OrbitTag::Zero : orbit_normal_form(o.rep, s.I, s.p).tag;
        out.push_back(std::move(o));
    }
    return out;
}

inline std::vector<CliffordOrbit> clifford_orbits(const Partition& I, int m, int M, int p) {
    return clifford_orbits(clifford_setup(I, m, M, p));
}

// ---------------------------------------------------------------------------
// Clifford decomposition check

struct CliffordReport {
    bool ok = false;
    Rational identity_multiplicity{0};
    std::size_t orbit_count = 0;
    std::int64_t index = 0;           // [P_I(1,m) : P_I(1,m+1)]
    std::int64_t orbit_dim_sum = 0;   // 1 + sum of induced dimensions
    bool zero_stabilizer_full = false;
    std::string detail;
};

/// ind_{P_I(1,m+1)}^{P_I(1,m)}(1) = 1 + sum over nonzero orbits of
/// ind_{Z(eta)}(U_eta), with U_eta the eta-isotypic part on Z(eta).
inline CliffordReport clifford_decomposition_check(const CliffordSetup& s) {
    CliffordReport rep;
    const auto& G = *s.G;
    const ClassFunction rho = induce(s.P1m1, trivial_character(s.P1m1), s.P1m);
    rep.identity_multiplicity = inner_product(rho, trivial_character(s.P1m));
    rep.index = static_cast<std::int64_t>(s.P1m.order() / s.P1m1.order());
    ClassFunction total = trivial_character(s.P1m);
    rep.orbit_dim_sum = 1;
    const auto orbits = clifford_orbits(s);
    rep.orbit_count = orbits.size();
    bool ok = true;
    for (const auto& o : orbits) {
        if (o.rep.is_zero()) {
            rep.zero_stabilizer_full = o.Z.order() == s.P1m.order();
            continue;
        }
        const auto zc = conjugacy_classes(o.Z);
        ClassFunction U{o.Z, {}};
        for (auto z : zc->reps) {
            std::vector<Cyclotomic> by_exp(static_cast<std::size_t>(s.p), Cyclotomic::integer(0));
            for (auto k : s.K.elements()) {
                const int ex = s.eta_exponent(o.rep, G.element(k));
                by_exp[static_cast<std::size_t>(ex)] += rho.at(G.mul(k, z));
            }
            Cyclotomic acc = Cyclotomic::integer(0);
            for (int ex = 0; ex < s.p; ++ex) acc += Cyclotomic::root(s.p, -ex) * by_exp[static_cast<std::size_t>(ex)];
            U.values.push_back(acc.divided_by(static_cast<std::int64_t>(s.K.order())));
        }
        if (!(U.values[0] == Cyclotomic::integer(1)) || inner_product(U, U) != Rational(1)) {
            ok = false;
            rep.detail += "U_eta for " + o.rep.to_string() + " is not a linear character; ";
            continue;
        }
        const ClassFunction ind = induce(o.Z, U, s.P1m);
        rep.orbit_dim_sum += ind.degree();
        total = total + ind;
    }
    if (!(total == rho)) {
        ok = false;
        rep.detail += "character identity fails; ";
    }
    if (rep.identity_multiplicity != Rational(1)) {
        ok = false;
        rep.detail += "identity multiplicity is not one; ";
    }
    if (rep.orbit_dim_sum != rep.index) {
        ok = false;
        rep.detail += "dimensions do not add up to the index; ";
    }
    if (!rep.zero_stabilizer_full) {
        ok = false;
        rep.detail += "stabilizer of the trivial character is not P_I(1,m); ";
    }
    rep.ok = ok;
    return rep;
}

inline CliffordReport clifford_decomposition_check(const Partition& I, int m, int M, int p) {
    return clifford_decomposition_check(clifford_setup(I, m, M, p));
}

// ---------------------------------------------------------------------------
// Structural checks

/// K_I(m) normal in P_I(1,m), and K_I(m) ∩ P_I(1,m+1) normal in K_I(m).
inline bool normality_check(const CliffordSetup& s) {
    const auto& G = *s.G;
    auto normal_in = [&](const Subgroup& N, const Subgroup& H) {
        for (auto g : H.generators())
            for (auto x : N.generators())
                if (!N.contains(G.conjugate(x, g))) return false;
        return true;
    };
    return s.K.is_subgroup_of(s.P1m) && normal_in(s.K, s.P1m) && normal_in(s.Kp, s.K);
}

/// theta_I: cbar is a homomorphism on K_I(m) with kernel K_I(m) ∩ P_I(1,m+1),
/// the lower unipotent part maps onto the quotient, and the action of
/// M_{(n-n_r,n_r)} ∩ P_I(1,m) on characters is A -> g1 A g2^{-1}.
inline bool theta_check(const CliffordSetup& s, std::string* why = nullptr) {
    const auto& G = *s.G;
    auto fail = [&](const std::string& w) {
        if (why) *why = w;
        return false;
    };
    const int p = s.p;
    auto add = [p](KMat a, const KMat& b) {
        for (std::size_t i = 0; i < a.a.size(); ++i) a.a[i] = (a.a[i] + b.a[i]) % p;
        return a;
    };
    for (auto g : s.K.generators())
        for (auto x : s.K.elements())
            if (!(s.cbar(G.element(G.mul(x, g))) == add(s.cbar(G.element(x)), s.cbar(G.element(g))))) return fail("cbar not additive");
    for (auto x : s.K.elements())
        if (s.cbar(G.element(x)).is_zero() != s.Kp.contains(x)) return fail("kernel of cbar differs from K ∩ P_I(1,m+1)");
    if (s.K.order() / s.Kp.order() != s.character_count()) return fail("quotient has the wrong order");
    const Partition two({s.top, s.nr});
    const Subgroup Ubar = subgroup(s.G, {SubgroupKind::LowerUnipotent, two, 1});
    const Subgroup KU = Subgroup::intersect(s.K, Ubar);
    const Subgroup KU1 = Subgroup::intersect(KU, s.P1m1);
    if (KU.order() / KU1.order() != s.character_count()) return fail("lower unipotent quotient has the wrong order");
    const Subgroup Levi = Subgroup::intersect(subgroup(s.G, {SubgroupKind::Levi, two, 1}), s.P1m);
    const std::uint64_t total = s.character_count();
    for (auto g : Levi.generators()) {
        const Mat& gm = G.element(g);
        const KMat g1 = kmat::sub(kmat::from_mat(gm, p), 0, 0, s.top, s.top);
        const KMat g2 = kmat::sub(kmat::from_mat(gm, p), s.top, s.top, s.nr, s.nr);
        const KMat g2i = kmat::inverse(g2, p);
        for (std::uint64_t k = 0; k < total; ++k) {
            const KMat A = KMat::from_key(k, s.top, s.nr, p);
            if (!(s.act(g, A) == kmat::mul(kmat::mul(g1, A, p), g2i, p))) return fail("equivariance fails at " + A.to_string());
        }
    }
    return true;
}

/// B(V, U) = psi(tr(VU)) on M_{a x b} x M_{b x a}: V -> B(V, .) is injective
/// (hence onto all q^{ab} characters) and equivariant for GL_a x GL_b.
inline bool trace_pairing_check(int a, int b, int p) {
    const std::uint64_t total = static_cast<std::uint64_t>(num::ipow(p, a * b));
    std::set<std::vector<int>> images;
    for (std::uint64_t k = 0; k < total; ++k) {
        const KMat V = KMat::from_key(k, a, b, p);
        // Values on the elementary matrices E_ji of M_{b x a} determine the character.
        std::vector<int> vals;
        for (int j = 0; j < b; ++j)
            for (int i = 0; i < a; ++i) {
                KMat E(b, a);
                E(j, i) = 1;
                const KMat VU = kmat::mul(V, E, p);
                int tr = 0;
                for (int t = 0; t < a; ++t) tr += VU(t, t);
                vals.push_back(tr % p);
            }
        images.insert(vals);
    }
    if (images.size() != total) return false;
    // Equivariance: tr(V g2^{-1} U g1) = tr(g1 V g2^{-1} U) for generators and all V, U basis.
    const Subgroup Ga = Subgroup::full(gl_group(a, make_ring(p, 1)));
    const Subgroup Gb = Subgroup::full(gl_group(b, make_ring(p, 1)));
    for (auto x : Ga.generators()) {
        for (auto y : Gb.generators()) {
            const KMat g1 = kmat::from_mat(Ga.ambient().element(x), p);
            const KMat g2i = kmat::inverse(kmat::from_mat(Gb.ambient().element(y), p), p);
            for (std::uint64_t k = 0; k < total; ++k) {
                const KMat V = KMat::from_key(k, a, b, p);
                for (std::uint64_t u = 0; u < total; u += std::max<std::uint64_t>(1, total / 16)) {
                    const KMat U = KMat::from_key(u, b, a, p);
                    auto tr = [p](const KMat& X) { int s = 0; for (int t = 0; t < X.rows; ++t) s += X(t, t); return s % p; };
                    const int lhs = tr(kmat::mul(kmat::mul(kmat::mul(V, g2i, p), U, p), g1, p));
                    const int rhs = tr(kmat::mul(kmat::mul(kmat::mul(g1, V, p), g2i, p), U, p));
                    if (lhs != rhs) return false;
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Explicit U_eta for P_{(n,1)} and the Casselman pieces of GL_2

struct UEta {
    CliffordSetup setup;
    KMat A;
    Subgroup Z;
    ClassFunction U;
};

/// For I = (n, 1) and nonzero A (n x 1): the linear character
/// U_eta(z) = psi(e^{-1} cbar(z) A) on Z(eta_A), e the corner entry of z.
/// With A = e_n this is the character z -> eta(p^m y') normalized by e.
inline UEta u_eta_character_n1(int n, int p, int m, int M, std::optional<KMat> A = std::nullopt) {
    UEta r;
    r.setup = clifford_setup(Partition({n, 1}), m, M, p);
    if (!A) {
        KMat e(n, 1);
        e(n - 1, 0) = 1;
        A = e;
    }
    if (A->rows != n || A->cols != 1) throw std::invalid_argument("u_eta_character_n1: A must be n x 1");
    if (A->is_zero()) throw std::invalid_argument("u_eta_character_n1: eta must be nontrivial");
    r.A = *A;
    r.Z = eta_stabilizer(r.setup, r.A);
    const auto& s = r.setup;
    auto value_exp = [&](const Mat& z) {
        const int e = z(n, n) % p;
        return s.eta_exponent(r.A, z) * kmat::inv(e, p) % p;
    };
    r.U = from_function(r.Z, [&](const Mat& z) { return psi(p, value_exp(z)); });
    // Multiplicativity on Z: full table when small, else against generators.
    const auto& G = *s.G;
    const bool full = r.Z.order() * r.Z.order() <= 4000000;
    const auto& right = full ? r.Z.elements() : r.Z.generators();
    for (auto x : r.Z.elements())
        for (auto y : right)
            if ((value_exp(G.element(x)) + value_exp(G.element(y))) % p != value_exp(G.element(G.mul(x, y))))
                throw InternalFault("u_eta_character_n1: not multiplicative");
    for (auto k : s.K.elements())
        if (value_exp(G.element(k)) != s.eta_exponent(r.A, G.element(k))) throw InternalFault("u_eta_character_n1: does not extend eta");
    return r;
}

/// (varpi ⊠ 1)(z) = varpi(z_11 mod p) on a subgroup of GL_2(Z/p^M).
inline ClassFunction varpi_character(const Subgroup& H, const IrrLabel& varpi) {
    if (varpi.n != 1) throw std::invalid_argument("varpi must be a character of GL_1(F_p)");
    const auto& chi = irr_character(varpi);
    const auto& G1 = chi.group.ambient();
    const int p = varpi.q;
    return from_function(H, [&](const Mat& z) {
        Mat a = mat::zero(1);
        a(0, 0) = z(0, 0) % p;
        return chi.at(G1.index_of(a));
    });
}

/// U_i(varpi) on GL_2(Z/p^M): ind_{B(1)} for i = 1, else ind_{B(i)} - ind_{B(i-1)}.
inline ClassFunction casselman_u_i(const IrrLabel& varpi, int i, int M) {
    const int p = varpi.q;
    if (i < 1 || i > M) throw std::invalid_argument("casselman_u_i: need 1 <= i <= M");
    auto G = gl_group(2, make_ring(p, M));
    const Subgroup full = Subgroup::full(G);
    auto ind_b = [&](int level) {
        const Subgroup B = subgroup(G, {SubgroupKind::Borel, Partition({2}), level});
        return induce(B, varpi_character(B, varpi), full);
    };
    if (i == 1) return ind_b(1);
    return ind_b(i) - ind_b(i - 1);
}

/// ind_{Z(eta)}^{GL_2}(U_eta ⊗ (varpi ⊠ 1)) at Clifford level m = i - 1.
inline ClassFunction casselman_clifford_form(const IrrLabel& varpi, int i, int M) {
    if (i < 2 || i > M) throw std::invalid_argument("casselman_clifford_form: need 2 <= i <= M");
    const UEta u = u_eta_character_n1(1, varpi.q, i - 1, M);
    const Subgroup full = Subgroup::full(u.setup.G);
    return induce(u.Z, tensor(u.U, varpi_character(u.Z, varpi)), full);
}

}  // namespace lzt
