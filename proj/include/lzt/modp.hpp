// Linear algebra and polynomial arithmetic over a prime field F_P, P < 2^31.
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lzt/numeric.hpp"

namespace lzt::modp {

using u64 = std::uint64_t;
using Vec = std::vector<u64>;
using Poly = std::vector<u64>;                // low degree first
using Matrix = std::vector<std::vector<u64>>;  // row major

struct Field {
    u64 P;

    u64 add(u64 a, u64 b) const { const u64 s = a + b; return s >= P ? s - P : s; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + P - b; }
    u64 mul(u64 a, u64 b) const { return a * b % P; }
    u64 neg(u64 a) const { return a == 0 ? 0 : P - a; }
    u64 inv(u64 a) const { return num::powmod(a, P - 2, P); }
    u64 pow(u64 a, u64 e) const { return num::powmod(a, e, P); }
};

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

/// Remainder of f by a nonzero g.
inline Poly rem(Poly f, const Poly& g, const Field& F) {
    trim(f);
    const int dg = degree(g);
    const u64 lead_inv = F.inv(g.back());
    while (degree(f) >= dg) {
        const u64 c = F.mul(f.back(), lead_inv);
        const int shift = degree(f) - dg;
        for (int i = 0; i <= dg; ++i) {
            auto& t = f[static_cast<std::size_t>(shift + i)];
            t = F.sub(t, F.mul(c, g[static_cast<std::size_t>(i)]));
        }
        trim(f);
    }
    return f;
}

/// Quotient of f by g; assumes exact division is not required.
inline Poly quot(Poly f, const Poly& g, const Field& F) {
    trim(f);
    const int dg = degree(g);
    if (degree(f) < dg) return {};
    Poly q(static_cast<std::size_t>(degree(f) - dg + 1), 0);
    const u64 lead_inv = F.inv(g.back());
    while (degree(f) >= dg) {
        const u64 c = F.mul(f.back(), lead_inv);
        const int shift = degree(f) - dg;
        q[static_cast<std::size_t>(shift)] = c;
        for (int i = 0; i <= dg; ++i) {
            auto& t = f[static_cast<std::size_t>(shift + i)];
            t = F.sub(t, F.mul(c, g[static_cast<std::size_t>(i)]));
        }
        trim(f);
    }
    return q;
}

inline Poly mul(const Poly& a, const Poly& b, const Field& F) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    return r;
}

inline Poly monic(Poly f, const Field& F) {
    trim(f);
    if (f.empty()) return f;
    const u64 li = F.inv(f.back());
    for (auto& c : f) c = F.mul(c, li);
    return f;
}

inline Poly gcd(Poly a, Poly b, const Field& F) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, F);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, F);
}

/// base^e mod f.
inline Poly powmod(Poly base, u64 e, const Poly& f, const Field& F) {
    Poly r{1};
    base = rem(base, f, F);
    while (e) {
        if (e & 1) r = rem(mul(r, base, F), f, F);
        base = rem(mul(base, base, F), f, F);
        e >>= 1;
    }
    return r;
}

/// Characteristic polynomial det(xI - A) via Hessenberg reduction.
inline Poly charpoly(Matrix A, const Field& F) {
    const std::size_t n = A.size();
    // Reduce to upper Hessenberg form by similarity.
    for (std::size_t k = 0; k + 2 <= n; ++k) {
        std::size_t piv = k + 1;
        while (piv < n && A[piv][k] == 0) ++piv;
        if (piv == n) continue;
        if (piv != k + 1) {
            std::swap(A[piv], A[k + 1]);
            for (std::size_t i = 0; i < n; ++i) std::swap(A[i][piv], A[i][k + 1]);
        }
        const u64 pinv = F.inv(A[k + 1][k]);
        for (std::size_t i = k + 2; i < n; ++i) {
            const u64 f = F.mul(A[i][k], pinv);
            if (f == 0) continue;
            for (std::size_t j = 0; j < n; ++j) A[i][j] = F.sub(A[i][j], F.mul(f, A[k + 1][j]));
            for (std::size_t j = 0; j < n; ++j) A[j][k + 1] = F.add(A[j][k + 1], F.mul(f, A[j][i]));
        }
    }
    // Recurrence on leading principal submatrices.
    std::vector<Poly> p(n + 1);
    p[0] = {1};
    for (std::size_t m = 1; m <= n; ++m) {
        // p_m = (x - a_mm) p_{m-1} - sum_{i<m} a_{i,m} prod_{j=i+1}^{m} a_{j,j-1} p_{i-1}
        Poly cur = mul({F.neg(A[m - 1][m - 1]), 1}, p[m - 1], F);
        u64 t = 1;
        for (std::size_t i = m - 1; i >= 1; --i) {
            t = F.mul(t, A[i][i - 1]);
            const u64 c = F.mul(t, A[i - 1][m - 1]);
            if (c != 0) {
                const Poly& q = p[i - 1];
                if (cur.size() < q.size()) cur.resize(q.size(), 0);
                for (std::size_t j = 0; j < q.size(); ++j) cur[j] = F.sub(cur[j], F.mul(c, q[j]));
            }
            if (t == 0) break;
        }
        trim(cur);
        p[m] = std::move(cur);
    }
    return p[n];
}

namespace detail {

inline void split_roots(const Poly& f, const Field& F, std::vector<u64>& out) {
    const int d = degree(f);
    if (d <= 0) return;
    if (d == 1) {
        out.push_back(F.neg(F.mul(f[0], F.inv(f[1]))));
        return;
    }
    // Cantor-Zassenhaus with deterministic shifts a = 0, 1, 2, ...
    for (u64 a = 0; a < F.P; ++a) {
        Poly h = powmod({a, 1}, (F.P - 1) / 2, f, F);
        if (h.empty()) h = {0};
        h[0] = F.sub(h[0], 1);
        Poly g = gcd(f, h, F);
        const int dg = degree(g);
        if (dg > 0 && dg < d) {
            split_roots(g, F, out);
            split_roots(quot(f, g, F), F, out);
            return;
        }
    }
    throw InternalFault("split_roots: no splitting shift found");
}

}  // namespace detail

/// Distinct roots of f in F_P, sorted.
inline std::vector<u64> distinct_roots(Poly f, const Field& F) {
    f = monic(std::move(f), F);
    std::vector<u64> out;
    if (degree(f) <= 0) return out;
    Poly xp = powmod({0, 1}, F.P, f, F);
    if (xp.size() < 2) xp.resize(2, 0);
    xp[1] = F.sub(xp[1], 1);
    trim(xp);
    Poly g = xp.empty() ? f : gcd(f, xp, F);
    // Zero is handled by the x factor inside x^P - x; split everything.
    detail::split_roots(g, F, out);
    std::sort(out.begin(), out.end());
    return out;
}

/// Basis of the right null space {v : A v = 0} of a rows x cols matrix.
inline std::vector<Vec> kernel(Matrix A, const Field& F) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows ? A[0].size() : 0;
    std::vector<std::size_t> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && A[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[r]);
        const u64 inv = F.inv(A[r][c]);
        for (auto& x : A[r]) x = F.mul(x, inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == 0) continue;
            const u64 f = A[i][c];
            for (std::size_t j = 0; j < cols; ++j) A[i][j] = F.sub(A[i][j], F.mul(f, A[r][j]));
        }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<char> is_piv(cols, 0);
    for (auto c : pivcol) is_piv[c] = 1;
    std::vector<Vec> basis;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_piv[fc]) continue;
        Vec v(cols, 0);
        v[fc] = 1;
        for (std::size_t i = 0; i < pivcol.size(); ++i) v[pivcol[i]] = F.neg(A[i][fc]);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Reduced row echelon form of the row vectors; returns the pivot columns.
inline std::vector<std::size_t> rref(std::vector<Vec>& rowsv, const Field& F) {
    std::vector<std::size_t> pivcol;
    if (rowsv.empty()) return pivcol;
    const std::size_t cols = rowsv[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rowsv.size(); ++c) {
        std::size_t piv = r;
        while (piv < rowsv.size() && rowsv[piv][c] == 0) ++piv;
        if (piv == rowsv.size()) continue;
        std::swap(rowsv[piv], rowsv[r]);
        const u64 inv = F.inv(rowsv[r][c]);
        for (auto& x : rowsv[r]) x = F.mul(x, inv);
        for (std::size_t i = 0; i < rowsv.size(); ++i) {
            if (i == r || rowsv[i][c] == 0) continue;
            const u64 f = rowsv[i][c];
            for (std::size_t j = 0; j < cols; ++j) rowsv[i][j] = F.sub(rowsv[i][j], F.mul(f, rowsv[r][j]));
        }
        pivcol.push_back(c);
        ++r;
    }
    rowsv.resize(r);
    return pivcol;
}

}  // namespace lzt::modp
