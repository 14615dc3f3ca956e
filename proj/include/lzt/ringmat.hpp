// Residue rings Z/p^m, small matrices over them, enumeration of GL_n(Z/p^m)
// and the block subgroups (parabolic preimages, congruence subgroups, Levi
// and unipotent pieces, mirabolic) used throughout the library.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lzt/numeric.hpp"

namespace lzt {

// ---------------------------------------------------------------------------
// FiniteRing

/// The ring Z/p^m. Models O_F / P_F^m for a local field with residue field F_p.
struct FiniteRing {
    int p = 2;
    int m = 1;
    int mod = 2;  // p^m

    bool is_unit(std::int64_t x) const { return ((x % p) + p) % p != 0; }
    int unit_count() const { return mod - mod / p; }
    int norm(std::int64_t x) const { return static_cast<int>(((x % mod) + mod) % mod); }
    /// Residue field F_p.
    FiniteRing residue_field() const { return FiniteRing{p, 1, p}; }
    friend bool operator==(const FiniteRing&, const FiniteRing&) = default;
};

/// Z/p^m; rejects non-prime p and m < 1.
inline FiniteRing make_ring(int p, int m) {
    if (p < 2 || !num::is_prime(static_cast<std::uint64_t>(p))) {
        throw std::invalid_argument("make_ring: p = " + std::to_string(p) + " is not prime");
    }
    if (m < 1) throw std::invalid_argument("make_ring: depth must be at least 1");
    FiniteRing r;
    r.p = p;
    r.m = m;
    r.mod = static_cast<int>(num::ipow(p, m));
    return r;
}

// ---------------------------------------------------------------------------
// Mat: a square matrix of size <= 4 with entries reduced modulo some p^m.

struct Mat {
    int n = 0;
    std::array<std::int32_t, 16> a{};

    std::int32_t& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
    std::int32_t operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
    friend bool operator==(const Mat& x, const Mat& y) { return x.n == y.n && x.a == y.a; }
};

namespace mat {

inline Mat identity(int n) {
    Mat r;
    r.n = n;
    for (int i = 0; i < n; ++i) r(i, i) = 1;
    return r;
}

inline Mat zero(int n) {
    Mat r;
    r.n = n;
    return r;
}

inline Mat from_rows(const std::vector<std::vector<int>>& rows, int mod) {
    Mat r;
    r.n = static_cast<int>(rows.size());
    if (r.n < 1 || r.n > 4) throw std::invalid_argument("Mat: size must be 1..4");
    for (int i = 0; i < r.n; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != r.n) throw std::invalid_argument("Mat: ragged rows");
        for (int j = 0; j < r.n; ++j) r(i, j) = static_cast<std::int32_t>(((rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] % mod) + mod) % mod);
    }
    return r;
}

inline Mat mul(const Mat& x, const Mat& y, int mod) {
    Mat r;
    r.n = x.n;
    const int n = x.n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::int64_t s = 0;
            for (int k = 0; k < n; ++k) s += static_cast<std::int64_t>(x(i, k)) * y(k, j);
            r(i, j) = static_cast<std::int32_t>(s % mod);
        }
    }
    return r;
}

inline Mat reduce(const Mat& x, int mod) {
    Mat r = x;
    for (int i = 0; i < x.n * x.n; ++i) r.a[static_cast<std::size_t>(i)] %= mod;
    return r;
}

/// Square sub-block starting at (r0, c0) of the given size.
inline Mat block(const Mat& x, int r0, int c0, int size) {
    Mat r;
    r.n = size;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) r(i, j) = x(r0 + i, c0 + j);
    return r;
}

inline std::int64_t det(const Mat& x, int mod) {
    const int n = x.n;
    if (n == 1) return x(0, 0) % mod;
    std::int64_t s = 0;
    // Laplace expansion along the first row; n <= 4.
    for (int j = 0; j < n; ++j) {
        if (x(0, j) == 0) continue;
        Mat minor;
        minor.n = n - 1;
        for (int i = 1; i < n; ++i) {
            int cj = 0;
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                minor(i - 1, cj++) = x(i, k);
            }
        }
        std::int64_t term = static_cast<std::int64_t>(x(0, j)) * det(minor, mod) % mod;
        s += (j % 2 == 0) ? term : -term;
    }
    return ((s % mod) + mod) % mod;
}

/// Inverse over Z/p^m by Gauss-Jordan with unit pivots; nullopt if singular.
inline std::optional<Mat> inverse(const Mat& x, const FiniteRing& R) {
    const int n = x.n;
    const int mod = R.mod;
    std::array<std::array<std::int64_t, 8>, 4> w{};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = x(i, j);
        w[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = 1;
    }
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i) {
            if (R.is_unit(w[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)])) { piv = i; break; }
        }
        if (piv < 0) return std::nullopt;
        std::swap(w[static_cast<std::size_t>(piv)], w[static_cast<std::size_t>(c)]);
        auto& prow = w[static_cast<std::size_t>(c)];
        const std::int64_t inv = static_cast<std::int64_t>(num::invmod(static_cast<std::uint64_t>(R.norm(prow[static_cast<std::size_t>(c)])), static_cast<std::uint64_t>(mod)));
        for (int j = 0; j < 2 * n; ++j) prow[static_cast<std::size_t>(j)] = prow[static_cast<std::size_t>(j)] * inv % mod;
        for (int i = 0; i < n; ++i) {
            if (i == c) continue;
            auto& row = w[static_cast<std::size_t>(i)];
            const std::int64_t f = row[static_cast<std::size_t>(c)] % mod;
            if (f == 0) continue;
            for (int j = 0; j < 2 * n; ++j) row[static_cast<std::size_t>(j)] = ((row[static_cast<std::size_t>(j)] - f * prow[static_cast<std::size_t>(j)]) % mod + mod) % mod;
        }
    }
    Mat r;
    r.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = static_cast<std::int32_t>(w[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + j)]);
    return r;
}

/// Row-major base-`mod` digit key; the most significant digit is entry (0,0).
inline std::uint64_t key(const Mat& x, int mod) {
    std::uint64_t k = 0;
    for (int i = 0; i < x.n * x.n; ++i) k = k * static_cast<std::uint64_t>(mod) + static_cast<std::uint64_t>(x.a[static_cast<std::size_t>(i)]);
    return k;
}

inline Mat from_key(std::uint64_t k, int n, int mod) {
    Mat r;
    r.n = n;
    for (int i = n * n - 1; i >= 0; --i) {
        r.a[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(k % static_cast<std::uint64_t>(mod));
        k /= static_cast<std::uint64_t>(mod);
    }
    return r;
}

inline std::string to_string(const Mat& x) {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < x.n; ++i) {
        if (i) os << ';';
        for (int j = 0; j < x.n; ++j) {
            if (j) os << ',';
            os << x(i, j);
        }
    }
    os << ']';
    return os.str();
}

/// Inverse of to_string: "[a,b;c,d]".
inline Mat parse(const std::string& s, int mod) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw std::invalid_argument("Mat::parse: " + s);
    std::vector<std::vector<int>> rows;
    std::stringstream rs(s.substr(1, s.size() - 2));
    std::string row;
    while (std::getline(rs, row, ';')) {
        std::vector<int> vals;
        std::stringstream cs(row);
        std::string tok;
        while (std::getline(cs, tok, ',')) vals.push_back(std::stoi(tok));
        rows.push_back(vals);
    }
    return from_rows(rows, mod);
}

}  // namespace mat

// ---------------------------------------------------------------------------
// Partition

/// Ordered partition (n_1, ..., n_r) of n into positive parts.
struct Partition {
    std::vector<int> parts;

    Partition() = default;
    explicit Partition(std::vector<int> p) : parts(std::move(p)) {
        if (parts.empty()) throw std::invalid_argument("Partition: needs at least one part");
        for (int v : parts) if (v < 1) throw std::invalid_argument("Partition: parts must be positive");
    }

    int n() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    int r() const { return static_cast<int>(parts.size()); }
    int last() const { return parts.back(); }

    /// (n_1, ..., n_{r-1}); requires r > 1.
    Partition truncated() const {
        if (parts.size() < 2) throw std::invalid_argument("Partition::truncated: needs r > 1");
        return Partition(std::vector<int>(parts.begin(), parts.end() - 1));
    }

    /// Starting row of each block, plus n at the end.
    std::vector<int> offsets() const {
        std::vector<int> o{0};
        for (int v : parts) o.push_back(o.back() + v);
        return o;
    }

    /// Block index of a coordinate.
    std::vector<int> block_of() const {
        std::vector<int> b;
        for (int k = 0; k < r(); ++k)
            for (int i = 0; i < parts[static_cast<std::size_t>(k)]; ++i) b.push_back(k);
        return b;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(parts[i]);
        }
        return s;
    }

    static Partition parse(const std::string& s) {
        std::vector<int> p;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) p.push_back(std::stoi(tok));
        return Partition(p);
    }

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition&, const Partition&) = default;
};

/// All ordered partitions (compositions) of n.
inline std::vector<Partition> compositions(int n) {
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int left) {
        if (left == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int k = 1; k <= left; ++k) {
            cur.push_back(k);
            rec(left - k);
            cur.pop_back();
        }
    };
    rec(n);
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration budget

/// Cap on ambient group orders; LZT_BUDGET overrides the default of 2e5.
inline std::size_t enumeration_budget() {
    if (const char* env = std::getenv("LZT_BUDGET")) {
        try {
            return static_cast<std::size_t>(std::stoull(env));
        } catch (...) {
        }
    }
    return 200000;
}

/// |GL_n(Z/p^m)| = p^{(m-1)n^2} prod_{i<n} (p^n - p^i).
inline std::uint64_t gl_order(int n, const FiniteRing& R) {
    std::uint64_t o = 1;
    for (int i = 0; i < (R.m - 1) * n * n; ++i) o *= static_cast<std::uint64_t>(R.p);
    const auto pn = static_cast<std::uint64_t>(num::ipow(R.p, n));
    for (int i = 0; i < n; ++i) o *= pn - static_cast<std::uint64_t>(num::ipow(R.p, i));
    return o;
}

// ---------------------------------------------------------------------------
// GLGroup: the enumerated group GL_n(Z/p^m), elements sorted by canonical key.

class GLGroup {
public:
    GLGroup(int n, FiniteRing R, std::size_t budget = enumeration_budget()) : n_(n), R_(R) {
        if (n < 1 || n > 4) throw std::invalid_argument("GLGroup: n must be in 1..4");
        const std::uint64_t order = gl_order(n, R);
        if (order > budget) {
            throw BudgetExceeded("GL_" + std::to_string(n) + "(Z/" + std::to_string(R.mod) + ") has " +
                                 std::to_string(order) + " elements, budget is " + std::to_string(budget));
        }
        std::uint64_t space = 1;
        for (int i = 0; i < n * n; ++i) space *= static_cast<std::uint64_t>(R.mod);
        if (space > (1ull << 28)) throw BudgetExceeded("GLGroup: matrix space too large to scan");
        elems_.reserve(order);
        dense_ = space <= (1ull << 24);
        if (dense_) dense_index_.assign(space, -1);
        for (std::uint64_t k = 0; k < space; ++k) {
            Mat x = mat::from_key(k, n, R.mod);
            if (!R.is_unit(mat::det(x, R.mod))) continue;
            const auto idx = static_cast<std::int32_t>(elems_.size());
            elems_.push_back(x);
            if (dense_) dense_index_[k] = idx; else sparse_index_.emplace(k, idx);
        }
        if (elems_.size() != order) throw InternalFault("GLGroup: enumeration count mismatch");
        inv_.resize(elems_.size());
        for (std::size_t i = 0; i < elems_.size(); ++i) {
            auto y = mat::inverse(elems_[i], R);
            if (!y) throw InternalFault("GLGroup: unit determinant but no inverse");
            inv_[i] = index_of(*y);
        }
        identity_ = index_of(mat::identity(n));
    }

    int n() const { return n_; }
    const FiniteRing& ring() const { return R_; }
    std::size_t order() const { return elems_.size(); }
    const Mat& element(std::int32_t i) const { return elems_[static_cast<std::size_t>(i)]; }
    const std::vector<Mat>& elements() const { return elems_; }
    std::int32_t identity() const { return identity_; }
    std::int32_t inverse(std::int32_t i) const { return inv_[static_cast<std::size_t>(i)]; }

    /// Index of a matrix, or -1 if it is not invertible.
    std::int32_t index_of(const Mat& x) const {
        const std::uint64_t k = mat::key(x, R_.mod);
        if (dense_) return k < dense_index_.size() ? dense_index_[k] : -1;
        auto it = sparse_index_.find(k);
        return it == sparse_index_.end() ? -1 : it->second;
    }

    std::int32_t mul(std::int32_t i, std::int32_t j) const {
        return index_of(mat::mul(elems_[static_cast<std::size_t>(i)], elems_[static_cast<std::size_t>(j)], R_.mod));
    }

    /// g x g^{-1}
    std::int32_t conjugate(std::int32_t x, std::int32_t g) const { return mul(mul(g, x), inv_[static_cast<std::size_t>(g)]); }

    std::string name() const {
        return "GL(" + std::to_string(n_) + ",Z/" + std::to_string(R_.p) + "^" + std::to_string(R_.m) + ")";
    }

private:
    int n_;
    FiniteRing R_;
    std::vector<Mat> elems_;
    bool dense_ = true;
    std::vector<std::int32_t> dense_index_;
    std::unordered_map<std::uint64_t, std::int32_t> sparse_index_;
    std::vector<std::int32_t> inv_;
    std::int32_t identity_ = -1;
};

/// Shared enumerated GL_n(Z/p^m); built once per (n, p, m) and cached.
inline std::shared_ptr<const GLGroup> gl_group(int n, const FiniteRing& R) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, std::shared_ptr<const GLGroup>> cache;
    const auto key = std::make_tuple(n, R.p, R.m);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto g = std::make_shared<const GLGroup>(n, R);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, g).first->second;
}

/// The list of the group's elements: the "enumerate_gl" operation.
inline std::vector<Mat> enumerate_gl(int n, const FiniteRing& R) { return gl_group(n, R)->elements(); }

// ---------------------------------------------------------------------------
// Subgroup

/// Subgroup of an enumerated GL_n(Z/p^m): element list, generators and a
/// cache slot for derived data (classes, character tables).
struct SubgroupData {
    std::shared_ptr<const GLGroup> ambient;
    std::string name;
    std::vector<std::int32_t> elems;   // sorted ambient indices
    std::vector<std::int32_t> local;   // ambient index -> local index or -1
    std::vector<std::int32_t> gens;    // ambient indices

    mutable std::mutex cache_mu;
    mutable std::map<std::string, std::shared_ptr<const void>> cache;
};

class Subgroup {
public:
    Subgroup() = default;

    const GLGroup& ambient() const { return *d_->ambient; }
    const std::shared_ptr<const GLGroup>& ambient_ptr() const { return d_->ambient; }
    const std::string& name() const { return d_->name; }
    std::size_t order() const { return d_->elems.size(); }
    const std::vector<std::int32_t>& elements() const { return d_->elems; }
    const std::vector<std::int32_t>& generators() const { return d_->gens; }
    bool contains(std::int32_t ambient_index) const {
        return ambient_index >= 0 && d_->local[static_cast<std::size_t>(ambient_index)] >= 0;
    }
    bool contains(const Mat& x) const { return contains(d_->ambient->index_of(x)); }
    std::int32_t local_index(std::int32_t ambient_index) const { return d_->local[static_cast<std::size_t>(ambient_index)]; }
    const Mat& element(std::size_t local) const { return d_->ambient->element(d_->elems[local]); }
    const SubgroupData* id() const { return d_.get(); }
    bool valid() const { return static_cast<bool>(d_); }

    bool is_subgroup_of(const Subgroup& g) const {
        if (d_->ambient != g.d_->ambient) return false;
        for (auto x : d_->elems) if (!g.contains(x)) return false;
        return true;
    }

    /// Cached derived datum of type T under `key`, built once by `make`.
    template <class T, class F>
    std::shared_ptr<const T> cached(const std::string& key, F&& make) const {
        {
            std::lock_guard<std::mutex> lock(d_->cache_mu);
            if (auto it = d_->cache.find(key); it != d_->cache.end()) return std::static_pointer_cast<const T>(it->second);
        }
        std::shared_ptr<const T> v = make();
        std::lock_guard<std::mutex> lock(d_->cache_mu);
        auto [it, inserted] = d_->cache.emplace(key, v);
        return std::static_pointer_cast<const T>(it->second);
    }

    /// The whole ambient group.
    static Subgroup full(std::shared_ptr<const GLGroup> G) {
        static std::mutex mu;
        static std::map<const GLGroup*, Subgroup> cache;
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(G.get()); it != cache.end()) return it->second;
        std::vector<std::int32_t> all(G->order());
        std::iota(all.begin(), all.end(), 0);
        Subgroup s = from_verified_set(G, G->name(), std::move(all));
        cache.emplace(G.get(), s);
        return s;
    }

    /// Elements satisfying `pred`; closure under products is verified.
    static Subgroup from_predicate(std::shared_ptr<const GLGroup> G, std::string name,
                                   const std::function<bool(const Mat&)>& pred) {
        std::vector<std::int32_t> sel;
        for (std::size_t i = 0; i < G->order(); ++i) {
            if (pred(G->element(static_cast<std::int32_t>(i)))) sel.push_back(static_cast<std::int32_t>(i));
        }
        return from_verified_set(std::move(G), std::move(name), std::move(sel));
    }

    /// Subgroup generated by the given matrices.
    static Subgroup generated_by(std::shared_ptr<const GLGroup> G, std::string name, const std::vector<Mat>& gens) {
        auto d = std::make_shared<SubgroupData>();
        d->ambient = G;
        d->name = std::move(name);
        d->local.assign(G->order(), -1);
        std::vector<char> in(G->order(), 0);
        std::vector<std::int32_t> list{G->identity()};
        in[static_cast<std::size_t>(G->identity())] = 1;
        for (const auto& m : gens) {
            const auto gi = G->index_of(m);
            if (gi < 0) throw std::invalid_argument("generated_by: generator is not invertible");
            d->gens.push_back(gi);
        }
        for (std::size_t q = 0; q < list.size(); ++q) {
            for (auto g : d->gens) {
                const auto y = G->mul(list[q], g);
                if (!in[static_cast<std::size_t>(y)]) {
                    in[static_cast<std::size_t>(y)] = 1;
                    list.push_back(y);
                }
            }
        }
        std::sort(list.begin(), list.end());
        d->elems = std::move(list);
        for (std::size_t i = 0; i < d->elems.size(); ++i) d->local[static_cast<std::size_t>(d->elems[i])] = static_cast<std::int32_t>(i);
        Subgroup s;
        s.d_ = std::move(d);
        return s;
    }

    static Subgroup intersect(const Subgroup& a, const Subgroup& b, std::string name = {}) {
        if (a.d_->ambient != b.d_->ambient) throw std::invalid_argument("intersect: different ambient groups");
        std::vector<std::int32_t> sel;
        for (auto x : a.d_->elems) if (b.contains(x)) sel.push_back(x);
        if (name.empty()) name = "(" + a.name() + ")&(" + b.name() + ")";
        return from_verified_set(a.d_->ambient, std::move(name), std::move(sel));
    }

    /// Builds the handle from an element set, finding generators and
    /// verifying that the set is closed under multiplication.
    static Subgroup from_verified_set(std::shared_ptr<const GLGroup> G, std::string name, std::vector<std::int32_t> sel) {
        auto d = std::make_shared<SubgroupData>();
        d->ambient = G;
        d->name = std::move(name);
        std::sort(sel.begin(), sel.end());
        d->local.assign(G->order(), -1);
        for (std::size_t i = 0; i < sel.size(); ++i) d->local[static_cast<std::size_t>(sel[i])] = static_cast<std::int32_t>(i);
        if (sel.empty() || d->local[static_cast<std::size_t>(G->identity())] < 0) {
            throw std::invalid_argument("subgroup '" + d->name + "' does not contain the identity");
        }
        // Greedy generation with a fixed-seed random order of candidates.
        std::vector<std::int32_t> order = sel;
        std::mt19937 rng(0x5eed);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<char> in(G->order(), 0);
        std::vector<std::int32_t> closure{G->identity()};
        in[static_cast<std::size_t>(G->identity())] = 1;
        for (auto cand : order) {
            if (closure.size() == sel.size()) break;
            if (in[static_cast<std::size_t>(cand)]) continue;
            d->gens.push_back(cand);
            // Re-close: every element times every generator.
            for (std::size_t q = 0; q < closure.size(); ++q) {
                for (auto g : d->gens) {
                    const auto y = G->mul(closure[q], g);
                    if (in[static_cast<std::size_t>(y)]) continue;
                    if (d->local[static_cast<std::size_t>(y)] < 0) {
                        throw std::invalid_argument("subgroup '" + d->name + "' is not closed under multiplication: " +
                                                    mat::to_string(G->element(closure[q])) + " * " +
                                                    mat::to_string(G->element(g)) + " leaves the set");
                    }
                    in[static_cast<std::size_t>(y)] = 1;
                    closure.push_back(y);
                }
            }
        }
        d->elems = std::move(sel);
        Subgroup s;
        s.d_ = std::move(d);
        return s;
    }

private:
    std::shared_ptr<SubgroupData> d_;
};

// ---------------------------------------------------------------------------
// Named subgroups

/// Constructor tags for the named subgroups.
enum class SubgroupKind {
    Parabolic,          // P_I(level): preimage of block upper triangular mod p^level
    ParabolicOneM,      // P_I(1,m)
    KI,                 // K_I(m) = K_n(m) U_{(n-n_r, n_r)}
    Congruence,         // K_n(m)
    Unipotent,          // U_I
    LowerUnipotent,     // opposite unipotent radical
    Levi,               // M_I
    Mirabolic,          // last row (0,...,0,1)
    Borel,              // B_n(level)
};

struct SubgroupSpec {
    SubgroupKind kind = SubgroupKind::Parabolic;
    Partition I;
    int level = 1;

    std::string to_string() const {
        switch (kind) {
            case SubgroupKind::Parabolic: return "P(" + I.to_string() + ";" + std::to_string(level) + ")";
            case SubgroupKind::ParabolicOneM: return "P1m(" + I.to_string() + ";" + std::to_string(level) + ")";
            case SubgroupKind::KI: return "KI(" + I.to_string() + ";" + std::to_string(level) + ")";
            case SubgroupKind::Congruence: return "K(" + std::to_string(level) + ")";
            case SubgroupKind::Unipotent: return "U(" + I.to_string() + ")";
            case SubgroupKind::LowerUnipotent: return "Ubar(" + I.to_string() + ")";
            case SubgroupKind::Levi: return "M(" + I.to_string() + ")";
            case SubgroupKind::Mirabolic: return "Mir";
            case SubgroupKind::Borel: return "B(" + std::to_string(level) + ")";
        }
        return "?";
    }
};

namespace pred {

inline bool divisible(std::int64_t x, int p, int level, int mod) {
    if (level <= 0) return true;
    const std::int64_t pl = num::ipow(p, level);
    if (pl >= mod) return x % mod == 0;
    return x % pl == 0;
}

/// Entries below the diagonal blocks of I divisible by p^level.
inline bool block_upper_mod(const Mat& g, const Partition& I, int p, int level, int mod) {
    const auto b = I.block_of();
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (b[static_cast<std::size_t>(i)] > b[static_cast<std::size_t>(j)] && !divisible(g(i, j), p, level, mod)) return false;
    return true;
}

inline bool in_P1m(const Mat& g, const Partition& I, int p, int m, int mod) {
    const int nr = I.last();
    const int top = I.n() - nr;
    const Partition Ip = I.truncated();
    Mat A = mat::block(g, 0, 0, top);
    if (!block_upper_mod(A, Ip, p, 1, mod)) return false;
    for (int i = top; i < g.n; ++i)
        for (int j = 0; j < top; ++j)
            if (!divisible(g(i, j), p, m, mod)) return false;
    return true;
}

inline bool in_KI(const Mat& g, const Partition& I, int p, int m, int mod) {
    const int top = I.n() - I.last();
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            const bool upper_right = i < top && j >= top;
            if (upper_right) continue;
            const std::int64_t want = (i == j) ? 1 : 0;
            if (!divisible(g(i, j) - want, p, m, mod)) return false;
        }
    }
    return true;
}

}  // namespace pred

/// Constructs a named subgroup of GL_n(Z/p^M). Levels must lie in 1..M.
inline Subgroup make_subgroup(const std::shared_ptr<const GLGroup>& G, const SubgroupSpec& spec) {
    const int n = G->n();
    const int p = G->ring().p;
    const int M = G->ring().m;
    const int mod = G->ring().mod;
    const bool uses_partition = spec.kind != SubgroupKind::Congruence && spec.kind != SubgroupKind::Mirabolic &&
                                spec.kind != SubgroupKind::Borel;
    if (uses_partition && spec.I.n() != n) throw std::invalid_argument("subgroup: partition does not sum to n");
    const bool uses_level = spec.kind == SubgroupKind::Parabolic || spec.kind == SubgroupKind::ParabolicOneM ||
                            spec.kind == SubgroupKind::KI || spec.kind == SubgroupKind::Congruence ||
                            spec.kind == SubgroupKind::Borel;
    if (uses_level && (spec.level < 1 || spec.level > M)) {
        throw std::invalid_argument("subgroup: level " + std::to_string(spec.level) + " outside 1.." + std::to_string(M));
    }
    if ((spec.kind == SubgroupKind::ParabolicOneM || spec.kind == SubgroupKind::KI) && spec.I.r() < 2) {
        throw std::invalid_argument("subgroup: " + spec.to_string() + " needs at least two parts");
    }
    const Partition I = spec.I;
    const int level = spec.level;
    std::function<bool(const Mat&)> f;
    switch (spec.kind) {
        case SubgroupKind::Parabolic:
            f = [=](const Mat& g) { return pred::block_upper_mod(g, I, p, level, mod); };
            break;
        case SubgroupKind::Borel: {
            const Partition ones(std::vector<int>(static_cast<std::size_t>(n), 1));
            f = [=](const Mat& g) { return pred::block_upper_mod(g, ones, p, level, mod); };
            break;
        }
        case SubgroupKind::ParabolicOneM:
            f = [=](const Mat& g) { return pred::in_P1m(g, I, p, level, mod); };
            break;
        case SubgroupKind::KI:
            f = [=](const Mat& g) { return pred::in_KI(g, I, p, level, mod); };
            break;
        case SubgroupKind::Congruence:
            f = [=](const Mat& g) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (!pred::divisible(g(i, j) - (i == j ? 1 : 0), p, level, mod)) return false;
                return true;
            };
            break;
        case SubgroupKind::Unipotent:
        case SubgroupKind::LowerUnipotent: {
            const auto b = I.block_of();
            const bool upper = spec.kind == SubgroupKind::Unipotent;
            f = [=](const Mat& g) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const int bi = b[static_cast<std::size_t>(i)], bj = b[static_cast<std::size_t>(j)];
                        if (bi == bj && g(i, j) != (i == j ? 1 : 0)) return false;
                        if ((upper ? bi > bj : bi < bj) && g(i, j) != 0) return false;
                    }
                return true;
            };
            break;
        }
        case SubgroupKind::Levi: {
            const auto b = I.block_of();
            f = [=](const Mat& g) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (b[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(j)] && g(i, j) != 0) return false;
                return true;
            };
            break;
        }
        case SubgroupKind::Mirabolic:
            f = [=](const Mat& g) {
                for (int j = 0; j + 1 < n; ++j) if (g(n - 1, j) != 0) return false;
                return g(n - 1, n - 1) == 1;
            };
            break;
    }
    return Subgroup::from_predicate(G, spec.to_string(), f);
}

/// Cached named subgroup (same spec, same ambient => same handle).
inline Subgroup subgroup(const std::shared_ptr<const GLGroup>& G, const SubgroupSpec& spec) {
    auto full = Subgroup::full(G);
    auto holder = full.cached<Subgroup>("subgroup:" + spec.to_string(),
                                        [&] { return std::make_shared<const Subgroup>(make_subgroup(G, spec)); });
    return *holder;
}

// ---------------------------------------------------------------------------
// Iwahori factorization

struct IwahoriFactors {
    Mat lower;   // in H ∩ Ubar_I
    Mat levi;    // in H ∩ M_I
    Mat upper;   // in H ∩ U_I
};

/// g = lower * levi * upper by block elimination. Throws if g is not in H or
/// if a factor leaves H (H has no Iwahori decomposition; g is the witness).
inline IwahoriFactors iwahori_factorize(const Mat& g, const Partition& I, const Subgroup& H) {
    const auto& G = H.ambient();
    const auto& R = G.ring();
    if (!H.contains(g)) throw std::invalid_argument("iwahori_factorize: element " + mat::to_string(g) + " not in " + H.name());
    const int n = g.n;
    const auto off = I.offsets();
    Mat work = g;
    Mat L = mat::identity(n);
    for (int k = 0; k < I.r(); ++k) {
        const int r0 = off[static_cast<std::size_t>(k)], sz = I.parts[static_cast<std::size_t>(k)];
        auto pinv = mat::inverse(mat::block(work, r0, r0, sz), R);
        if (!pinv) {
            throw std::invalid_argument("iwahori_factorize: " + H.name() + " lacks an Iwahori decomposition (witness " +
                                        mat::to_string(g) + ")");
        }
        for (int bi = k + 1; bi < I.r(); ++bi) {
            const int i0 = off[static_cast<std::size_t>(bi)], isz = I.parts[static_cast<std::size_t>(bi)];
            // Lik = work[i-block, k-block] * pinv
            for (int a = 0; a < isz; ++a) {
                std::array<std::int64_t, 4> lrow{};
                for (int c = 0; c < sz; ++c) {
                    std::int64_t s = 0;
                    for (int t = 0; t < sz; ++t) s += static_cast<std::int64_t>(work(i0 + a, r0 + t)) * (*pinv)(t, c);
                    lrow[static_cast<std::size_t>(c)] = s % R.mod;
                }
                for (int c = 0; c < sz; ++c) L(i0 + a, r0 + c) = static_cast<std::int32_t>(lrow[static_cast<std::size_t>(c)]);
                for (int j = 0; j < n; ++j) {
                    std::int64_t s = work(i0 + a, j);
                    for (int c = 0; c < sz; ++c) s -= lrow[static_cast<std::size_t>(c)] * work(r0 + c, j);
                    work(i0 + a, j) = R.norm(s);
                }
            }
        }
    }
    // work is block upper triangular: work = D * U
    Mat D = mat::zero(n);
    Mat U = mat::identity(n);
    for (int k = 0; k < I.r(); ++k) {
        const int r0 = off[static_cast<std::size_t>(k)], sz = I.parts[static_cast<std::size_t>(k)];
        Mat blk = mat::block(work, r0, r0, sz);
        Mat binv = *mat::inverse(blk, R);
        for (int a = 0; a < sz; ++a)
            for (int b = 0; b < sz; ++b) D(r0 + a, r0 + b) = blk(a, b);
        for (int a = 0; a < sz; ++a) {
            for (int j = off[static_cast<std::size_t>(k + 1)]; j < n; ++j) {
                std::int64_t s = 0;
                for (int t = 0; t < sz; ++t) s += static_cast<std::int64_t>(binv(a, t)) * work(r0 + t, j);
                U(r0 + a, j) = R.norm(s);
            }
        }
    }
    if (!(mat::mul(mat::mul(L, D, R.mod), U, R.mod) == g)) throw InternalFault("iwahori_factorize: product mismatch");
    for (const Mat* f : {&L, &D, &U}) {
        if (!H.contains(*f)) {
            throw std::invalid_argument("iwahori_factorize: " + H.name() + " lacks an Iwahori decomposition (witness " +
                                        mat::to_string(g) + ")");
        }
    }
    return {L, D, U};
}

// ---------------------------------------------------------------------------
// Lattice chain stabilizers

/// Exponent vectors of the lattices L_k, 2 <= k <= r: blocks before k are
/// unscaled, blocks k..r-1 scaled by p, block r scaled by p^m.
inline std::vector<std::vector<int>> lattice_chain(const Partition& I, int m) {
    std::vector<std::vector<int>> out;
    const auto b = I.block_of();
    const int r = I.r();
    for (int k = 2; k <= r; ++k) {
        std::vector<int> a;
        for (int blk : b) {
            const int one_based = blk + 1;
            if (one_based == r) a.push_back(m);
            else if (one_based < k) a.push_back(0);
            else a.push_back(1);
        }
        out.push_back(a);
    }
    return out;
}

/// True when g maps every lattice of the chain into itself.
inline bool stabilizes_lattices(const Mat& g, const std::vector<std::vector<int>>& chain, const FiniteRing& R) {
    for (const auto& a : chain) {
        for (int j = 0; j < g.n; ++j) {
            for (int i = 0; i < g.n; ++i) {
                const std::int64_t image = static_cast<std::int64_t>(g(i, j)) * num::ipow(R.p, std::min(a[static_cast<std::size_t>(j)], R.m)) % R.mod;
                if (!pred::divisible(image, R.p, a[static_cast<std::size_t>(i)], R.mod)) return false;
            }
        }
    }
    return true;
}

/// Compares the enumerated stabilizer of the lattice chain with P_I(1,m).
inline bool lattice_stabilizer_check(const Partition& I, int m, int M, int p) {
    if (I.r() < 2) throw std::invalid_argument("lattice_stabilizer_check: needs r >= 2");
    if (m < 1 || m > M) throw std::invalid_argument("lattice_stabilizer_check: need 1 <= m <= M");
    auto G = gl_group(I.n(), make_ring(p, M));
    const auto chain = lattice_chain(I, m);
    const auto& R = G->ring();
    for (const auto& g : G->elements()) {
        if (stabilizes_lattices(g, chain, R) != pred::in_P1m(g, I, p, m, R.mod)) return false;
    }
    return true;
}

}  // namespace lzt
