// Conjugacy classes, irreducible character tables and class-function algebra
// for the enumerated subgroups of ringmat.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lzt/cyclotomic.hpp"
#include "lzt/modp.hpp"
#include "lzt/numeric.hpp"
#include "lzt/ringmat.hpp"

namespace lzt {

// ---------------------------------------------------------------------------
// Conjugacy classes

struct ConjugacyClasses {
    std::vector<std::int32_t> reps;                 // ambient indices
    std::vector<std::int64_t> sizes;
    std::vector<std::int32_t> class_of;             // local index -> class
    std::vector<std::vector<std::int32_t>> members; // ambient indices, sorted
    std::vector<int> orders;                        // element order per class
    std::vector<int> inverse;                       // class of g^{-1}
    std::vector<std::vector<int>> powers;           // powers[c][l]: class of rep^l
    int exponent = 1;

    std::size_t count() const { return reps.size(); }
};

/// Classes ordered with the identity first, then by (size, key of the
/// smallest member). Cached on the subgroup.
inline std::shared_ptr<const ConjugacyClasses> conjugacy_classes(const Subgroup& H) {
    return H.cached<ConjugacyClasses>("classes", [&] {
        const auto& G = H.ambient();
        auto cc = std::make_shared<ConjugacyClasses>();
        const std::size_t N = H.order();
        std::vector<std::int32_t> cls(N, -1);
        std::vector<std::vector<std::int32_t>> orbits;
        const auto& gens = H.generators();
        for (std::size_t i = 0; i < N; ++i) {
            if (cls[i] >= 0) continue;
            const auto c = static_cast<std::int32_t>(orbits.size());
            std::vector<std::int32_t> orbit{H.elements()[i]};
            cls[i] = c;
            for (std::size_t q = 0; q < orbit.size(); ++q) {
                for (auto g : gens) {
                    const auto y = G.conjugate(orbit[q], g);
                    const auto ly = static_cast<std::size_t>(H.local_index(y));
                    if (cls[ly] < 0) {
                        cls[ly] = c;
                        orbit.push_back(y);
                    }
                }
            }
            std::sort(orbit.begin(), orbit.end());
            orbits.push_back(std::move(orbit));
        }
        const std::int32_t id = G.identity();
        std::vector<std::size_t> perm(orbits.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
            const bool ia = orbits[a].front() == id, ib = orbits[b].front() == id;
            if (ia != ib) return ia;
            if (orbits[a].size() != orbits[b].size()) return orbits[a].size() < orbits[b].size();
            return orbits[a].front() < orbits[b].front();
        });
        std::vector<std::int32_t> newpos(orbits.size());
        for (std::size_t k = 0; k < perm.size(); ++k) newpos[perm[k]] = static_cast<std::int32_t>(k);
        cc->class_of.resize(N);
        for (std::size_t i = 0; i < N; ++i) cc->class_of[i] = newpos[static_cast<std::size_t>(cls[i])];
        for (auto k : perm) {
            cc->reps.push_back(orbits[k].front());
            cc->sizes.push_back(static_cast<std::int64_t>(orbits[k].size()));
            cc->members.push_back(std::move(orbits[k]));
        }
        const std::size_t K = cc->reps.size();
        cc->orders.resize(K);
        cc->inverse.resize(K);
        cc->powers.resize(K);
        auto class_of_amb = [&](std::int32_t a) { return cc->class_of[static_cast<std::size_t>(H.local_index(a))]; };
        std::int64_t e = 1;
        for (std::size_t c = 0; c < K; ++c) {
            const auto r = cc->reps[c];
            std::vector<int> pw{class_of_amb(id)};
            std::int32_t x = r;
            while (x != id) {
                pw.push_back(class_of_amb(x));
                x = G.mul(x, r);
            }
            cc->orders[c] = static_cast<int>(pw.size());
            cc->powers[c] = std::move(pw);
            cc->inverse[c] = class_of_amb(G.inverse(r));
            e = num::lcm64(e, cc->orders[c]);
        }
        cc->exponent = static_cast<int>(e);
        return std::shared_ptr<const ConjugacyClasses>(cc);
    });
}

// ---------------------------------------------------------------------------
// ClassFunction

struct ClassFunction {
    Subgroup group;
    std::vector<Cyclotomic> values;  // one per class, in class order

    std::size_t size() const { return values.size(); }

    /// Value at the identity as an integer; throws if not integral.
    std::int64_t degree() const {
        const auto& v = values.at(0);
        if (!v.is_integer()) throw std::domain_error("class function has non-integral degree " + v.to_string());
        return v.to_rational().numerator();
    }

    bool is_zero() const {
        return std::all_of(values.begin(), values.end(), [](const Cyclotomic& c) { return c.is_zero(); });
    }

    /// Value at an ambient element of the group.
    const Cyclotomic& at(std::int32_t ambient_index) const {
        const auto cc = conjugacy_classes(group);
        return values[static_cast<std::size_t>(cc->class_of[static_cast<std::size_t>(group.local_index(ambient_index))])];
    }
};

namespace detail {

inline void same_group(const ClassFunction& a, const ClassFunction& b, const char* what) {
    if (a.group.id() != b.group.id()) {
        throw std::invalid_argument(std::string(what) + ": class functions live on different groups (" + a.group.name() +
                                    " vs " + b.group.name() + ")");
    }
}

}  // namespace detail

inline ClassFunction operator+(const ClassFunction& a, const ClassFunction& b) {
    detail::same_group(a, b, "add");
    ClassFunction r{a.group, a.values};
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
    return r;
}

inline ClassFunction operator-(const ClassFunction& a, const ClassFunction& b) {
    detail::same_group(a, b, "subtract");
    ClassFunction r{a.group, a.values};
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= b.values[i];
    return r;
}

inline ClassFunction operator*(std::int64_t s, const ClassFunction& a) {
    ClassFunction r{a.group, a.values};
    for (auto& v : r.values) v = s * v;
    return r;
}

inline bool operator==(const ClassFunction& a, const ClassFunction& b) {
    return a.group.id() == b.group.id() && a.values == b.values;
}

/// Pointwise product.
inline ClassFunction tensor(const ClassFunction& a, const ClassFunction& b) {
    detail::same_group(a, b, "tensor");
    ClassFunction r{a.group, a.values};
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = a.values[i] * b.values[i];
    return r;
}

/// Complex conjugate (the dual character).
inline ClassFunction dual(const ClassFunction& a) {
    ClassFunction r{a.group, a.values};
    for (auto& v : r.values) v = v.conj();
    return r;
}

inline ClassFunction zero_function(const Subgroup& H) {
    return {H, std::vector<Cyclotomic>(conjugacy_classes(H)->count(), Cyclotomic::integer(0))};
}

inline ClassFunction trivial_character(const Subgroup& H) {
    return {H, std::vector<Cyclotomic>(conjugacy_classes(H)->count(), Cyclotomic::integer(1))};
}

inline ClassFunction regular_character(const Subgroup& H) {
    auto r = zero_function(H);
    r.values[0] = Cyclotomic::integer(static_cast<std::int64_t>(H.order()));
    return r;
}

/// Class function from a function on matrices, evaluated at class representatives.
inline ClassFunction from_function(const Subgroup& H, const std::function<Cyclotomic(const Mat&)>& f) {
    const auto cc = conjugacy_classes(H);
    ClassFunction r{H, {}};
    r.values.reserve(cc->count());
    for (auto rep : cc->reps) r.values.push_back(f(H.ambient().element(rep)));
    return r;
}

// ---------------------------------------------------------------------------
// Exact weighted sums of products

namespace detail {

/// sum_c w[c] * a[c] * (conj_b ? conj(b[c]) : b[c]), exactly.
inline Cyclotomic weighted_dot(const std::vector<Cyclotomic>& a, const std::vector<Cyclotomic>& b,
                               const std::vector<std::int64_t>& w, bool conj_b) {
    int e = 1;
    bool integral = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e = static_cast<int>(num::lcm64(e, num::lcm64(a[i].order(), b[i].order())));
        integral = integral && a[i].denominator() == 1 && b[i].denominator() == 1;
    }
    if (!integral) {
        Cyclotomic s = Cyclotomic::zero(1);
        for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * (a[i] * (conj_b ? b[i].conj() : b[i]));
        return s;
    }
    const auto& F = cyclo_field(e);
    const auto phi = static_cast<std::size_t>(F.phi);
    std::vector<__int128> acc(2 * phi, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (w[i] == 0 || a[i].is_zero() || b[i].is_zero()) continue;
        const Cyclotomic al = a[i].lift(e);
        const Cyclotomic bl = conj_b ? b[i].conj().lift(e) : b[i].lift(e);
        const auto& ac = al.coefficients();
        const auto& bc = bl.coefficients();
        for (std::size_t x = 0; x < phi; ++x) {
            if (ac[x] == 0) continue;
            const __int128 wx = static_cast<__int128>(w[i]) * ac[x];
            for (std::size_t y = 0; y < phi; ++y) acc[x + y] += wx * bc[y];
        }
    }
    std::vector<__int128> red(phi, 0);
    for (std::size_t t = 0; t < acc.size(); ++t) {
        if (acc[t] == 0) continue;
        if (t < phi) {
            red[t] += acc[t];
            continue;
        }
        const auto& pw = F.powers[t % static_cast<std::size_t>(e)];
        for (std::size_t j = 0; j < phi; ++j) red[j] += acc[t] * pw[j];
    }
    std::vector<std::int64_t> out(phi);
    for (std::size_t j = 0; j < phi; ++j) {
        if (red[j] > INT64_MAX || red[j] < INT64_MIN) throw std::overflow_error("weighted_dot: coefficient overflow");
        out[j] = static_cast<std::int64_t>(red[j]);
    }
    return Cyclotomic::from_coefficients(e, std::move(out));
}

}  // namespace detail

/// <a, b> = (1/|H|) sum_g a(g) conj(b(g)); exact.
inline Cyclotomic inner_product_value(const ClassFunction& a, const ClassFunction& b) {
    detail::same_group(a, b, "inner_product");
    const auto cc = conjugacy_classes(a.group);
    return detail::weighted_dot(a.values, b.values, cc->sizes, true).divided_by(static_cast<std::int64_t>(a.group.order()));
}

/// Rational inner product; throws if the value is not rational.
inline Rational inner_product(const ClassFunction& a, const ClassFunction& b) {
    const Cyclotomic v = inner_product_value(a, b);
    if (!v.is_rational()) throw std::domain_error("inner_product: value " + v.to_string() + " is not rational");
    return v.to_rational();
}

// ---------------------------------------------------------------------------
// Restriction, induction, inflation

inline ClassFunction restrict_to(const ClassFunction& chi, const Subgroup& H) {
    if (!H.is_subgroup_of(chi.group)) throw std::invalid_argument("restrict: " + H.name() + " is not inside " + chi.group.name());
    return from_function(H, [&](const Mat& x) { return chi.at(chi.group.ambient().index_of(x)); });
}

/// ind_H^G chi via class fusion:
/// ind(c) = |G| / (|c| |H|) * sum over H-classes d inside c of |d| chi(d).
inline ClassFunction induce(const Subgroup& H, const ClassFunction& chi, const Subgroup& G) {
    if (chi.group.id() != H.id()) throw std::invalid_argument("induce: character is not on " + H.name());
    if (H.id() == G.id()) return chi;
    if (!H.is_subgroup_of(G)) throw std::invalid_argument("induce: " + H.name() + " is not inside " + G.name());
    const auto ch = conjugacy_classes(H);
    const auto cg = conjugacy_classes(G);
    std::vector<Cyclotomic> acc(cg->count(), Cyclotomic::integer(0));
    for (std::size_t d = 0; d < ch->count(); ++d) {
        if (chi.values[d].is_zero()) continue;
        const auto c = static_cast<std::size_t>(cg->class_of[static_cast<std::size_t>(G.local_index(ch->reps[d]))]);
        acc[c] += ch->sizes[d] * chi.values[d];
    }
    ClassFunction r{G, {}};
    r.values.reserve(cg->count());
    const auto NG = static_cast<std::int64_t>(G.order());
    const auto NH = static_cast<std::int64_t>(H.order());
    for (std::size_t c = 0; c < cg->count(); ++c) {
        if (acc[c].is_zero()) {
            r.values.push_back(Cyclotomic::integer(0));
            continue;
        }
        // |G| / (|c| |H|) may be fractional; divide last to stay exact.
        const std::int64_t g1 = std::gcd(NG, cg->sizes[c] * NH);
        r.values.push_back(((NG / g1) * acc[c]).divided_by(cg->sizes[c] * NH / g1));
    }
    return r;
}

/// A group homomorphism H -> Q given on matrices, with a stable name.
struct QuotientMap {
    std::string name;
    std::function<Mat(const Mat&)> apply;
};

/// Reduction GL_n(Z/p^M) -> GL_n(Z/p^k).
inline QuotientMap reduction_map(int p, int k) {
    const int mod = static_cast<int>(num::ipow(p, k));
    return {"reduce:" + std::to_string(mod), [mod](const Mat& x) { return mat::reduce(x, mod); }};
}

/// Diagonal block `idx` of the partition, reduced modulo p^k.
inline QuotientMap block_map(const Partition& I, int idx, int p, int k) {
    const int mod = static_cast<int>(num::ipow(p, k));
    const int off = I.offsets()[static_cast<std::size_t>(idx)];
    const int sz = I.parts[static_cast<std::size_t>(idx)];
    return {"block:" + I.to_string() + ":" + std::to_string(idx) + ":" + std::to_string(mod),
            [=](const Mat& x) { return mat::reduce(mat::block(x, off, off, sz), mod); }};
}

/// Checks that phi maps H into Q multiplicatively; `onto` also demands
/// surjectivity. Results are cached per (H, Q, map name).
inline void verify_homomorphism(const Subgroup& H, const Subgroup& Q, const QuotientMap& phi, bool onto) {
    const std::string key = "hom:" + phi.name + "->" + Q.name() + "@" +
                            std::to_string(reinterpret_cast<std::uintptr_t>(Q.id())) + (onto ? ":onto" : "");
    H.cached<bool>(key, [&] {
        const auto& GH = H.ambient();
        const auto& GQ = Q.ambient();
        const int modQ = GQ.ring().mod;
        std::vector<std::int32_t> img(H.order());
        std::vector<char> hit(Q.order(), 0);
        for (std::size_t i = 0; i < H.order(); ++i) {
            const Mat y = phi.apply(H.element(i));
            const auto qi = GQ.index_of(y);
            if (y.n != GQ.n() || !Q.contains(qi)) {
                throw std::invalid_argument("quotient map " + phi.name + " sends " + mat::to_string(H.element(i)) +
                                            " outside " + Q.name());
            }
            img[i] = qi;
            hit[static_cast<std::size_t>(Q.local_index(qi))] = 1;
        }
        for (auto g : H.generators()) {
            const auto gi = img[static_cast<std::size_t>(H.local_index(g))];
            const Mat& gq = GQ.element(gi);
            for (std::size_t i = 0; i < H.order(); ++i) {
                const auto prod = H.local_index(GH.mul(H.elements()[i], g));
                const Mat lhs = GQ.element(img[static_cast<std::size_t>(prod)]);
                if (!(lhs == mat::mul(GQ.element(img[i]), gq, modQ))) {
                    throw std::invalid_argument("quotient map " + phi.name + " is not a homomorphism on " + H.name());
                }
            }
        }
        if (onto && std::find(hit.begin(), hit.end(), 0) != hit.end()) {
            throw std::invalid_argument("quotient map " + phi.name + " is not onto " + Q.name());
        }
        return std::make_shared<const bool>(true);
    });
}

/// Inflation of chi (on Q) to H along phi: H -> Q.
inline ClassFunction inflate(const ClassFunction& chi, const Subgroup& H, const QuotientMap& phi) {
    verify_homomorphism(H, chi.group, phi, true);
    const auto& GQ = chi.group.ambient();
    return from_function(H, [&](const Mat& x) { return chi.at(GQ.index_of(phi.apply(x))); });
}

/// Outer tensor product over the diagonal blocks of I, each factor inflated
/// along its block map (modulo p^k). Every factor must be on a full GL group.
inline ClassFunction inflate_blocks(const Subgroup& H, const Partition& I, const std::vector<ClassFunction>& factors, int k) {
    if (static_cast<int>(factors.size()) != I.r()) throw std::invalid_argument("inflate_blocks: one factor per block required");
    const int p = H.ambient().ring().p;
    ClassFunction r = trivial_character(H);
    for (int i = 0; i < I.r(); ++i) {
        r = tensor(r, inflate(factors[static_cast<std::size_t>(i)], H, block_map(I, i, p, k)));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Character tables

struct CharacterTable {
    Subgroup group;
    std::shared_ptr<const ConjugacyClasses> classes;
    std::vector<ClassFunction> irr;  // trivial first, then by (degree, values)
    std::uint64_t prime = 0;         // working prime of the construction

    std::size_t size() const { return irr.size(); }
    const ClassFunction& operator[](std::size_t i) const { return irr.at(i); }
};

namespace detail {

inline modp::Matrix class_matrix(const Subgroup& H, const ConjugacyClasses& cc, std::size_t j) {
    const auto& G = H.ambient();
    const std::size_t K = cc.count();
    modp::Matrix M(K, modp::Vec(K, 0));
    for (std::size_t k = 0; k < K; ++k) {
        const auto gk = cc.reps[k];
        for (auto x : cc.members[j]) {
            const auto y = G.mul(G.inverse(x), gk);
            const auto l = static_cast<std::size_t>(cc.class_of[static_cast<std::size_t>(H.local_index(y))]);
            ++M[l][k];
        }
    }
    return M;
}

inline bool values_less(const ClassFunction& a, const ClassFunction& b) {
    const auto da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const auto& x = a.values[i];
        const auto& y = b.values[i];
        if (x == y) continue;
        if (x.denominator() != y.denominator()) return x.denominator() < y.denominator();
        return x.coefficients() < y.coefficients();
    }
    return false;
}

inline CharacterTable dixon_schneider(const Subgroup& H) {
    const auto cc = conjugacy_classes(H);
    const std::size_t K = cc->count();
    const auto N = static_cast<std::uint64_t>(H.order());
    const auto e = static_cast<std::uint64_t>(cc->exponent);
    const std::uint64_t P = num::prime_one_mod(e, 2 * N + 1);
    if (P >= (1ull << 31)) throw BudgetExceeded("character_table: working prime too large");
    const modp::Field F{P};

    // Simultaneous eigenspaces of the class matrices, as rref row bases.
    std::vector<std::vector<modp::Vec>> spaces;
    {
        std::vector<modp::Vec> id(K, modp::Vec(K, 0));
        for (std::size_t i = 0; i < K; ++i) id[i][i] = 1;
        spaces.push_back(std::move(id));
    }
    for (std::size_t j = 1; j < K; ++j) {
        if (std::all_of(spaces.begin(), spaces.end(), [](const auto& s) { return s.size() == 1; })) break;
        const modp::Matrix M = class_matrix(H, *cc, j);
        std::vector<std::vector<modp::Vec>> next;
        for (auto& B : spaces) {
            if (B.size() == 1) {
                next.push_back(std::move(B));
                continue;
            }
            auto pc = modp::rref(B, F);
            const std::size_t d = B.size();
            modp::Matrix R(d, modp::Vec(d, 0));
            for (std::size_t i = 0; i < d; ++i) {
                modp::Vec w(K, 0);
                for (std::size_t l = 0; l < K; ++l) {
                    std::uint64_t s = 0;
                    for (std::size_t k = 0; k < K; ++k) {
                        if (M[l][k] && B[i][k]) s = (s + M[l][k] % P * B[i][k]) % P;
                    }
                    w[l] = s;
                }
                for (std::size_t t = 0; t < d; ++t) R[t][i] = w[pc[t]];
            }
            const auto roots = modp::distinct_roots(modp::charpoly(R, F), F);
            if (roots.size() <= 1) {
                next.push_back(std::move(B));
                continue;
            }
            std::size_t total = 0;
            for (auto lam : roots) {
                modp::Matrix S = R;
                for (std::size_t t = 0; t < d; ++t) S[t][t] = F.sub(S[t][t], lam);
                auto ker = modp::kernel(S, F);
                std::vector<modp::Vec> sub;
                for (const auto& c : ker) {
                    modp::Vec v(K, 0);
                    for (std::size_t i = 0; i < d; ++i) {
                        if (c[i] == 0) continue;
                        for (std::size_t k = 0; k < K; ++k) v[k] = F.add(v[k], F.mul(c[i], B[i][k]));
                    }
                    sub.push_back(std::move(v));
                }
                total += sub.size();
                modp::rref(sub, F);
                next.push_back(std::move(sub));
            }
            if (total != d) throw InternalFault("character_table: class matrix not diagonalizable");
        }
        spaces = std::move(next);
    }
    if (spaces.size() != K) throw InternalFault("character_table: eigenspaces did not split completely");

    const std::uint64_t z = num::primitive_root_of_unity(e, P);
    const std::uint64_t zinv = F.inv(z);
    CharacterTable T;
    T.group = H;
    T.classes = cc;
    T.prime = P;
    for (auto& B : spaces) {
        modp::Vec v = B[0];
        if (v[0] == 0) throw InternalFault("character_table: eigenvector vanishes at the identity");
        const std::uint64_t s0 = F.inv(v[0]);
        for (auto& x : v) x = F.mul(x, s0);
        std::uint64_t S = 0;
        for (std::size_t c = 0; c < K; ++c) {
            S = F.add(S, F.mul(F.mul(v[c], v[static_cast<std::size_t>(cc->inverse[c])]), F.inv(static_cast<std::uint64_t>(cc->sizes[c]) % P)));
        }
        const std::uint64_t d2 = F.mul(N % P, F.inv(S));
        std::int64_t deg = 0;
        for (std::int64_t d = 1; static_cast<std::uint64_t>(d * d) <= N; ++d) {
            if (static_cast<std::uint64_t>(d * d) % P == d2) { deg = d; break; }
        }
        if (deg == 0) throw InternalFault("character_table: no integral degree");
        modp::Vec chi(K);
        for (std::size_t c = 0; c < K; ++c) {
            chi[c] = F.mul(F.mul(v[c], static_cast<std::uint64_t>(deg)), F.inv(static_cast<std::uint64_t>(cc->sizes[c]) % P));
        }
        ClassFunction row{H, {}};
        row.values.reserve(K);
        for (std::size_t c = 0; c < K; ++c) {
            const auto o = static_cast<std::uint64_t>(cc->orders[c]);
            const std::uint64_t zo_inv = F.pow(zinv, e / o);
            const std::uint64_t oinv = F.inv(o % P);
            std::vector<std::int64_t> mult(e, 0);
            for (std::uint64_t j = 0; j < o; ++j) {
                std::uint64_t s = 0;
                const std::uint64_t step = F.pow(zo_inv, j);
                std::uint64_t w = 1;
                for (std::uint64_t l = 0; l < o; ++l) {
                    s = F.add(s, F.mul(chi[static_cast<std::size_t>(cc->powers[c][l])], w));
                    w = F.mul(w, step);
                }
                const std::int64_t m = num::symmetric(F.mul(s, oinv), P);
                if (m < 0 || m > deg) throw InternalFault("character_table: eigenvalue multiplicity out of range");
                mult[j * (e / o)] = m;
            }
            row.values.push_back(Cyclotomic::from_exponents(static_cast<int>(e), mult));
        }
        T.irr.push_back(std::move(row));
    }
    std::sort(T.irr.begin(), T.irr.end(), [](const ClassFunction& a, const ClassFunction& b) {
        const bool ta = std::all_of(a.values.begin(), a.values.end(), [](const Cyclotomic& c) { return c == Cyclotomic::integer(1); });
        const bool tb = std::all_of(b.values.begin(), b.values.end(), [](const Cyclotomic& c) { return c == Cyclotomic::integer(1); });
        if (ta != tb) return ta;
        return values_less(a, b);
    });
    std::int64_t sum = 0;
    for (const auto& x : T.irr) sum += x.degree() * x.degree();
    if (static_cast<std::uint64_t>(sum) != N) throw InternalFault("character_table: sum of squared degrees differs from |G|");
    return T;
}

}  // namespace detail

/// Irreducible characters of H, cached on the subgroup.
inline std::shared_ptr<const CharacterTable> character_table(const Subgroup& H) {
    return H.cached<CharacterTable>("table", [&] { return std::make_shared<const CharacterTable>(detail::dixon_schneider(H)); });
}

/// Exact first and second orthogonality relations; returns a description of
/// the first failure, or an empty string.
inline std::string orthogonality_defect(const CharacterTable& T) {
    const auto& cc = *T.classes;
    const auto N = static_cast<std::int64_t>(T.group.order());
    const std::size_t K = T.irr.size();
    if (K != cc.count()) return "number of irreducibles differs from number of classes";
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = i; j < K; ++j) {
            const Cyclotomic s = detail::weighted_dot(T.irr[i].values, T.irr[j].values, cc.sizes, true);
            if (!(s == Cyclotomic::integer(i == j ? N : 0))) {
                return "row orthogonality fails for (" + std::to_string(i) + "," + std::to_string(j) + ")";
            }
        }
    }
    for (std::size_t a = 0; a < K; ++a) {
        std::vector<Cyclotomic> ca(K), ones(K, Cyclotomic::integer(1));
        for (std::size_t i = 0; i < K; ++i) ca[i] = T.irr[i].values[a];
        for (std::size_t b = a; b < K; ++b) {
            std::vector<Cyclotomic> prod(K);
            for (std::size_t i = 0; i < K; ++i) prod[i] = T.irr[i].values[b];
            const Cyclotomic s = detail::weighted_dot(ca, prod, std::vector<std::int64_t>(K, 1), true);
            const std::int64_t want = (a == b) ? N / cc.sizes[a] : 0;
            if (!(s == Cyclotomic::integer(want))) {
                return "column orthogonality fails for (" + std::to_string(a) + "," + std::to_string(b) + ")";
            }
        }
    }
    std::int64_t sum = 0;
    for (const auto& x : T.irr) sum += x.degree() * x.degree();
    if (sum != N) return "sum of squared degrees is " + std::to_string(sum);
    return {};
}

// ---------------------------------------------------------------------------
// Decomposition

struct Decomposition {
    std::vector<Rational> mult;  // one per irreducible, in table order
    bool integral = true;        // all multiplicities are integers
    bool nonnegative = true;
    bool reconstructs = true;    // sum mult_i chi_i equals the input exactly

    bool is_character() const { return integral && nonnegative && reconstructs; }
    std::vector<std::size_t> constituents() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < mult.size(); ++i) if (mult[i].numerator() != 0) out.push_back(i);
        return out;
    }
    std::int64_t multiplicity(std::size_t i) const { return mult.at(i).numerator() / mult.at(i).denominator(); }
};

inline Decomposition decompose(const ClassFunction& chi, const CharacterTable& T) {
    detail::same_group(chi, T.irr.at(0), "decompose");
    Decomposition d;
    ClassFunction rebuilt = zero_function(chi.group);
    for (const auto& x : T.irr) {
        const Rational m = inner_product(chi, x);
        d.mult.push_back(m);
        if (m.denominator() != 1) d.integral = false;
        if (m.numerator() < 0) d.nonnegative = false;
        if (m.denominator() == 1 && m.numerator() != 0) rebuilt = rebuilt + m.numerator() * x;
    }
    d.reconstructs = d.integral && rebuilt == chi;
    return d;
}

inline Decomposition decompose(const ClassFunction& chi) { return decompose(chi, *character_table(chi.group)); }

/// Sum of mult[i] * irr[i].
inline ClassFunction combine(const CharacterTable& T, const std::vector<std::int64_t>& mult) {
    ClassFunction r = zero_function(T.group);
    for (std::size_t i = 0; i < mult.size(); ++i) if (mult[i] != 0) r = r + mult[i] * T.irr[i];
    return r;
}

// ---------------------------------------------------------------------------
// Text serialization

/// Group-independent image of a table, as stored in the text format:
///   lzt-chartab 1
///   group <name>
///   ambient <n> <p> <m>
///   order <|G|>
///   exponent <e>
///   classes <k>
///   class <i> <representative> <size>        (k lines)
///   irreducibles <k>
///   irr <label> <value_0> ... <value_{k-1}>  (k lines, values as "e:c0,c1,..[/den]")
struct TableFile {
    std::string group;
    int n = 0, p = 0, m = 0;
    std::int64_t order = 0;
    int exponent = 1;
    std::vector<Mat> reps;
    std::vector<std::int64_t> sizes;
    std::vector<std::string> labels;
    std::vector<std::vector<Cyclotomic>> values;

    friend bool operator==(const TableFile&, const TableFile&) = default;
};

inline TableFile to_table_file(const CharacterTable& T) {
    TableFile f;
    f.group = T.group.name();
    f.n = T.group.ambient().n();
    f.p = T.group.ambient().ring().p;
    f.m = T.group.ambient().ring().m;
    f.order = static_cast<std::int64_t>(T.group.order());
    f.exponent = T.classes->exponent;
    for (std::size_t c = 0; c < T.classes->count(); ++c) {
        f.reps.push_back(T.group.ambient().element(T.classes->reps[c]));
        f.sizes.push_back(T.classes->sizes[c]);
    }
    for (std::size_t i = 0; i < T.irr.size(); ++i) {
        f.labels.push_back(std::to_string(i));
        f.values.push_back(T.irr[i].values);
    }
    return f;
}

inline std::string to_text(const TableFile& f) {
    std::ostringstream os;
    os << "lzt-chartab 1\n";
    os << "group " << f.group << "\n";
    os << "ambient " << f.n << " " << f.p << " " << f.m << "\n";
    os << "order " << f.order << "\n";
    os << "exponent " << f.exponent << "\n";
    os << "classes " << f.reps.size() << "\n";
    for (std::size_t c = 0; c < f.reps.size(); ++c) os << "class " << c << " " << mat::to_string(f.reps[c]) << " " << f.sizes[c] << "\n";
    os << "irreducibles " << f.values.size() << "\n";
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        os << "irr " << f.labels[i];
        for (const auto& v : f.values[i]) os << " " << v.to_string();
        os << "\n";
    }
    return os.str();
}

inline TableFile parse_table_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    auto next = [&](const std::string& tag) {
        if (!std::getline(is, line)) throw std::invalid_argument("table text: missing '" + tag + "' line");
        std::istringstream ls(line);
        std::string t;
        ls >> t;
        if (t != tag) throw std::invalid_argument("table text: expected '" + tag + "', got '" + line + "'");
        std::string rest;
        std::getline(ls, rest);
        if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
        return rest;
    };
    TableFile f;
    if (next("lzt-chartab") != "1") throw std::invalid_argument("table text: unsupported version");
    f.group = next("group");
    {
        std::istringstream ls(next("ambient"));
        ls >> f.n >> f.p >> f.m;
    }
    f.order = std::stoll(next("order"));
    f.exponent = std::stoi(next("exponent"));
    const auto k = std::stoul(next("classes"));
    const int mod = static_cast<int>(num::ipow(f.p, f.m));
    for (std::size_t c = 0; c < k; ++c) {
        std::istringstream ls(next("class"));
        std::size_t idx;
        std::string rep;
        std::int64_t size;
        ls >> idx >> rep >> size;
        if (idx != c || ls.fail()) throw std::invalid_argument("table text: malformed class line " + std::to_string(c));
        f.reps.push_back(mat::parse(rep, mod));
        f.sizes.push_back(size);
    }
    const auto ni = std::stoul(next("irreducibles"));
    for (std::size_t i = 0; i < ni; ++i) {
        std::istringstream ls(next("irr"));
        std::string label, tok;
        ls >> label;
        std::vector<Cyclotomic> vals;
        while (ls >> tok) vals.push_back(Cyclotomic::parse(tok));
        if (vals.size() != k) throw std::invalid_argument("table text: irreducible " + label + " has wrong length");
        f.labels.push_back(label);
        f.values.push_back(std::move(vals));
    }
    return f;
}

/// Orthogonality and degree checks on a parsed table, without the group.
inline std::string table_file_defect(const TableFile& f) {
    const std::size_t K = f.reps.size();
    if (f.values.size() != K) return "number of irreducibles differs from number of classes";
    if (std::accumulate(f.sizes.begin(), f.sizes.end(), std::int64_t{0}) != f.order) return "class sizes do not sum to the order";
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = i; j < K; ++j) {
            const Cyclotomic s = detail::weighted_dot(f.values[i], f.values[j], f.sizes, true);
            if (!(s == Cyclotomic::integer(i == j ? f.order : 0))) return "row orthogonality fails";
        }
    }
    std::int64_t sum = 0;
    for (const auto& row : f.values) {
        if (!row[0].is_integer()) return "non-integral degree";
        const auto d = row[0].to_rational().numerator();
        sum += d * d;
    }
    if (sum != f.order) return "sum of squared degrees differs from the order";
    return {};
}

}  // namespace lzt
