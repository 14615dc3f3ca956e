// Level-zero inertial classes, the types (P_I(1), tau_I), the complements
// U_m(tau_I), atypicality witnesses and the two theorem verifiers.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lzt/chartheory.hpp"
#include "lzt/clifford.hpp"
#include "lzt/glnfq.hpp"
#include "lzt/ringmat.hpp"

namespace lzt {

// ---------------------------------------------------------------------------
// Inertial classes

/// Multiset of (block size, cuspidal label of GL_size(F_q)), kept sorted.
struct InertialClassLZ {
    int q = 2;
    std::vector<IrrLabel> parts;

    int n() const {
        int s = 0;
        for (const auto& c : parts) s += c.n;
        return s;
    }

    /// Sizes in stored order, the partition used for P_J.
    Partition partition() const {
        std::vector<int> sz;
        for (const auto& c : parts) sz.push_back(c.n);
        return Partition(sz);
    }

    std::string to_string() const {
        std::string s = "{";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ",";
            s += "(" + std::to_string(parts[i].n) + "," + std::to_string(parts[i].index) + ")";
        }
        return s + "}";
    }

    friend bool operator==(const InertialClassLZ&, const InertialClassLZ&) = default;
    friend auto operator<=>(const InertialClassLZ&, const InertialClassLZ&) = default;
};

inline InertialClassLZ inertial_class(std::vector<IrrLabel> labels) {
    if (labels.empty()) throw std::invalid_argument("inertial_class: empty");
    const int q = labels[0].q;
    for (const auto& l : labels) {
        if (l.q != q) throw std::invalid_argument("inertial_class: mixed residue fields");
        if (l.n < 1) throw std::invalid_argument("inertial_class: grade 0 label");
    }
    std::sort(labels.begin(), labels.end());
    return {q, std::move(labels)};
}

inline bool inertial_eq(const InertialClassLZ& a, const InertialClassLZ& b) {
    if (a.q != b.q || a.n() != b.n()) throw std::invalid_argument("inertial_eq: classes of different q or n");
    return a.parts == b.parts;
}

inline std::vector<InertialClassLZ> level_zero_classes(int n, int q) {
    std::vector<InertialClassLZ> out;
    for (const auto& s : cuspidal_multisets(n, q)) out.push_back(inertial_class(s.parts));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// tau_I and U_m(tau_I)

struct TauI {
    Partition I;
    std::vector<IrrLabel> labels;  // in the order of I
    int p = 2, M = 1;
    std::shared_ptr<const GLGroup> G;
    Subgroup P1;
    ClassFunction chi;

    InertialClassLZ inertial() const { return inertial_class(labels); }
};

inline TauI build_tau_I(const Partition& I, const std::vector<IrrLabel>& labels, int M) {
    if (M < 1) throw std::invalid_argument("build_tau_I: M must be >= 1");
    if (static_cast<int>(labels.size()) != I.r()) throw std::invalid_argument("build_tau_I: one label per block");
    const int p = labels[0].q;
    std::vector<ClassFunction> factors;
    for (int i = 0; i < I.r(); ++i) {
        const auto& l = labels[static_cast<std::size_t>(i)];
        if (l.q != p) throw std::invalid_argument("build_tau_I: mixed residue fields");
        if (l.n != I.parts[static_cast<std::size_t>(i)]) throw std::invalid_argument("build_tau_I: label size does not match block");
        if (!is_cuspidal(l)) throw std::invalid_argument("build_tau_I: label " + std::to_string(l.index) + " of GL_" + std::to_string(l.n) + " is not cuspidal");
        factors.push_back(irr_character(l));
    }
    TauI t;
    t.I = I;
    t.labels = labels;
    t.p = p;
    t.M = M;
    t.G = gl_group(I.n(), make_ring(p, M));
    t.P1 = subgroup(t.G, {SubgroupKind::Parabolic, I, 1});
    t.chi = inflate_blocks(t.P1, I, factors, 1);
    return t;
}

/// ind_{P_I(m)}^{G} tau_I, cached on the group.
inline ClassFunction induced_from_level(const TauI& t, int m) {
    if (m < 1 || m > t.M) throw std::invalid_argument("induced_from_level: need 1 <= m <= M");
    std::string key = "indtau:" + t.I.to_string() + ":";
    for (const auto& l : t.labels) key += std::to_string(l.index) + ",";
    key += ":" + std::to_string(m);
    const Subgroup full = Subgroup::full(t.G);
    return *full.cached<ClassFunction>(key, [&] {
        const Subgroup Pm = subgroup(t.G, {SubgroupKind::Parabolic, t.I, m});
        return std::make_shared<const ClassFunction>(induce(Pm, restrict_to(t.chi, Pm), full));
    });
}

/// U_m(tau_I) = ind_{P_I(m)} tau_I - ind_{P_I(1)} tau_I on GL_n(Z/p^M).
inline ClassFunction u_m_character(const TauI& t, int m) {
    if (m < 1 || m > t.M) throw std::invalid_argument("u_m_character: need 1 <= m <= M");
    if (t.I.r() == 1 || m == 1) return zero_function(Subgroup::full(t.G));
    return induced_from_level(t, m) - induced_from_level(t, 1);
}

inline bool multiplicity_one_check(const TauI& t, int m) {
    if (m < 1 || m > t.M) throw std::invalid_argument("multiplicity_one_check: need 1 <= m <= M");
    const Subgroup Pm = subgroup(t.G, {SubgroupKind::Parabolic, t.I, m});
    return inner_product(induce(Pm, restrict_to(t.chi, Pm), t.P1), t.chi) == Rational(1);
}

/// U_m(tau_I) = ind_{P_{(n-n_r,n_r)}(m)}(U_m(tau_{I'}) ⊠ tau_r) + ind_{P_I(1)}(U^0_{(1,m)}(tau_I)),
/// the second summand being ind_{P_I(1,m)} tau_I - ind_{P_I(1)} tau_I.
inline bool split_identity_check(const TauI& t, int m) {
    if (t.I.r() < 2) throw std::invalid_argument("split_identity_check: needs r >= 2");
    const int nr = t.I.last();
    const int top = t.I.n() - nr;
    const Partition two({top, nr});
    const Subgroup full = Subgroup::full(t.G);
    const std::vector<IrrLabel> head(t.labels.begin(), t.labels.end() - 1);
    const TauI tp = build_tau_I(t.I.truncated(), head, m);
    const ClassFunction Up = u_m_character(tp, m);
    const Subgroup P2 = subgroup(t.G, {SubgroupKind::Parabolic, two, m});
    const ClassFunction lam = tensor(inflate(Up, P2, block_map(two, 0, t.p, m)),
                                     inflate(irr_character(t.labels.back()), P2, block_map(two, 1, t.p, 1)));
    const Subgroup P1m = subgroup(t.G, {SubgroupKind::ParabolicOneM, t.I, m});
    const ClassFunction rhs = induce(P2, lam, full) + induce(P1m, restrict_to(t.chi, P1m), full) - induced_from_level(t, 1);
    return rhs == u_m_character(t, m);
}

// ---------------------------------------------------------------------------
// Witnesses

/// Label of GL_1(F_q) giving the central character of pi.
inline IrrLabel central_character_label(const IrrLabel& pi) {
    for (const auto& chi : irreducibles(1, pi.q)) {
        bool ok = true;
        for (int a = 1; a < pi.q && ok; ++a) ok = central_value(pi, a) == central_value(chi, a);
        if (ok) return chi;
    }
    throw InternalFault("central_character_label: no match");
}

/// Depth-m' piece of a level-zero supercuspidal restricted to GL_k(O), as a
/// character of GL_k(Z/p^{m'}): the inflated cuspidal, plus for k = 2 the
/// Casselman pieces U_i(central character), 2 <= i <= m'.
inline ClassFunction block_shadow(const IrrLabel& c, int mprime) {
    auto Gk = gl_group(c.n, make_ring(c.q, mprime));
    const Subgroup full = Subgroup::full(Gk);
    ClassFunction out = inflate(irr_character(c), full, reduction_map(c.q, 1));
    if (c.n == 2) {
        const IrrLabel w = central_character_label(c);
        for (int i = 2; i <= mprime; ++i) out = out + casselman_u_i(w, i, mprime);
    }
    return out;
}

/// Witness character for class t at depth m' on GL_n(Z/p^M):
/// ind_{P_J(m')}(⊠ block shadows).
inline ClassFunction shadow_character(const InertialClassLZ& t, int mprime, int M) {
    if (mprime < 1 || mprime > M) throw std::invalid_argument("shadow_character: need 1 <= m' <= M");
    auto G = gl_group(t.n(), make_ring(t.q, M));
    const Subgroup full = Subgroup::full(G);
    return *full.cached<ClassFunction>("shadow:" + t.to_string() + ":" + std::to_string(mprime), [&] {
        const Partition J = t.partition();
        const Subgroup P = subgroup(G, {SubgroupKind::Parabolic, J, mprime});
        std::optional<ClassFunction> lam;
        for (int i = 0; i < J.r(); ++i) {
            ClassFunction f = inflate(block_shadow(t.parts[static_cast<std::size_t>(i)], mprime), P, block_map(J, i, t.q, mprime));
            lam = lam ? tensor(*lam, f) : f;
        }
        return std::make_shared<const ClassFunction>(induce(P, *lam, full));
    });
}

struct Witness {
    InertialClassLZ t;
    int mprime = 0;
    Rational pairing{0};
};

/// First (t, m') with t != s and <Gamma, shadow(t, m')> > 0; classes sorted,
/// then m' ascending.
inline std::optional<Witness> atypicality_witness(const ClassFunction& gamma, const InertialClassLZ& s, int M) {
    for (const auto& t : level_zero_classes(s.n(), s.q)) {
        if (t == s) continue;
        for (int mp = 1; mp <= M; ++mp) {
            const Rational ip = inner_product(gamma, shadow_character(t, mp, M));
            if (ip.numerator() > 0) return Witness{t, mp, ip};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Verifiers

/// Worker count for per-constituent loops; 0 means hardware concurrency.
inline int& thread_count() {
    static int n = [] {
        const char* env = std::getenv("LZT_THREADS");
        return env ? std::max(0, std::atoi(env)) : 0;
    }();
    return n;
}

namespace detail {

/// Runs f(i) for i in [0, count) on up to thread_count() workers.
template <class F>
void parallel_for(std::size_t count, F&& f) {
    std::size_t workers = thread_count() > 0 ? static_cast<std::size_t>(thread_count())
                                             : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        f(i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(err_mu);
                        if (!err) err = std::current_exception();
                    }
                }
            });
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace detail

struct ConstituentRecord {
    int irr = 0;                           // index in the table of GL_n(Z/p^M)
    std::int64_t dimension = 0;
    std::vector<std::int64_t> multiplicities;  // per m (main: one entry; corollary: m = 1..M)
    std::optional<Witness> witness;
};

struct TypicalityReport {
    std::string kind;  // "main" or "corollary"
    int n = 0, p = 2, M = 1, m = 0;
    Partition I;
    std::vector<IrrLabel> labels;
    InertialClassLZ inertial;
    std::vector<ConstituentRecord> constituents;
    std::map<std::string, bool> checks;
    bool pass = false;
    std::string note;
};

inline TypicalityReport verify_main_theorem(const Partition& I, const std::vector<IrrLabel>& labels, int m, int M) {
    const TauI t = build_tau_I(I, labels, M);
    TypicalityReport rep;
    rep.kind = "main";
    rep.n = I.n();
    rep.p = t.p;
    rep.M = M;
    rep.m = m;
    rep.I = I;
    rep.labels = labels;
    rep.inertial = t.inertial();
    if (I.r() == 1) {
        rep.checks["vacuous"] = true;
        rep.pass = true;
        rep.note = "r = 1: U_m is zero";
        return rep;
    }
    const ClassFunction U = u_m_character(t, m);
    const auto table = character_table(Subgroup::full(t.G));
    const Decomposition d = decompose(U, *table);
    rep.checks["genuine"] = d.is_character() || U.is_zero();
    rep.checks["multiplicity_one"] = multiplicity_one_check(t, m);
    rep.checks["split_identity"] = split_identity_check(t, m);
    const auto cons = d.constituents();
    rep.constituents.resize(cons.size());
    detail::parallel_for(cons.size(), [&](std::size_t k) {
        const std::size_t i = cons[k];
        ConstituentRecord& c = rep.constituents[k];
        c.irr = static_cast<int>(i);
        c.dimension = table->irr[i].degree();
        c.multiplicities.push_back(d.mult[i].numerator());
        c.witness = atypicality_witness(table->irr[i], rep.inertial, M);
    });
    const bool witnessed = std::all_of(rep.constituents.begin(), rep.constituents.end(),
                                       [](const ConstituentRecord& c) { return c.witness.has_value(); });
    rep.checks["witnessed"] = witnessed;
    rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& kv) { return kv.second; });
    return rep;
}

inline TypicalityReport verify_corollary(const Partition& I, const std::vector<IrrLabel>& labels, int M) {
    const TauI t = build_tau_I(I, labels, M);
    TypicalityReport rep;
    rep.kind = "corollary";
    rep.n = I.n();
    rep.p = t.p;
    rep.M = M;
    rep.I = I;
    rep.labels = labels;
    rep.inertial = t.inertial();
    const auto table = character_table(Subgroup::full(t.G));
    std::vector<Decomposition> ds;
    for (int m = 1; m <= M; ++m) ds.push_back(decompose(induced_from_level(t, m), *table));
    const auto cons = ds[0].constituents();
    rep.constituents.resize(cons.size());
    detail::parallel_for(cons.size(), [&](std::size_t k) {
        const std::size_t i = cons[k];
        ConstituentRecord& c = rep.constituents[k];
        c.irr = static_cast<int>(i);
        c.dimension = table->irr[i].degree();
        for (const auto& d : ds) c.multiplicities.push_back(d.mult[i].numerator());
        c.witness = atypicality_witness(table->irr[i], rep.inertial, M);
    });
    bool constant = true, none = true;
    for (const auto& c : rep.constituents) {
        for (auto v : c.multiplicities) if (v != c.multiplicities.front()) constant = false;
        if (c.witness) none = false;
    }
    rep.checks["constant_multiplicity"] = constant;
    rep.checks["no_witness"] = none;
    rep.pass = constant && none;
    return rep;
}

/// Every ordering of the blocks of s, as (partition, labels) pairs.
inline std::vector<std::pair<Partition, std::vector<IrrLabel>>> orderings(const InertialClassLZ& s) {
    std::vector<IrrLabel> v = s.parts;
    std::sort(v.begin(), v.end());
    std::vector<std::pair<Partition, std::vector<IrrLabel>>> out;
    do {
        std::vector<int> sz;
        for (const auto& c : v) sz.push_back(c.n);
        out.emplace_back(Partition(sz), v);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

// ---------------------------------------------------------------------------
// Iwahori induction

struct IwahoriInductionResult {
    bool ok = false;
    std::string detail;
};

/// ind_{J2}^{J1} lambda agrees with the inflation of ind_{J2∩M}^{J1∩M} lambda
/// through the Iwahori factorization of J1.
inline IwahoriInductionResult iwahori_induction_check(const Subgroup& J1, const Subgroup& J2, const ClassFunction& lambda,
                                                      const Partition& I) {
    IwahoriInductionResult r;
    const auto G = J1.ambient_ptr();
    if (!J2.is_subgroup_of(J1)) {
        r.detail = "J2 is not contained in J1";
        return r;
    }
    const Subgroup U = subgroup(G, {SubgroupKind::Unipotent, I, 1});
    const Subgroup Ub = subgroup(G, {SubgroupKind::LowerUnipotent, I, 1});
    const Subgroup L = subgroup(G, {SubgroupKind::Levi, I, 1});
    for (const Subgroup* N : {&U, &Ub}) {
        const Subgroup a = Subgroup::intersect(J1, *N), b = Subgroup::intersect(J2, *N);
        if (a.elements() != b.elements()) {
            for (auto x : a.elements())
                if (!b.contains(x)) {
                    r.detail = "unipotent parts differ (witness " + mat::to_string(G->element(x)) + ")";
                    return r;
                }
        }
        const auto deg = lambda.values.at(0);
        for (auto x : b.elements())
            if (!(lambda.at(x) == deg)) {
                r.detail = "lambda is not trivial on " + N->name() + " (witness " + mat::to_string(G->element(x)) + ")";
                return r;
            }
    }
    for (const Subgroup* J : {&J1, &J2})
        for (auto x : J->elements()) {
            try {
                iwahori_factorize(G->element(x), I, *J);
            } catch (const std::invalid_argument& e) {
                r.detail = e.what();
                return r;
            }
        }
    const Subgroup L1 = Subgroup::intersect(J1, L), L2 = Subgroup::intersect(J2, L);
    const ClassFunction mu = induce(L2, restrict_to(lambda, L2), L1);
    const ClassFunction lhs = induce(J2, lambda, J1);
    const auto cc = conjugacy_classes(J1);
    for (std::size_t c = 0; c < cc->count(); ++c) {
        const auto f = iwahori_factorize(G->element(cc->reps[c]), I, J1);
        if (!(lhs.values[c] == mu.at(G->index_of(f.levi)))) {
            r.detail = "values differ at " + mat::to_string(G->element(cc->reps[c]));
            return r;
        }
    }
    r.ok = true;
    return r;
}

/// The instance used in the n_r > 1 argument: J1 = P_{(n-n_r,n_r)}(m),
/// J2 = P_I(1,m), lambda = tau_I, relative to the Levi M_{(n-n_r,n_r)}.
inline IwahoriInductionResult iwahori_induction_instance(const TauI& t, int m) {
    const int nr = t.I.last();
    const Partition two({t.I.n() - nr, nr});
    const Subgroup J1 = subgroup(t.G, {SubgroupKind::Parabolic, two, m});
    const Subgroup J2 = subgroup(t.G, {SubgroupKind::ParabolicOneM, t.I, m});
    return iwahori_induction_check(J1, J2, restrict_to(t.chi, J2), two);
}

// ---------------------------------------------------------------------------
// Twists by depth-zero characters through the determinant

/// chi(det g mod p) on H, for a label chi of GL_1(F_p).
inline ClassFunction det_character(const Subgroup& H, const IrrLabel& chi) {
    if (chi.n != 1) throw std::invalid_argument("det_character: need a character of GL_1(F_p)");
    const auto& c = irr_character(chi);
    const auto& G1 = c.group.ambient();
    const int p = chi.q;
    const int mod = H.ambient().ring().mod;
    return from_function(H, [&](const Mat& g) {
        Mat a = mat::zero(1);
        a(0, 0) = static_cast<std::int32_t>(((mat::det(g, mod) % p) + p) % p);
        return c.at(G1.index_of(a));
    });
}

inline IrrLabel twist_label(const IrrLabel& c, const IrrLabel& chi) {
    if (chi.q != c.q) throw std::invalid_argument("twist_label: different residue fields");
    const auto& pi = irr_character(c);
    const ClassFunction tw = tensor(pi, det_character(pi.group, chi));
    const auto T = gl_table(c.n, c.q);
    for (std::size_t i = 0; i < T->irr.size(); ++i)
        if (T->irr[i] == tw) return {c.q, c.n, static_cast<int>(i)};
    throw InternalFault("twist_label: twist is not irreducible");
}

inline InertialClassLZ twist_class(const InertialClassLZ& s, const IrrLabel& chi) {
    std::vector<IrrLabel> v;
    for (const auto& c : s.parts) v.push_back(twist_label(c, chi));
    return inertial_class(v);
}

inline TauI twist_class(const TauI& t, const IrrLabel& chi) {
    std::vector<IrrLabel> v;
    for (const auto& c : t.labels) v.push_back(twist_label(c, chi));
    return build_tau_I(t.I, v, t.M);
}

/// Table indices of the constituents of ind_{P_I(1)} tau_I.
inline std::vector<int> typical_constituents(const TauI& t) {
    const auto table = character_table(Subgroup::full(t.G));
    std::vector<int> out;
    for (auto i : decompose(induced_from_level(t, 1), *table).constituents()) out.push_back(static_cast<int>(i));
    return out;
}

/// Index of Gamma ⊗ (chi ∘ det) in the table of GL_n(Z/p^M).
inline int twist_irr(const CharacterTable& T, int i, const IrrLabel& chi) {
    const ClassFunction tw = tensor(T.irr[static_cast<std::size_t>(i)], det_character(T.group, chi));
    for (std::size_t j = 0; j < T.irr.size(); ++j)
        if (T.irr[j] == tw) return static_cast<int>(j);
    throw InternalFault("twist_irr: twist is not irreducible");
}

}  // namespace lzt
