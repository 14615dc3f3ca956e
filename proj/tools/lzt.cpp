// Command-line front end: character tables, decompositions, Zelevinsky ring
// expressions, lemma checks and the theorem verifiers.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 invalid configuration,
// 3 enumeration budget exceeded, 4 internal fault.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lzt/report.hpp"
#include "lzt/typicality.hpp"
#include "lzt/zexpr.hpp"

using json = nlohmann::ordered_json;
using namespace lzt;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kBudget = 3, kFault = 4 };

struct RunConfig {
    std::string command;
    std::string group = "GL";
    int n = 2, p = 2, M = 2, m = 1, q = 0;
    std::string partition;
    std::string cuspidals;
    std::string what = "U";
    std::string target;
    std::string grid = "fast";
    std::string expression;
    std::string out;
    std::string format = "json";
    int threads = 0;
    std::size_t budget = 0;

    json to_json() const {
        json j;
        j["command"] = command;
        if (command == "zelevinsky") {
            j["expression"] = expression;
            j["q"] = q;
            return j;
        }
        if (command == "sweep") {
            j["grid"] = grid;
            return j;
        }
        if (command == "chartab") {
            j["group"] = group;
            j["n"] = n;
            j["p"] = p;
            j["m"] = m;
            return j;
        }
        if (command == "verify") j["target"] = target;
        j["n"] = n;
        j["p"] = p;
        j["M"] = M;
        if (!partition.empty()) j["I"] = partition;
        if (!cuspidals.empty()) j["cuspidals"] = cuspidals;
        j["m"] = m;
        if (command == "decompose") j["what"] = what;
        return j;
    }
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError("not an integer list: '" + s + "'");
        }
    }
    return v;
}

void validate(const RunConfig& c) {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw UsageError(msg);
    };
    need(c.format == "json" || c.format == "text" || c.format == "csv", "format must be json, text or csv");
    need(c.threads >= 0, "threads must be nonnegative");
    if (c.command == "zelevinsky") {
        need(c.q >= 2 && num::is_prime(static_cast<std::uint64_t>(c.q)), "q must be prime");
        return;
    }
    if (c.command == "sweep") {
        need(c.grid == "fast" || c.grid == "stretch" || c.grid == "all", "grid must be fast, stretch or all");
        return;
    }
    need(c.n >= 1 && c.n <= 4, "n must be in 1..4");
    need(c.p >= 2 && num::is_prime(static_cast<std::uint64_t>(c.p)), "p must be prime");
    if (c.command == "chartab") {
        need(c.group == "GL", "only the group GL is supported");
        need(c.m >= 1, "m must be >= 1");
        return;
    }
    need(c.M >= 1, "M must be >= 1");
    need(c.m >= 1 && c.m <= c.M, "m must be in 1..M");
    if (!c.partition.empty()) {
        int s = 0;
        for (int x : parse_ints(c.partition)) {
            need(x >= 1, "partition parts must be positive");
            s += x;
        }
        need(s == c.n, "partition must sum to n");
    }
}

Partition partition_of(const RunConfig& c) {
    if (c.partition.empty()) return Partition(std::vector<int>(static_cast<std::size_t>(c.n), 1));
    return Partition(parse_ints(c.partition));
}

/// Labels from --cuspidals, or the first cuspidal of each block size.
std::vector<IrrLabel> labels_of(const RunConfig& c, const Partition& I) {
    std::vector<IrrLabel> out;
    if (c.cuspidals.empty()) {
        for (int sz : I.parts) out.push_back(cuspidals(sz, c.p).at(0));
        return out;
    }
    const auto idx = parse_ints(c.cuspidals);
    if (static_cast<int>(idx.size()) != I.r()) throw UsageError("one cuspidal label per block is required");
    for (int i = 0; i < I.r(); ++i) {
        const int sz = I.parts[static_cast<std::size_t>(i)];
        const int k = idx[static_cast<std::size_t>(i)];
        const auto all = irreducibles(sz, c.p);
        if (k < 0 || k >= static_cast<int>(all.size())) throw UsageError("label " + std::to_string(k) + " out of range for GL_" + std::to_string(sz));
        if (!is_cuspidal(all[static_cast<std::size_t>(k)]))
            throw UsageError("label " + std::to_string(k) + " of GL_" + std::to_string(sz) + " is not cuspidal");
        out.push_back(all[static_cast<std::size_t>(k)]);
    }
    return out;
}

void emit(const RunConfig& c, const std::string& body) {
    if (c.out.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.out);
    f << body;
}

json envelope(const RunConfig& c, const std::string& kind) {
    json j;
    j["schema"] = kReportSchema;
    j["kind"] = kind;
    j["config"] = c.to_json();
    return j;
}

std::string render(const RunConfig& c, const json& j) {
    if (c.format == "json") return j.dump(2) + "\n";
    std::ostringstream os;
    if (c.format == "csv") {
        os << "kind,verdict\n" << j.value("kind", "") << "," << j.value("verdict", "") << "\n";
        return os.str();
    }
    os << j.value("verdict", "") << " " << j.value("kind", "") << " " << c.to_json().dump() << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------

int cmd_chartab(const RunConfig& c) {
    const auto T = character_table(Subgroup::full(gl_group(c.n, make_ring(c.p, c.m))));
    const TableFile f = to_table_file(*T);
    const std::string text = to_text(f);
    const TableFile back = parse_table_text(text);
    const std::string defect = table_file_defect(back);
    const bool ok = defect.empty() && to_text(back) == text && orthogonality_defect(*T).empty();
    if (c.format == "json") {
        json j = envelope(c, "chartab");
        j["order"] = T->group.order();
        j["classes"] = T->size();
        j["degrees"] = json::array();
        for (const auto& x : T->irr) j["degrees"].push_back(x.degree());
        j["table"] = text;
        j["verdict"] = ok ? "PASS" : "FAIL";
        if (!defect.empty()) j["defect"] = defect;
        emit(c, j.dump(2) + "\n");
    } else {
        emit(c, text);
    }
    if (!ok) std::cerr << "table check failed: " << defect << "\n";
    return ok ? kPass : kFail;
}

int cmd_decompose(const RunConfig& c) {
    const Partition I = partition_of(c);
    const TauI t = build_tau_I(I, labels_of(c, I), c.M);
    ClassFunction chi = c.what == "U" ? u_m_character(t, c.m) : induced_from_level(t, c.m);
    const auto T = character_table(Subgroup::full(t.G));
    const Decomposition d = decompose(chi, *T);
    if (c.format == "csv") {
        std::ostringstream os;
        os << "irr,dimension,multiplicity\n";
        for (auto i : d.constituents()) os << i << "," << T->irr[i].degree() << "," << d.mult[i].numerator() << "\n";
        emit(c, os.str());
    } else {
        json j = envelope(c, "decompose");
        j["dimension"] = chi.degree();
        json cons = json::array();
        for (auto i : d.constituents())
            cons.push_back({{"irr", i}, {"dimension", T->irr[i].degree()}, {"multiplicity", d.mult[i].numerator()}});
        j["constituents"] = cons;
        j["verdict"] = d.is_character() ? "PASS" : "FAIL";
        emit(c, render(c, j));
    }
    return d.is_character() ? kPass : kFail;
}

int cmd_zelevinsky(const RunConfig& c) {
    ZElem x(c.q);
    try {
        x = eval_zexpr(c.expression, c.q);
    } catch (const ZExprError& e) {
        throw UsageError(e.what());
    }
    if (c.format == "json") {
        json j = envelope(c, "zelevinsky");
        j["value"] = x.to_string();
        j["dimension"] = x.dimension();
        j["verdict"] = "PASS";
        emit(c, j.dump(2) + "\n");
    } else {
        emit(c, x.to_string() + "\n");
    }
    return kPass;
}

json lemma_result(const RunConfig& c, const std::string& kind, bool ok, json detail = json::object()) {
    json j = envelope(c, kind);
    j["details"] = std::move(detail);
    j["verdict"] = ok ? "PASS" : "FAIL";
    return j;
}

json verify_json(const RunConfig& c) {
    const Partition I = partition_of(c);
    const std::string& w = c.target;
    if (w == "main" || w == "corollary") {
        const auto labels = labels_of(c, I);
        const TypicalityReport r = w == "main" ? verify_main_theorem(I, labels, c.m, c.M) : verify_corollary(I, labels, c.M);
        json j = to_json(r);
        j["config"] = c.to_json();
        return j;
    }
    if (w == "multiplicity" || w == "split" || w == "iwahori") {
        const TauI t = build_tau_I(I, labels_of(c, I), c.M);
        if (w == "multiplicity") return lemma_result(c, w, multiplicity_one_check(t, c.m));
        if (I.r() < 2) throw UsageError(w + " needs a partition with at least two parts");
        if (w == "split") return lemma_result(c, w, split_identity_check(t, c.m));
        const auto r = iwahori_induction_instance(t, c.m);
        return lemma_result(c, w, r.ok, {{"detail", r.detail}});
    }
    if (w == "lattice") return lemma_result(c, w, lattice_stabilizer_check(I, c.m, c.M, c.p));
    if (w == "clifford" || w == "normality" || w == "theta") {
        const auto s = clifford_setup(I, c.m, c.M, c.p);
        if (w == "normality") return lemma_result(c, w, normality_check(s));
        if (w == "theta") {
            std::string why;
            const bool ok = theta_check(s, &why);
            return lemma_result(c, w, ok, {{"detail", why}});
        }
        const auto r = clifford_decomposition_check(s);
        return lemma_result(c, w, r.ok,
                            {{"orbits", r.orbit_count},
                             {"index", r.index},
                             {"dimension_sum", r.orbit_dim_sum},
                             {"identity_multiplicity", r.identity_multiplicity.numerator()},
                             {"detail", r.detail}});
    }
    if (w == "orbits") {
        bool ok = true;
        json list = json::array();
        for (const auto& orb : residue_orbits(I, c.p)) {
            if (orb.front().is_zero()) continue;
            const auto nf = orbit_normal_form(orb.front(), I, c.p);
            ok = ok && nf.certified;
            list.push_back({{"size", orb.size()},
                            {"representative", nf.rep.to_string()},
                            {"tag", to_string(nf.tag)},
                            {"block", nf.block},
                            {"certificate", nf.certificate}});
        }
        return lemma_result(c, w, ok, {{"orbits", list}});
    }
    if (w == "casselman") {
        if (c.n != 2) throw UsageError("casselman needs n = 2");
        bool ok = true;
        json list = json::array();
        for (const auto& varpi : irreducibles(1, c.p)) {
            const auto u = casselman_u_i(varpi, c.m, c.M);
            const bool irr = inner_product(u, u) == Rational(1);
            const bool eq = c.m < 2 || u == casselman_clifford_form(varpi, c.m, c.M);
            ok = ok && irr && eq;
            list.push_back({{"varpi", varpi.index}, {"dimension", u.degree()}, {"irreducible", irr}, {"clifford_form", eq}});
        }
        return lemma_result(c, w, ok, {{"pieces", list}});
    }
    if (w == "trace") {
        bool ok = true;
        for (int a = 1; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b) ok = ok && trace_pairing_check(a, b, c.p);
        return lemma_result(c, w, ok);
    }
    throw UsageError("unknown verify target '" + w + "'");
}

int cmd_verify(const RunConfig& c) {
    const json j = verify_json(c);
    emit(c, render(c, j));
    return j["verdict"] == "PASS" ? kPass : kFail;
}

struct GridPoint {
    int n, p, M;
    bool stretch;
};

int cmd_sweep(const RunConfig& c) {
    std::vector<GridPoint> grid;
    if (c.grid != "stretch") grid = {{2, 2, 2, false}, {2, 2, 3, false}, {2, 3, 2, false}};
    if (c.grid != "fast") grid.push_back({3, 2, 2, true});
    json runs = json::array();
    int passed = 0, failed = 0;
    auto record = [&](const std::string& kind, json cfg, bool ok) {
        (ok ? passed : failed)++;
        runs.push_back({{"kind", kind}, {"config", std::move(cfg)}, {"verdict", ok ? "PASS" : "FAIL"}});
    };
    for (const auto& g : grid) {
        for (const auto& s : level_zero_classes(g.n, g.p)) {
            for (const auto& [I, labels] : orderings(s)) {
                json cfg = {{"n", g.n}, {"p", g.p}, {"M", g.M}, {"I", I.parts}, {"class", class_json(s)}};
                json lab = json::array();
                for (const auto& l : labels) lab.push_back(l.index);
                cfg["cuspidals"] = lab;
                record("corollary", cfg, verify_corollary(I, labels, g.M).pass);
                for (int m = 2; m <= g.M; ++m) {
                    cfg["m"] = m;
                    record("main", cfg, verify_main_theorem(I, labels, m, g.M).pass);
                    if (I.r() >= 2) record("iwahori", cfg, iwahori_induction_instance(build_tau_I(I, labels, g.M), m).ok);
                }
            }
        }
        for (const auto& I : compositions(g.n)) {
            if (I.r() < 2) continue;
            for (int m = 1; m <= g.M; ++m) {
                json cfg = {{"n", g.n}, {"p", g.p}, {"M", g.M}, {"I", I.parts}, {"m", m}};
                record("lattice", cfg, lattice_stabilizer_check(I, m, g.M, g.p));
                if (m + 1 > g.M) continue;
                const auto s = clifford_setup(I, m, g.M, g.p);
                record("clifford", cfg, clifford_decomposition_check(s).ok);
                record("normality", cfg, normality_check(s));
                record("theta", cfg, theta_check(s));
            }
        }
    }
    json j;
    j["schema"] = kReportSchema;
    j["kind"] = "sweep";
    j["config"] = c.to_json();
    j["runs"] = runs;
    j["totals"] = {{"pass", passed}, {"fail", failed}};
    j["verdict"] = failed == 0 ? "PASS" : "FAIL";
    if (c.format == "json") {
        emit(c, j.dump(2) + "\n");
    } else if (c.format == "csv") {
        std::ostringstream os;
        os << "kind,config,verdict\n";
        for (const auto& r : runs) os << r["kind"].get<std::string>() << ",\"" << r["config"].dump() << "\"," << r["verdict"].get<std::string>() << "\n";
        emit(c, os.str());
    } else {
        emit(c, j["verdict"].get<std::string>() + " sweep " + std::to_string(passed) + " passed, " + std::to_string(failed) + " failed\n");
    }
    return failed == 0 ? kPass : kFail;
}

void error_json(const std::string& kind, const std::string& message) {
    std::cerr << json{{"schema", "lzt.error/1"}, {"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-zero typicality toolkit"};
    app.require_subcommand(1);
    RunConfig c;

    auto common_out = [&](CLI::App* s) {
        s->add_option("--out", c.out, "Write output to this file");
        s->add_option("--format", c.format, "json, text or csv")->capture_default_str();
        s->add_option("--threads", c.threads, "Worker threads (0 = hardware)");
        s->add_option("--budget", c.budget, "Enumeration budget override");
    };
    auto config_opts = [&](CLI::App* s) {
        s->add_option("--n", c.n, "Matrix size")->capture_default_str();
        s->add_option("--p", c.p, "Residue characteristic")->capture_default_str();
        s->add_option("--M", c.M, "Depth of the ambient quotient")->capture_default_str();
        s->add_option("--m", c.m, "Level m")->capture_default_str();
        s->add_option("--I", c.partition, "Ordered partition, e.g. 1,2");
        s->add_option("--cuspidals", c.cuspidals, "Cuspidal label per block, e.g. 0,1");
        common_out(s);
    };

    auto* chartab = app.add_subcommand("chartab", "Character table of GL_n(Z/p^m)");
    chartab->add_option("--group", c.group, "Group family")->capture_default_str();
    chartab->add_option("--n", c.n, "Matrix size")->capture_default_str();
    chartab->add_option("--p", c.p, "Prime")->capture_default_str();
    chartab->add_option("--m", c.m, "Depth")->capture_default_str();
    common_out(chartab);
    c.format = "text";

    auto* decomp = app.add_subcommand("decompose", "Decompose ind_{P_I(m)} tau_I or U_m(tau_I)");
    config_opts(decomp);
    decomp->add_option("--what", c.what, "U or ind")->check(CLI::IsMember({"U", "ind"}));

    auto* zel = app.add_subcommand("zelevinsky", "Evaluate a Zelevinsky ring expression");
    zel->add_option("expression", c.expression, "Expression")->required();
    zel->add_option("--q", c.q, "Residue field size")->required();
    common_out(zel);

    auto* verify = app.add_subcommand("verify", "Run a lemma check or theorem verifier");
    verify->add_option("target", c.target,
                       "main, corollary, multiplicity, split, iwahori, lattice, clifford, normality, theta, orbits, casselman, trace")
        ->required();
    config_opts(verify);

    auto* sweep = app.add_subcommand("sweep", "Run all verifiers over a grid");
    sweep->add_option("--grid", c.grid, "fast, stretch or all")->capture_default_str();
    common_out(sweep);

    // chartab defaults to the text table; everything else to JSON.
    for (auto* s : {decomp, zel, verify, sweep}) s->preparse_callback([&](std::size_t) { c.format = "json"; });
    chartab->preparse_callback([&](std::size_t) { c.format = "text"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_json("usage", e.what());
        return kUsage;
    }
    c.command = app.get_subcommands().front()->get_name();
    if (c.budget > 0) setenv("LZT_BUDGET", std::to_string(c.budget).c_str(), 1);
    thread_count() = c.threads;

    try {
        validate(c);
        if (c.command == "chartab") return cmd_chartab(c);
        if (c.command == "decompose") return cmd_decompose(c);
        if (c.command == "zelevinsky") return cmd_zelevinsky(c);
        if (c.command == "verify") return cmd_verify(c);
        return cmd_sweep(c);
    } catch (const BudgetExceeded& e) {
        error_json("budget", e.what());
        return kBudget;
    } catch (const InternalFault& e) {
        error_json("fault", e.what());
        return kFault;
    } catch (const std::invalid_argument& e) {
        error_json("usage", e.what());
        return kUsage;
    } catch (const std::domain_error& e) {
        error_json("usage", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        error_json("fault", e.what());
        return kFault;
    }
}
