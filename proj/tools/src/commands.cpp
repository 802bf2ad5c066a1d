#include "cdbundle_cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cdbundle/equivalence.hpp"
#include "cdbundle/error.hpp"
#include "cdbundle/invariants.hpp"
#include "cdbundle_cli/report.hpp"

namespace cdbundle::cli {

std::vector<double> parse_number_list(const std::string& text, std::size_t expected) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        std::string item = text.substr(pos, comma - pos);
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        item = first == std::string::npos ? std::string() : item.substr(first, last - first + 1);
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size() || !std::isfinite(v)) {
            throw SpecParseError("malformed number '" + item + "' in '" + text + "'");
        }
        out.push_back(v);
        pos = comma + 1;
    }
    if (out.size() != expected) {
        throw SpecParseError("expected " + std::to_string(expected) + " comma-separated values, got " +
                             std::to_string(out.size()));
    }
    return out;
}

KernelSpec load_kernel_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecParseError("cannot open kernel file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_kernel_spec(ss.str());
}

std::string field_csv(const KernelSpec& spec, int grid, double radius, const FDConfig& cfg, unsigned threads) {
    if (grid < 1) throw DomainError("field: grid must be positive");
    if (!(radius >= 0.0) || !(radius < 1.0)) throw DomainError("field: radius must lie in [0, 1)");
    std::vector<cplx> points;
    for (int iy = 0; iy < grid; ++iy) {
        for (int ix = 0; ix < grid; ++ix) {
            const double x = grid == 1 ? 0.0 : -radius + 2.0 * radius * ix / (grid - 1);
            const double y = grid == 1 ? 0.0 : -radius + 2.0 * radius * iy / (grid - 1);
            if (std::hypot(x, y) <= radius * (1.0 + 1e-12)) points.emplace_back(x, y);
        }
    }
    const auto eigs = curvature_eigen_sweep(spec, points, cfg, threads);
    std::string csv = "x,y";
    for (int i = 1; i <= spec.rank(); ++i) csv += ",eig" + std::to_string(i);
    csv += "\n";
    for (std::size_t p = 0; p < points.size(); ++p) {
        csv += format_number(points[p].real()) + "," + format_number(points[p].imag());
        for (double e : eigs[p]) csv += "," + format_number(e);
        csv += "\n";
    }
    return csv;
}

namespace {

Json spec_json(const KernelSpec& spec) { return Json::parse(kernel_spec_to_json(spec)); }

std::string scheme_name(FDScheme s) { return s == FDScheme::Central ? "central" : "richardson"; }

FDConfig make_config(const std::string& scheme, double step, bool step_given) {
    FDConfig cfg = scheme == "central" ? FDConfig::central() : FDConfig{};
    if (step_given) cfg.step = step;
    try {
        validate(cfg);
    } catch (const DomainError& e) {
        throw SpecParseError(e.what());
    }
    return cfg;
}

Json config_json(const FDConfig& cfg) {
    Json j = Json::object();
    j["fd_step"] = cfg.step;
    j["fd_scheme"] = scheme_name(cfg.scheme);
    j["fd_levels"] = cfg.levels;
    j["fd_order_growth"] = cfg.order_growth;
    return j;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt(cplx v) {
    if (std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v.real()))) return fmt(v.real());
    return fmt(v.real()) + (v.imag() < 0 ? "-" : "+") + fmt(std::abs(v.imag())) + "i";
}

void print_matrix(std::ostream& out, const std::string& title, const ComplexMatrix& m) {
    out << title << ":\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << "  ";
        for (Eigen::Index k = 0; k < m.cols(); ++k) out << std::setw(18) << fmt(m(i, k));
        out << "\n";
    }
}

struct Common {
    std::vector<std::string> args;
    bool json = false;
    std::string scheme = "richardson";
    double fd_step = 1e-4;
    bool fd_step_given = false;
};

CLI::Option* add_fd_options(CLI::App* sub, Common& c) {
    CLI::Option* step = sub->add_option("--fd-step", c.fd_step, "Finite-difference base step");
    sub->add_option("--scheme", c.scheme, "Finite-difference scheme")
        ->check(CLI::IsMember({"richardson", "central"}));
    return step;
}

int cmd_invariants(const Common& c, const std::string& file, int order, std::ostream& out) {
    const KernelSpec spec = load_kernel_file(file);
    const FDConfig cfg = make_config(c.scheme, c.fd_step, c.fd_step_given);
    const PointInvariants inv = invariants_at_zero(kernel_taylor(spec, order));
    const OracleResult orc = orthonormal_oracle_at(spec, 0.0, cfg);
    const double tol = cfg.scheme == FDScheme::Central ? 1e-3 : 1e-5;
    const double r_k = max_abs(inv.curvature - orc.curvature);
    const double r_z = max_abs(inv.d_zbar - orc.d_zbar);
    const double r_zz = max_abs(inv.d_zzbar - orc.d_zzbar);
    const bool agrees = r_k <= tol && r_z <= tol && r_zz <= tol;

    if (!c.json) {
        print_matrix(out, "curvature(0)", inv.curvature);
        print_matrix(out, "d_zbar(0)", inv.d_zbar);
        print_matrix(out, "d_zzbar(0)", inv.d_zzbar);
        out << "oracle residuals: curvature " << fmt(r_k) << ", d_zbar " << fmt(r_z) << ", d_zzbar " << fmt(r_zz)
            << " (" << (agrees ? "within " : "exceed ") << fmt(tol) << ")\n";
        return exit_code::ok;
    }
    Json doc = report_skeleton("invariants", c.args);
    doc["inputs"]["kernel"] = spec_json(spec);
    doc["inputs"]["order"] = order;
    doc["inputs"]["point"] = complex_json(inv.point);
    doc["outputs"]["frame"] = "orthonormal_at_point";
    doc["outputs"]["curvature"] = matrix_json(inv.curvature);
    doc["outputs"]["d_zbar"] = matrix_json(inv.d_zbar);
    doc["outputs"]["d_zzbar"] = matrix_json(inv.d_zzbar);
    doc["outputs"]["curvature_eigenvalues"] = real_array(hermitian_eigenvalues(inv.curvature));
    Json res = Json::object();
    res["curvature"] = r_k;
    res["d_zbar"] = r_z;
    res["d_zzbar"] = r_zz;
    doc["outputs"]["oracle_residuals"] = res;
    doc["verdicts"]["oracle_agrees"] = agrees;
    doc["tolerances"] = config_json(cfg);
    doc["tolerances"]["oracle"] = tol;
    out << write_json(doc);
    return exit_code::ok;
}

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Equivalent:
            return exit_code::ok;
        case Verdict::EigenvaluesMatchOnly:
            return exit_code::eigenvalues_match_only;
        case Verdict::Distinct:
            return exit_code::distinct;
    }
    return exit_code::distinct;
}

int cmd_equiv(const Common& c, const std::string& left, const std::string& right, int order, std::ostream& out) {
    const KernelSpec l = load_kernel_file(left);
    const KernelSpec r = load_kernel_file(right);
    const EquivTolerances tol;
    const EquivalenceReport rep = full_report(l, r, order, tol);
    if (!c.json) {
        out << "verdict: " << to_string(rep.verdict) << "\n";
        if (!rep.certificate.level.empty()) {
            out << "level: " << rep.certificate.level << "\n";
            out << "reason: " << rep.certificate.reason << "\n";
            for (const auto& [k, v] : rep.certificate.values) out << "  " << k << " = " << fmt(v) << "\n";
        }
        if (rep.witness) print_matrix(out, "witness", *rep.witness);
        out << "scope: " << rep.scope << "\n";
        return verdict_exit(rep.verdict);
    }
    Json doc = report_skeleton("equiv", c.args);
    doc["inputs"]["left"] = spec_json(l);
    doc["inputs"]["right"] = spec_json(r);
    doc["inputs"]["order"] = order;
    doc["outputs"]["witness"] = rep.witness ? matrix_json(*rep.witness) : Json(nullptr);
    Json cert = Json::object();
    cert["level"] = rep.certificate.level;
    cert["reason"] = rep.certificate.reason;
    Json vals = Json::object();
    for (const auto& [k, v] : rep.certificate.values) vals[k] = v;
    cert["values"] = vals;
    doc["outputs"]["certificate"] = cert;
    doc["verdicts"]["verdict"] = to_string(rep.verdict);
    doc["verdicts"]["homogeneous"] = rep.homogeneous;
    doc["verdicts"]["scope"] = rep.scope;
    doc["tolerances"]["zero"] = tol.zero;
    doc["tolerances"]["residual"] = tol.residual;
    doc["tolerances"]["unitarity"] = tol.unitarity;
    doc["tolerances"]["eig"] = tol.eig;
    out << write_json(doc);
    return verdict_exit(rep.verdict);
}

Json ledger_json(const std::vector<LedgerEntry>& entries) {
    Json a = Json::array();
    for (const auto& e : entries) {
        Json j = Json::object();
        j["name"] = e.name;
        j["lhs"] = e.lhs;
        j["threshold"] = e.threshold;
        j["pass"] = e.pass;
        a.push_back(std::move(j));
    }
    return a;
}

Json triple_json(const Triple& t) { return real_array({t[0], t[1], t[2]}); }

Json feasibility_json(const FeasibilityResult& r) {
    Json j = Json::object();
    j["delta"] = triple_json(r.delta);
    j["abc"] = triple_json(r.abc);
    if (r.params) {
        Json p = Json::object();
        p["lambda"] = r.params->lambda;
        p["mu1_sq"] = r.params->mu1_sq;
        p["mu2_sq"] = r.params->mu2_sq;
        j["params"] = p;
    } else {
        j["params"] = nullptr;
    }
    j["checks"] = ledger_json(r.checks);
    j["feasible"] = r.feasible;
    return j;
}

void print_feasibility(std::ostream& out, const FeasibilityResult& r, const std::string& indent) {
    out << indent << "delta (" << fmt(r.delta[0]) << ", " << fmt(r.delta[1]) << ", " << fmt(r.delta[2])
        << ")  abc (" << fmt(r.abc[0]) << ", " << fmt(r.abc[1]) << ", " << fmt(r.abc[2]) << ")\n";
    for (const auto& e : r.checks)
        out << indent << "  " << (e.pass ? "ok   " : "fail ") << e.name << ": " << fmt(e.lhs) << "\n";
    if (r.params)
        out << indent << "  lambda " << fmt(r.params->lambda) << ", mu1^2 " << fmt(r.params->mu1_sq) << ", mu2^2 "
            << fmt(r.params->mu2_sq) << "\n";
    out << indent << "  feasible: " << (r.feasible ? "yes" : "no") << "\n";
}

struct FeasibleArgs {
    std::string triple;
    std::string pair;
    bool rank2 = false;
    bool permutations = false;
    double margin = 0.0;
};

int cmd_feasible(const Common& c, const FeasibleArgs& f, std::ostream& out) {
    if (f.triple.empty() == f.pair.empty()) throw SpecParseError("give exactly one of --triple or --pair");
    if (!f.pair.empty() && !f.rank2) throw SpecParseError("--pair requires --rank2");
    if (!f.triple.empty() && f.rank2) throw SpecParseError("--rank2 takes --pair, not --triple");
    if (f.rank2 && f.permutations) throw SpecParseError("--permutations applies to triples only");

    Json doc = report_skeleton("feasible", c.args);
    doc["tolerances"]["margin"] = f.margin;
    if (f.rank2) {
        const auto v = parse_number_list(f.pair, 2);
        const auto p = rank2_feasibility(v[0], v[1]);
        doc["inputs"]["pair"] = real_array(v);
        if (p) {
            Json j = Json::object();
            j["lambda"] = p->lambda;
            j["b"] = p->b;
            j["mu1_sq"] = p->mu1_sq;
            doc["outputs"]["params"] = j;
        } else {
            doc["outputs"]["params"] = nullptr;
        }
        doc["verdicts"]["feasible"] = p.has_value();
        if (!c.json) {
            out << "pair (" << fmt(v[0]) << ", " << fmt(v[1]) << "): ";
            if (p)
                out << "feasible, lambda " << fmt(p->lambda) << ", b " << fmt(p->b) << ", mu1^2 " << fmt(p->mu1_sq)
                    << "\n";
            else
                out << "infeasible\n";
            return exit_code::ok;
        }
        out << write_json(doc);
        return exit_code::ok;
    }

    const auto v = parse_number_list(f.triple, 3);
    const Triple d{v[0], v[1], v[2]};
    doc["inputs"]["triple"] = triple_json(d);
    const FeasibilityResult r = feasibility(d, f.margin);
    doc["outputs"]["result"] = feasibility_json(r);
    Json regions = Json::object();
    regions["base"] = check_region(d, Region::Base, f.margin).holds;
    regions["perm1"] = check_region(d, Region::Perm1, f.margin).holds;
    regions["perm2"] = check_region(d, Region::Perm2, f.margin).holds;
    doc["verdicts"]["feasible"] = r.feasible;
    doc["verdicts"]["regions"] = regions;
    PermutationAnalysis pa;
    if (f.permutations) {
        pa = permutation_analysis(d, f.margin);
        Json per = Json::array();
        for (std::size_t i = 0; i < orderings().size(); ++i) {
            Json j = Json::object();
            j["name"] = orderings()[i].name;
            j["sigma"] = orderings()[i].sigma;
            j["result"] = feasibility_json(pa.results[i]);
            per.push_back(std::move(j));
        }
        doc["outputs"]["orderings"] = per;
        doc["verdicts"]["feasible_orderings"] = pa.feasible;
        doc["verdicts"]["exclusion_holds"] = pa.exclusion_holds;
    }
    if (c.json) {
        out << write_json(doc);
        return exit_code::ok;
    }
    print_feasibility(out, r, "");
    out << "regions: base " << regions["base"].get<bool>() << ", perm1 " << regions["perm1"].get<bool>()
        << ", perm2 " << regions["perm2"].get<bool>() << "\n";
    if (f.permutations) {
        out << "feasible orderings:";
        for (const auto& n : pa.feasible) out << " " << n;
        out << "\n";
    }
    return exit_code::ok;
}

int cmd_field(const Common& c, const std::string& file, int grid, double radius, const std::string& path,
              unsigned threads, std::ostream& out) {
    if (grid < 1) throw SpecParseError("--grid must be positive");
    if (!(radius >= 0.0) || !(radius < 1.0)) throw SpecParseError("--radius must lie in [0, 1)");
    const KernelSpec spec = load_kernel_file(file);
    const FDConfig cfg = make_config(c.scheme, c.fd_step, c.fd_step_given);
    const std::string csv = field_csv(spec, grid, radius, cfg, threads);
    if (path.empty()) {
        out << csv;
        return exit_code::ok;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SpecParseError("cannot write '" + path + "'");
    f << csv;
    return exit_code::ok;
}

int cmd_reproduce(const Common& c, const std::string& name, std::ostream& out) {
    const ScenarioResult r = run_scenario(name);
    if (c.json) {
        Json doc = report_skeleton("reproduce", c.args);
        doc["inputs"]["case"] = name;
        Json checks = Json::array();
        for (const auto& ch : r.checks) {
            Json j = Json::object();
            j["name"] = ch.name;
            j["pass"] = ch.pass;
            j["detail"] = ch.detail;
            checks.push_back(std::move(j));
        }
        doc["outputs"]["checks"] = checks;
        doc["verdicts"]["all_pass"] = r.all_pass();
        doc["notes"] = r.notes;
        out << write_json(doc);
    } else {
        for (const auto& ch : r.checks) out << (ch.pass ? "PASS " : "FAIL ") << ch.name << ": " << ch.detail << "\n";
        for (const auto& n : r.notes) out << "NOTE " << n << "\n";
    }
    return r.all_pass() ? exit_code::ok : exit_code::failed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Curvature invariants of reproducing-kernel bundles on the unit disc", "cdbundle"};
    app.require_subcommand(1);
    Common c;
    c.args = args;

    std::string kernel, left, right, out_path, scenario;
    int order = 6;
    int grid = 0;
    double radius = 0.0;
    unsigned threads = 0;
    FeasibleArgs fa;

    auto* inv = app.add_subcommand("invariants", "Invariants at 0 with an oracle cross-check");
    inv->add_option("--kernel", kernel, "Kernel spec JSON file")->required();
    inv->add_option("--order", order, "Series truncation order")->check(CLI::Range(2, 40));
    inv->add_flag("--json", c.json, "Emit a JSON report");
    CLI::Option* inv_step = add_fd_options(inv, c);

    auto* eq = app.add_subcommand("equiv", "Compare two kernels");
    eq->add_option("--left", left, "Kernel spec JSON file")->required();
    eq->add_option("--right", right, "Kernel spec JSON file")->required();
    eq->add_option("--order", order, "Series truncation order")->check(CLI::Range(2, 40));
    eq->add_flag("--json", c.json, "Emit a JSON report");

    auto* fe = app.add_subcommand("feasible", "Inverse eigenvalue feasibility");
    fe->add_option("--triple", fa.triple, "d1,d2,d3");
    fe->add_option("--pair", fa.pair, "d1,d2 (with --rank2)");
    fe->add_flag("--rank2", fa.rank2, "Rank-2 problem");
    fe->add_flag("--permutations", fa.permutations, "Analyse all six orderings");
    fe->add_option("--margin", fa.margin, "Strictness margin for every inequality");
    fe->add_flag("--json", c.json, "Emit a JSON report");

    auto* fi = app.add_subcommand("field", "Oracle curvature eigenvalues over a grid as CSV");
    fi->add_option("--kernel", kernel, "Kernel spec JSON file")->required();
    fi->add_option("--grid", grid, "Points per axis")->required();
    fi->add_option("--radius", radius, "Clip radius, below 1")->required();
    fi->add_option("--out", out_path, "CSV path; stdout when omitted");
    fi->add_option("--threads", threads, "Worker threads; 0 picks the hardware count");
    CLI::Option* fi_step = add_fd_options(fi, c);

    auto* re = app.add_subcommand("reproduce", "Run a bundled scenario and print PASS/FAIL lines");
    re->add_option("--case", scenario, "Scenario name")->required()->check(CLI::IsMember(scenario_names()));
    re->add_flag("--json", c.json, "Emit a JSON report");

    std::vector<std::string> argv_store{"cdbundle"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return exit_code::usage;
    }

    c.fd_step_given = inv_step->count() > 0 || fi_step->count() > 0;
    try {
        if (inv->parsed()) return cmd_invariants(c, kernel, order, out);
        if (eq->parsed()) return cmd_equiv(c, left, right, order, out);
        if (fe->parsed()) return cmd_feasible(c, fa, out);
        if (fi->parsed()) return cmd_field(c, kernel, grid, radius, out_path, threads, out);
        if (re->parsed()) return cmd_reproduce(c, scenario, out);
    } catch (const SpecParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::numeric;
    }
    return exit_code::usage;
}

}  // namespace cdbundle::cli
