#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixedcurv/splitting.hpp"

using namespace mixedcurv;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

const char* kind_name(IdentityKind k) {
    switch (k) {
        case IdentityKind::Pointwise: return "pointwise";
        case IdentityKind::Integral: return "integral";
        case IdentityKind::Leafwise: return "leafwise";
    }
    return "?";
}

Scenario resolve_scenario(const std::string& ref, const ParamMap& params) {
    if (ref.rfind("preset:", 0) == 0) return build_preset(ref.substr(7), params);
    return load_scenario_file(ref);
}

ordered_json point_json(const Vec<double>& x) {
    ordered_json arr = ordered_json::array();
    for (int k = 0; k < x.n; ++k) arr.push_back(x[k]);
    return arr;
}

// Leaf anchor points: one per node of the transverse (D^bot) axes.
std::vector<Vec<double>> leaf_anchors(const Scenario& sc, int resolution) {
    const int d = sc.dim(), n = sc.n_top();
    std::vector<Axis> axes;
    for (int k = n; k < d; ++k)
        axes.push_back(build_axis(sc.chart.ranges[k].first, sc.chart.ranges[k].second,
                                  sc.chart.periodic[k], resolution));
    std::vector<Vec<double>> anchors;
    std::vector<int> idx(axes.size(), 0);
    for (;;) {
        Vec<double> x(d);
        for (int k = 0; k < n; ++k) x[k] = sc.chart.ranges[k].first;
        for (std::size_t k = 0; k < axes.size(); ++k) x[n + int(k)] = axes[k].nodes[idx[k]];
        anchors.push_back(x);
        int k = int(axes.size()) - 1;
        while (k >= 0 && ++idx[k] == int(axes[k].nodes.size())) {
            idx[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return anchors;
}

struct CheckOutcome {
    ordered_json entry;
    bool evaluated = false;
    bool passed = true;
};

CheckOutcome run_identity(const Scenario& sc, const IdentityDescriptor& desc,
                          const QuadratureGrid& grid, int resolution, double tol) {
    CheckOutcome out;
    out.entry["id"] = desc.id;
    out.entry["kind"] = kind_name(desc.kind);

    for (const auto& name : desc.needs) {
        PredicateReport rep = check_predicate(sc, name);
        if (!rep.ok) {
            out.entry["status"] = "skipped";
            out.entry["unmet_predicate"] = name;
            out.entry["predicate_deviation"] = rep.deviation;
            return out;
        }
    }

    out.evaluated = true;
    if (desc.kind == IdentityKind::Pointwise) {
        IdentityResult worst;
        worst.id = desc.id;
        Vec<double> worst_x;
        bool first = true;
        for (const auto& x : grid.nodes) {
            IdentityResult r = evaluate_pointwise(sc, desc.id, x);
            if (first || r.relative() > worst.relative()) {
                worst = r;
                worst_x = x;
                first = false;
            }
        }
        out.passed = worst.relative() <= tol;
        out.entry["status"] = out.passed ? "pass" : "fail";
        out.entry["nodes"] = grid.nodes.size();
        out.entry["max_relative_residual"] = worst.relative();
        out.entry["worst_point"] = point_json(worst_x);
        out.entry["lhs"] = worst.lhs;
        out.entry["rhs"] = worst.rhs;
    } else if (desc.kind == IdentityKind::Integral) {
        IdentityResult r = evaluate_integral(sc, desc.id, grid);
        out.passed = r.residual <= tol;
        out.entry["status"] = out.passed ? "pass" : "fail";
        out.entry["nodes"] = grid.nodes.size();
        out.entry["integral_value"] = r.lhs;
        if (desc.id == "IF01B") {
            SignVariant v = if01b_variants()[std::size_t(pinned_if01b_variant())];
            out.entry["sign_variant"] = {{"s_bar", v.s_bar}, {"s_ric", v.s_ric}};
        }
    } else {
        double worst = 0.0;
        Vec<double> worst_x;
        std::vector<Vec<double>> anchors = leaf_anchors(sc, resolution);
        bool first = true;
        for (const auto& x : anchors) {
            IdentityResult r = evaluate_leafwise(sc, desc.id, x, resolution);
            if (first || r.residual > worst) {
                worst = r.residual;
                worst_x = x;
                first = false;
            }
        }
        out.passed = worst <= tol;
        out.entry["status"] = out.passed ? "pass" : "fail";
        out.entry["leaves"] = anchors.size();
        out.entry["max_integral_value"] = worst;
        out.entry["worst_point"] = point_json(worst_x);
    }
    return out;
}

ordered_json splitting_json(const SplittingReport& rep, const SplitVerdict& verdict) {
    ordered_json s;
    s["predicates"] = {{"mixed_ai", rep.mixed_ai}, {"cond4", rep.cond4},
                       {"cond5", rep.cond5},       {"cond_hht", rep.cond_hht},
                       {"cross_pairing", rep.cross_pairing},
                       {"umbilical_top", rep.umbilical_top},
                       {"umbilical_bot", rep.umbilical_bot}};
    s["tensors"] = {{"h_top", rep.h_top_max}, {"h_bot", rep.h_bot_max},
                    {"T_top", rep.t_top_max}, {"T_bot", rep.t_bot_max},
                    {"H_top", rep.H_top_max}, {"H_bot", rep.H_bot_max}};
    s["bar_s_mix"] = {{"min", rep.s_bar_min}, {"max", rep.s_bar_max}};
    ordered_json theorems = ordered_json::array();
    for (const auto& t : rep.theorems) {
        ordered_json e;
        e["id"] = t.id;
        e["applicable"] = t.applicable;
        e["sign_condition"] = t.sign_condition;
        e["sign_met"] = t.sign_met;
        e["failing_predicates"] = t.failing;
        e["unverified_assumptions"] = t.unverified;
        theorems.push_back(e);
    }
    s["theorems"] = theorems;
    s["verdict"] = verdict.splits ? "splits" : "obstructed";
    s["obstructions"] = verdict.obstructions;
    return s;
}

int cmd_check(const std::string& scenario_ref, const std::string& identity, int resolution,
              double tol, const std::string& out_path, const ParamMap& params) {
    Scenario sc;
    try {
        sc = resolve_scenario(scenario_ref, params);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::vector<const IdentityDescriptor*> selected;
    if (identity == "all") {
        for (const auto& d : identity_catalog()) selected.push_back(&d);
    } else {
        const IdentityDescriptor* d = find_identity(identity);
        if (!d) {
            std::cerr << "error: unknown identity '" << identity << "'\n";
            return 2;
        }
        selected.push_back(d);
    }

    ordered_json report;
    report["scenario"] = {{"name", sc.name},
                          {"hash", sc.descriptor_hash()},
                          {"dims", {{"top", sc.n_top()}, {"bot", sc.n_bot()}}},
                          {"closed", sc.closed}};

    bool all_pass = true;
    ordered_json identities = ordered_json::array();
    QuadratureGrid grid;
    try {
        grid = build_grid(sc.chart, resolution);
        for (const auto* d : selected) {
            CheckOutcome outcome = run_identity(sc, *d, grid, resolution, tol);
            if (outcome.evaluated && !outcome.passed) all_pass = false;
            if (!outcome.evaluated && selected.size() == 1) {
                std::cerr << "error: identity " << d->id << " precondition unmet: "
                          << outcome.entry.value("unmet_predicate", std::string("?")) << "\n";
                return 2;
            }
            identities.push_back(outcome.entry);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    report["identities"] = identities;

    SplittingReport srep = check_hypotheses(sc, grid);
    SplitVerdict verdict = verify_splitting(sc, grid);
    report["splitting"] = splitting_json(srep, verdict);
    report["meta"] = {{"version", kVersion},
                      {"grid", resolution},
                      {"tol", tol},
                      {"if01b_variant", pinned_if01b_variant()}};

    // Console summary.
    std::printf("scenario %s (grid %d, tol %.1e)\n", sc.name.c_str(), resolution, tol);
    for (const auto& e : identities) {
        std::string id = e["id"], status = e["status"];
        double res = e.contains("max_relative_residual")
                         ? double(e["max_relative_residual"])
                         : e.contains("integral_value") ? std::abs(double(e["integral_value"]))
                         : e.contains("max_integral_value") ? double(e["max_integral_value"])
                                                            : 0.0;
        std::printf("  %-14s %-9s %-8s %.3e\n", id.c_str(), std::string(e["kind"]).c_str(),
                    status.c_str(), res);
    }
    std::printf("  splitting: %s", verdict.splits ? "splits" : "obstructed(");
    if (!verdict.splits) {
        for (std::size_t i = 0; i < verdict.obstructions.size(); ++i)
            std::printf("%s%s", i ? ", " : "", verdict.obstructions[i].c_str());
        std::printf(")");
    }
    std::printf("\n");

    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return 2;
        }
        f << report.dump(2) << "\n";
    }
    return all_pass ? 0 : 1;
}

int cmd_list_identities() {
    for (const auto& d : identity_catalog()) {
        std::printf("%-14s %-9s", d.id.c_str(), kind_name(d.kind));
        std::printf(" needs:[");
        for (std::size_t i = 0; i < d.needs.size(); ++i)
            std::printf("%s%s", i ? ", " : "", d.needs[i].c_str());
        std::printf("]  %s\n", d.summary.c_str());
    }
    return 0;
}

int cmd_zoo(bool list, const std::string& preset, const ParamMap& params) {
    if (list || preset.empty()) {
        for (const auto& name : preset_names()) std::printf("%s\n", name.c_str());
        return 0;
    }
    try {
        Scenario sc = build_preset(preset, params);
        std::printf("%s\n", sc.canonical_json().c_str());
        ConnectionClassReport rep = classify_connection(sc, sc.probe_points());
        std::printf("contorsion: max %.3e, metric-compat dev %.3e, statistical dev %.3e\n",
                    rep.max_abs, rep.metric_compat_dev, rep.statistical_dev);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

ParamMap parse_params(const std::vector<std::string>& kvs) {
    ParamMap out;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--param", "expected k=v, got '" + kv + "'");
        out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed scalar curvature identity checker"};
    app.require_subcommand(1);

    std::string scenario_ref, identity = "all", out_path;
    int resolution = 32;
    double tol = 1e-6;
    std::vector<std::string> param_kvs;

    CLI::App* check = app.add_subcommand("check", "evaluate identities on a scenario");
    check->add_option("--scenario", scenario_ref, "scenario file or preset:<name>")->required();
    check->add_option("--identity", identity, "identity id or 'all'");
    check->add_option("--grid", resolution, "nodes per axis");
    check->add_option("--tol", tol, "residual tolerance");
    check->add_option("--out", out_path, "write JSON report to file");
    check->add_option("--param", param_kvs, "scenario parameter k=v");

    CLI::App* list_cmd = app.add_subcommand("list-identities", "print the identity catalog");

    bool zoo_list = false;
    std::string zoo_preset;
    std::vector<std::string> zoo_param_kvs;
    CLI::App* zoo = app.add_subcommand("zoo", "preset scenarios");
    zoo->add_flag("--list", zoo_list, "list preset names");
    zoo->add_option("--preset", zoo_preset, "build and describe a preset");
    zoo->add_option("--param", zoo_param_kvs, "preset parameter k=v");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed())
            return cmd_check(scenario_ref, identity, resolution, tol, out_path,
                             parse_params(param_kvs));
        if (list_cmd->parsed()) return cmd_list_identities();
        if (zoo->parsed()) return cmd_zoo(zoo_list, zoo_preset, parse_params(zoo_param_kvs));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
