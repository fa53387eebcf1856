#include "mixedcurv/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mixedcurv/contorsion.hpp"
#include "mixedcurv/geometry.hpp"

namespace mixedcurv {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void Chart::validate() const {
    if (dim_top < 1 || dim_bot < 1)
        throw SchemaError("chart: dims.top and dims.bot must be >= 1");
    const int d = dim();
    if (d > kMaxDim)
        throw SchemaError("chart: total dimension exceeds " + std::to_string(kMaxDim));
    if (static_cast<int>(ranges.size()) != d)
        throw SchemaError("chart.ranges: expected " + std::to_string(d) + " entries");
    if (static_cast<int>(periodic.size()) != d)
        throw SchemaError("chart.periodic: expected " + std::to_string(d) + " entries");
    for (int k = 0; k < d; ++k) {
        auto [lo, hi] = ranges[k];
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
            throw SchemaError("chart.ranges[" + std::to_string(k) + "]: need finite lo < hi");
    }
}

ContorsionSpec ContorsionSpec::none(int) {
    ContorsionSpec out;
    out.trivial = true;
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_double(std::uint64_t& state) {
    return double(splitmix64(state) >> 11) * 0x1.0p-53;
}

ExprPtr expr(const std::string& text) { return parse_expression(text); }

std::vector<std::vector<ExprPtr>> diag_metric(const std::vector<std::string>& entries) {
    const int d = static_cast<int>(entries.size());
    std::vector<std::vector<ExprPtr>> g(d, std::vector<ExprPtr>(d, make_number(0.0)));
    for (int k = 0; k < d; ++k) g[k][k] = expr(entries[k]);
    return g;
}

std::vector<ExprPtr> coord_vector(int d, int k) {
    std::vector<ExprPtr> v(d, make_number(0.0));
    v[k] = make_number(1.0);
    return v;
}

void all_periodic_2pi(Scenario& s) {
    const int d = s.chart.dim();
    s.chart.ranges.assign(d, {0.0, 2.0 * M_PI});
    s.chart.periodic.assign(d, true);
    s.closed = true;
}

int levi_civita3(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    return ((b - a + 3) % 3 == 1) ? 1 : -1;
}

double param_or(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

std::vector<Vec<double>> Scenario::probe_points() const {
    const int d = dim();
    std::vector<Vec<double>> pts;
    static const double fracs[3] = {0.2, 0.5, 0.8};
    int count = 1;
    for (int k = 0; k < d; ++k) count *= 3;
    for (int idx = 0; idx < count; ++idx) {
        Vec<double> x(d);
        int rem = idx;
        for (int k = 0; k < d; ++k) {
            auto [lo, hi] = chart.ranges[k];
            x[k] = lo + fracs[rem % 3] * (hi - lo);
            rem /= 3;
        }
        pts.push_back(x);
    }
    std::uint64_t state = 0x5EED;
    for (int r = 0; r < 10; ++r) {
        Vec<double> x(d);
        for (int k = 0; k < d; ++k) {
            auto [lo, hi] = chart.ranges[k];
            double len = hi - lo;
            x[k] = lo + (0.05 + 0.9 * unit_double(state)) * len;
        }
        pts.push_back(x);
    }
    return pts;
}

std::string Scenario::canonical_json() const {
    ordered_json doc;
    doc["name"] = name;
    doc["dims"] = {{"top", chart.dim_top}, {"bot", chart.dim_bot}};
    doc["signature_index"] = metric.signature_index;
    ordered_json ranges = ordered_json::array();
    for (auto [lo, hi] : chart.ranges) ranges.push_back({lo, hi});
    doc["chart"] = {{"ranges", ranges}, {"periodic", chart.periodic}};
    ordered_json gm = ordered_json::array();
    for (const auto& row : metric.components) {
        ordered_json r = ordered_json::array();
        for (const auto& c : row) r.push_back(c->print());
        gm.push_back(r);
    }
    doc["metric"] = {{"components", gm}};
    ordered_json dt = ordered_json::array();
    for (const auto& v : span_top) {
        ordered_json r = ordered_json::array();
        for (const auto& c : v) r.push_back(c->print());
        dt.push_back(r);
    }
    doc["distribution_top"] = dt;
    if (!span_bot.empty()) {
        ordered_json db = ordered_json::array();
        for (const auto& v : span_bot) {
            ordered_json r = ordered_json::array();
            for (const auto& c : v) r.push_back(c->print());
            db.push_back(r);
        }
        doc["distribution_bot"] = db;
    }
    if (contorsion.trivial) {
        doc["contorsion"] = "none";
    } else {
        ordered_json comp = ordered_json::array();
        for (const auto& plane : contorsion.components) {
            ordered_json p = ordered_json::array();
            for (const auto& row : plane) {
                ordered_json r = ordered_json::array();
                for (const auto& c : row) r.push_back(c->print());
                p.push_back(r);
            }
            comp.push_back(p);
        }
        const char* cls = contorsion.declared_class == ContorsionClass::MetricCompatible
                              ? "metric_compatible"
                              : contorsion.declared_class == ContorsionClass::Statistical
                                    ? "statistical"
                                    : "general";
        doc["contorsion"] = {{"components", comp},
                             {"lower_indices", contorsion.lower_indices},
                             {"class", cls}};
    }
    ordered_json pm = ordered_json::object();
    for (const auto& [k, v] : params) pm[k] = v;
    doc["params"] = pm;
    return doc.dump();
}

std::uint64_t Scenario::descriptor_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_json()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<std::string> preset_names() {
    return {"flat_torus",  "warped_torus",       "doubly_twisted", "hopf_s3",
            "skew_contorsion_t3", "statistical_torus", "lorentz_flat"};
}

Scenario build_preset(const std::string& name, const ParamMap& params,
                      const std::map<std::string, std::string>& exprs) {
    Scenario s;
    s.name = name;
    s.params = params;

    auto expr_or = [&exprs](const std::string& key, const std::string& fallback) {
        auto it = exprs.find(key);
        return it == exprs.end() ? fallback : it->second;
    };

    if (name == "flat_torus") {
        int n = static_cast<int>(param_or(params, "n", 1));
        int p = static_cast<int>(param_or(params, "p", 1));
        int q = static_cast<int>(param_or(params, "q", 0));
        s.chart.dim_top = n;
        s.chart.dim_bot = p;
        all_periodic_2pi(s);
        const int d = n + p;
        std::vector<std::string> diag(d, "1");
        for (int k = 0; k < q; ++k) diag[k] = "-1";
        s.metric.components = diag_metric(diag);
        s.metric.signature_index = q;
        for (int k = 0; k < n; ++k) s.span_top.push_back(coord_vector(d, k));
        s.contorsion = ContorsionSpec::none(d);
    } else if (name == "warped_torus") {
        std::string u = expr_or("u", "2+sin(x1)");
        s.chart.dim_top = 1;
        s.chart.dim_bot = 1;
        all_periodic_2pi(s);
        s.metric.components = diag_metric({"1", "(" + u + ")^2"});
        s.span_top.push_back(coord_vector(2, 0));
        s.contorsion = ContorsionSpec::none(2);
        s.twisted_preset = true;
        s.warp_u = expr(u);
        s.warp_v = make_number(1.0);
    } else if (name == "doubly_twisted") {
        std::string u = expr_or("u", "2+sin(x1+x2)/2");
        std::string v = expr_or("v", "2+cos(x1-x2)/2");
        s.chart.dim_top = 1;
        s.chart.dim_bot = 1;
        all_periodic_2pi(s);
        s.metric.components = diag_metric({"(" + v + ")^2", "(" + u + ")^2"});
        s.span_top.push_back(coord_vector(2, 0));
        s.twisted_preset = true;
        s.warp_u = expr(u);
        s.warp_v = expr(v);
        double tau_b = param_or(params, "tau_b", 0.0);
        double tau_f = param_or(params, "tau_f", 0.0);
        if (tau_b != 0.0 || tau_f != 0.0) {
            s.contorsion.trivial = false;
            s.contorsion.lower_indices = false;
            s.contorsion.components.assign(
                2, std::vector<std::vector<ExprPtr>>(2, std::vector<ExprPtr>(2, make_number(0.0))));
            s.contorsion.components[0][0][0] = expr("(" + u + ")^2 * tau_b");
            s.contorsion.components[1][1][1] = expr("(" + v + ")^2 * tau_f");
            s.params["tau_b"] = tau_b;
            s.params["tau_f"] = tau_f;
        } else {
            s.contorsion = ContorsionSpec::none(2);
        }
    } else if (name == "hopf_s3") {
        s.chart.dim_top = 1;
        s.chart.dim_bot = 2;
        s.chart.ranges = {{0.0, 0.5 * M_PI}, {0.0, 2.0 * M_PI}, {0.0, 2.0 * M_PI}};
        s.chart.periodic = {false, true, true};
        s.metric.components = diag_metric({"1", "sin(x1)^2", "cos(x1)^2"});
        // Fiber direction of the Hopf fibration.
        s.span_top.push_back({make_number(0.0), make_number(1.0), make_number(1.0)});
        s.span_bot.push_back(coord_vector(3, 0));
        s.span_bot.push_back({make_number(0.0), expr("cos(x1)^2"), expr("-sin(x1)^2")});
        s.contorsion = ContorsionSpec::none(3);
        s.closed = true;
        s.closed_certified = true;
    } else if (name == "skew_contorsion_t3") {
        double c = param_or(params, "c", 0.5);
        s.params["c"] = c;
        s.chart.dim_top = 2;
        s.chart.dim_bot = 1;
        all_periodic_2pi(s);
        s.metric.components = diag_metric({"1", "1", "1"});
        s.span_top.push_back(coord_vector(3, 0));
        s.span_top.push_back(coord_vector(3, 1));
        s.contorsion.trivial = false;
        s.contorsion.declared_class = ContorsionClass::MetricCompatible;
        s.contorsion.components.assign(
            3, std::vector<std::vector<ExprPtr>>(3, std::vector<ExprPtr>(3, make_number(0.0))));
        for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m)
                for (int n = 0; n < 3; ++n) {
                    int sign = levi_civita3(m, n, l);
                    if (sign == 1)
                        s.contorsion.components[l][m][n] = expr("c");
                    else if (sign == -1)
                        s.contorsion.components[l][m][n] = expr("-c");
                }
    } else if (name == "statistical_torus") {
        double c = param_or(params, "c", 0.3);
        s.params["c"] = c;
        s.chart.dim_top = 1;
        s.chart.dim_bot = 1;
        all_periodic_2pi(s);
        s.metric.components = diag_metric({"1", "1"});
        s.span_top.push_back(coord_vector(2, 0));
        s.contorsion.trivial = false;
        s.contorsion.lower_indices = true;
        s.contorsion.declared_class = ContorsionClass::Statistical;
        s.contorsion.components.assign(
            2, std::vector<std::vector<ExprPtr>>(2, std::vector<ExprPtr>(2, make_number(0.0))));
        // Fully symmetric cubic form with C_112 = c.
        s.contorsion.components[0][0][1] = expr("c");
        s.contorsion.components[0][1][0] = expr("c");
        s.contorsion.components[1][0][0] = expr("c");
    } else if (name == "lorentz_flat") {
        s.chart.dim_top = 1;
        s.chart.dim_bot = 1;
        all_periodic_2pi(s);
        s.metric.components = diag_metric({"-1", "1"});
        s.metric.signature_index = 1;
        s.span_top.push_back(coord_vector(2, 0));
        s.contorsion = ContorsionSpec::none(2);
    } else {
        throw SchemaError("unknown preset '" + name + "'");
    }

    verify_scenario(s);
    return s;
}

void verify_scenario(Scenario& s) {
    s.chart.validate();
    const int d = s.dim();

    if (static_cast<int>(s.metric.components.size()) != d)
        throw SchemaError("metric.components: expected " + std::to_string(d) + " rows");
    for (int i = 0; i < d; ++i)
        if (static_cast<int>(s.metric.components[i].size()) != d)
            throw SchemaError("metric.components[" + std::to_string(i) + "]: expected " +
                              std::to_string(d) + " entries");

    if (static_cast<int>(s.span_top.size()) != s.n_top())
        throw SchemaError("distribution_top: expected " + std::to_string(s.n_top()) +
                          " spanning vectors");
    if (!s.span_bot.empty() && static_cast<int>(s.span_bot.size()) != s.n_bot())
        throw SchemaError("distribution_bot: expected " + std::to_string(s.n_bot()) +
                          " spanning vectors");
    for (const auto& v : s.span_top)
        if (static_cast<int>(v.size()) != d)
            throw SchemaError("distribution_top: vectors need " + std::to_string(d) +
                              " components");
    for (const auto& v : s.span_bot)
        if (static_cast<int>(v.size()) != d)
            throw SchemaError("distribution_bot: vectors need " + std::to_string(d) +
                              " components");

    if (!s.contorsion.trivial) {
        if (static_cast<int>(s.contorsion.components.size()) != d)
            throw SchemaError("contorsion.components: expected rank " + std::to_string(d));
        for (const auto& plane : s.contorsion.components) {
            if (static_cast<int>(plane.size()) != d)
                throw SchemaError("contorsion.components: expected rank " + std::to_string(d));
            for (const auto& row : plane)
                if (static_cast<int>(row.size()) != d)
                    throw SchemaError("contorsion.components: expected rank " +
                                      std::to_string(d));
        }
    }

    bool all_periodic = true;
    for (bool p : s.chart.periodic) all_periodic = all_periodic && p;
    s.closed = all_periodic || s.closed_certified;

    const auto probes = s.probe_points();

    // Metric symmetry and signature.
    for (const auto& x : probes) {
        std::span<const double> xs(x.e.data(), static_cast<std::size_t>(d));
        Mat<double> g(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                g(i, j) = s.metric.components[i][j]->eval(xs, s.params);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                if (std::abs(g(i, j) - g(j, i)) > 1e-12)
                    throw SchemaError("metric.components: asymmetric pair (" +
                                      std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        auto ev = symmetric_eigenvalues(g);
        int neg = 0;
        for (int k = 0; k < d; ++k) {
            if (std::abs(ev[k]) < kDegeneracyFloor)
                throw SchemaError("metric degenerate at a probe point");
            if (ev[k] < 0.0) ++neg;
        }
        if (neg != s.metric.signature_index)
            throw SchemaError("signature_index " + std::to_string(s.metric.signature_index) +
                              " does not match metric (found " + std::to_string(neg) +
                              " negative eigenvalues)");
    }

    // Frame construction exercises distribution independence and
    // nondegeneracy; throws DegenerateDistributionError on failure.
    for (const auto& x : probes) adapted_frame_at(s, x);

    if (!s.contorsion.trivial) {
        ConnectionClassReport rep = classify_connection(s, probes);
        if (s.contorsion.declared_class == ContorsionClass::MetricCompatible &&
            rep.metric_compat_dev > 1e-8)
            throw MisdeclaredClassError(
                "declared metric_compatible but deviation = " +
                std::to_string(rep.metric_compat_dev));
        if (s.contorsion.declared_class == ContorsionClass::Statistical &&
            rep.statistical_dev > 1e-8)
            throw MisdeclaredClassError("declared statistical but deviation = " +
                                        std::to_string(rep.statistical_dev));
    }
}

namespace {

const json& require_field(const json& doc, const std::string& key, const std::string& path) {
    if (!doc.contains(key)) throw SchemaError("missing field '" + path + key + "'");
    return doc.at(key);
}

std::vector<std::vector<ExprPtr>> parse_vector_list(const json& arr, int d,
                                                    const std::string& path) {
    if (!arr.is_array()) throw SchemaError("field '" + path + "': expected array");
    std::vector<std::vector<ExprPtr>> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& row = arr[i];
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw SchemaError("field '" + path + "[" + std::to_string(i) + "]': expected " +
                              std::to_string(d) + " components");
        std::vector<ExprPtr> v;
        for (std::size_t j = 0; j < row.size(); ++j) {
            try {
                v.push_back(parse_expression(row[j].get<std::string>()));
            } catch (const ParseError& e) {
                throw SchemaError("field '" + path + "[" + std::to_string(i) + "][" +
                                  std::to_string(j) + "]': " + e.what());
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

Scenario load_scenario_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("scenario document is not valid JSON: ") + e.what());
    }

    Scenario s;
    s.name = require_field(doc, "name", "").get<std::string>();
    const json& dims = require_field(doc, "dims", "");
    s.chart.dim_top = require_field(dims, "top", "dims.").get<int>();
    s.chart.dim_bot = require_field(dims, "bot", "dims.").get<int>();
    const int d = s.chart.dim();

    if (doc.contains("params"))
        for (auto it = doc["params"].begin(); it != doc["params"].end(); ++it)
            s.params[it.key()] = it.value().get<double>();

    const json& chart = require_field(doc, "chart", "");
    const json& ranges = require_field(chart, "ranges", "chart.");
    if (static_cast<int>(ranges.size()) != d)
        throw SchemaError("field 'chart.ranges': expected " + std::to_string(d) + " pairs");
    for (const auto& r : ranges) {
        if (!r.is_array() || r.size() != 2)
            throw SchemaError("field 'chart.ranges': entries must be [lo, hi]");
        s.chart.ranges.emplace_back(r[0].get<double>(), r[1].get<double>());
    }
    const json& periodic = require_field(chart, "periodic", "chart.");
    if (static_cast<int>(periodic.size()) != d)
        throw SchemaError("field 'chart.periodic': expected " + std::to_string(d) + " flags");
    for (const auto& p : periodic) s.chart.periodic.push_back(p.get<bool>());

    s.metric.signature_index = doc.value("signature_index", 0);
    const json& metric = require_field(doc, "metric", "");
    if (metric.contains("preset")) {
        Scenario base = build_preset(metric["preset"].get<std::string>(), s.params);
        if (base.dim() != d)
            throw SchemaError("field 'metric.preset': preset dimension mismatch");
        s.metric.components = base.metric.components;
    } else {
        const json& comps = require_field(metric, "components", "metric.");
        auto rows = parse_vector_list(comps, d, "metric.components");
        if (static_cast<int>(rows.size()) != d)
            throw SchemaError("field 'metric.components': expected " + std::to_string(d) +
                              " rows");
        s.metric.components = std::move(rows);
    }

    s.span_top = parse_vector_list(require_field(doc, "distribution_top", ""), d,
                                   "distribution_top");
    if (doc.contains("distribution_bot"))
        s.span_bot = parse_vector_list(doc["distribution_bot"], d, "distribution_bot");

    const json& cont = require_field(doc, "contorsion", "");
    if (cont.is_string() && cont.get<std::string>() == "none") {
        s.contorsion = ContorsionSpec::none(d);
    } else if (cont.is_object() && cont.contains("preset")) {
        Scenario base = build_preset(cont["preset"].get<std::string>(), s.params);
        if (base.dim() != d)
            throw SchemaError("field 'contorsion.preset': preset dimension mismatch");
        s.contorsion = base.contorsion;
    } else if (cont.is_object() && cont.contains("components")) {
        s.contorsion.trivial = false;
        s.contorsion.lower_indices = cont.value("lower_indices", false);
        std::string cls = cont.value("class", "general");
        if (cls == "metric_compatible")
            s.contorsion.declared_class = ContorsionClass::MetricCompatible;
        else if (cls == "statistical")
            s.contorsion.declared_class = ContorsionClass::Statistical;
        else if (cls != "general")
            throw SchemaError("field 'contorsion.class': unknown class '" + cls + "'");
        const json& comps = cont["components"];
        if (static_cast<int>(comps.size()) != d)
            throw SchemaError("field 'contorsion.components': expected " + std::to_string(d) +
                              " planes");
        for (int l = 0; l < d; ++l)
            s.contorsion.components.push_back(
                parse_vector_list(comps[l], d, "contorsion.components[" + std::to_string(l) + "]"));
    } else {
        throw SchemaError("field 'contorsion': expected \"none\", {preset}, or {components}");
    }

    verify_scenario(s);
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario_json(buf.str());
}

}  // namespace mixedcurv
