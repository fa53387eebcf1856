#pragma once

// Scenario: a closed charted manifold with metric, an orthogonal
// distribution pair, and an optional contorsion field. Immutable after
// construction; all geometric evaluation consumes it read-only.

#include <optional>
#include <string>
#include <vector>

#include "mixedcurv/expression.hpp"
#include "mixedcurv/linalg.hpp"

namespace mixedcurv {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MisdeclaredClassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateDistributionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Chart {
    int dim_top = 0;  // n
    int dim_bot = 0;  // p
    std::vector<std::pair<double, double>> ranges;
    std::vector<bool> periodic;

    int dim() const { return dim_top + dim_bot; }
    void validate() const;
};

struct MetricField {
    std::vector<std::vector<ExprPtr>> components;  // d x d, symmetric as expressions
    int signature_index = 0;                       // q
};

enum class ContorsionClass { General, MetricCompatible, Statistical };

struct ContorsionSpec {
    // components[l][m][n] = (T_{e_m} e_n)^l when mixed, or the all-lower
    // T_{lmn} = g(T_{e_m} e_n, e_l) when lower_indices is set.
    std::vector<std::vector<std::vector<ExprPtr>>> components;
    bool lower_indices = false;
    ContorsionClass declared_class = ContorsionClass::General;
    bool trivial = true;  // identically zero

    static ContorsionSpec none(int d);
};

struct Scenario {
    std::string name;
    Chart chart;
    MetricField metric;
    std::vector<std::vector<ExprPtr>> span_top;  // n vectors, d components each
    std::vector<std::vector<ExprPtr>> span_bot;  // p vectors (may be completed)
    ContorsionSpec contorsion;
    ParamMap params;
    bool closed = false;           // all-periodic chart or preset-certified
    bool closed_certified = false; // set by presets whose chart is not all-periodic
    bool twisted_preset = false;   // doubly-twisted structure with warpings below
    ExprPtr warp_u, warp_v;        // set for warped/doubly-twisted presets

    int dim() const { return chart.dim(); }
    int n_top() const { return chart.dim_top; }
    int n_bot() const { return chart.dim_bot; }

    // Deterministic verification probe set: 3^d lattice plus 10
    // pseudo-random interior points (seed 0x5EED).
    std::vector<Vec<double>> probe_points() const;

    std::string canonical_json() const;  // stable serialization (also hashed)
    std::uint64_t descriptor_hash() const;
};

// Construction entry points. Both verify declared flags (distribution
// independence, metric symmetry/signature, contorsion class) on the probe
// set and throw on violation.
Scenario build_preset(const std::string& name, const ParamMap& params = {},
                      const std::map<std::string, std::string>& expr_overrides = {});
Scenario load_scenario_json(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

std::vector<std::string> preset_names();

// Shared validation used by both construction paths.
void verify_scenario(Scenario& s);

}  // namespace mixedcurv
