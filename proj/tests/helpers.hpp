#pragma once

// Shared fixtures for the test suites: a deterministic RNG, random chart
// points, finite-difference reference operators and a few ad-hoc scenarios
// that exercise features the presets do not cover (non-integrable D^top in
// four dimensions, general contorsion with p = 1).

#include <cstdint>
#include <string>

#include "mixedcurv/splitting.hpp"

namespace testutil {

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline mixedcurv::Vec<double> random_point(const mixedcurv::Scenario& sc, SplitMix64& rng,
                                           double margin = 0.05) {
    mixedcurv::Vec<double> x(sc.dim());
    for (int k = 0; k < sc.dim(); ++k) {
        auto [lo, hi] = sc.chart.ranges[static_cast<std::size_t>(k)];
        double pad = margin * (hi - lo);
        x[k] = rng.uniform(lo + pad, hi - pad);
    }
    return x;
}

// Richardson-extrapolated central difference of a scalar function.
template <class F>
double fd_partial(F&& f, mixedcurv::Vec<double> x, int k, double h = 1e-3) {
    auto central = [&](double hh) {
        mixedcurv::Vec<double> xp = x, xm = x;
        xp[k] += hh;
        xm[k] -= hh;
        return (f(xp) - f(xm)) / (2.0 * hh);
    };
    double d1 = central(h), d2 = central(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

// Four-torus with a non-integrable D^top and a generic diagonal metric;
// exercises T^top-coupled terms that vanish on every 2D preset.
inline const char* kTorus4Json = R"({
  "name": "test-t4",
  "dims": {"top": 2, "bot": 2},
  "chart": {
    "ranges": [[0,6.283185307179586],[0,6.283185307179586],[0,6.283185307179586],[0,6.283185307179586]],
    "periodic": [true,true,true,true]
  },
  "metric": {"components": [
    ["1+sin(x2+x4)/5","0","0","0"],
    ["0","1+cos(x1+x3)/5","0","0"],
    ["0","0","1+sin(x1+x4)/5","0"],
    ["0","0","0","1+cos(x2+x3)/5"]
  ]},
  "distribution_top": [["1","0","0","0"],["0","1","0","sin(x1+x3)/4"]],
  "contorsion": "none"
})";

// Same chart and distributions with a general (neither metric-compatible
// nor statistical) contorsion.
inline const char* kTorus4ContorsionJson = R"({
  "name": "test-t4c",
  "dims": {"top": 2, "bot": 2},
  "chart": {
    "ranges": [[0,6.283185307179586],[0,6.283185307179586],[0,6.283185307179586],[0,6.283185307179586]],
    "periodic": [true,true,true,true]
  },
  "metric": {"components": [
    ["1+sin(x2+x4)/5","0","0","0"],
    ["0","1+cos(x1+x3)/5","0","0"],
    ["0","0","1+sin(x1+x4)/5","0"],
    ["0","0","0","1+cos(x2+x3)/5"]
  ]},
  "distribution_top": [["1","0","0","0"],["0","1","0","sin(x1+x3)/4"]],
  "contorsion": {"components": [
    [["0","sin(x3)/5","0","0"],["0","0","0","cos(x4)/6"],["0","0","1/7","0"],["0","0","0","0"]],
    [["0","0","0","0"],["sin(x1+x2)/5","0","0","0"],["0","0","0","0"],["0","1/9","0","0"]],
    [["0","0","0","cos(x2)/4"],["0","0","0","0"],["0","sin(x4)/6","0","0"],["0","0","0","0"]],
    [["0","0","0","0"],["0","0","cos(x1+x4)/5","0"],["0","0","0","0"],["sin(x2)/7","0","0","0"]]
  ]}
})";

// Two-torus, codimension one, fully general contorsion with every
// component populated.
inline const char* kTorus2ContorsionJson = R"({
  "name": "test-t2c",
  "dims": {"top": 1, "bot": 1},
  "chart": {
    "ranges": [[0,6.283185307179586],[0,6.283185307179586]],
    "periodic": [true,true]
  },
  "metric": {"components": [
    ["(2+cos(x1-x2)/2)^2","0"],
    ["0","(2+sin(x1+x2)/2)^2"]
  ]},
  "distribution_top": [["1","0"]],
  "contorsion": {"components": [
    [["sin(x2)/4","cos(x1)/5"],["1/6","sin(x1+x2)/5"]],
    [["cos(x2)/7","1/8"],["sin(x1)/5","cos(x1+x2)/4"]]
  ]}
})";

// Same plane field as kTorus4Json but spanned by rotated generators;
// geometric outputs must not depend on the choice of spanning frame.
inline const char* kTorus4RotatedJson = R"({
  "name": "test-t4-rot",
  "dims": {"top": 2, "bot": 2},
  "chart": {
    "ranges": [[0,6.283185307179586],[0,6.283185307179586],[0,6.283185307179586],[0,6.283185307179586]],
    "periodic": [true,true,true,true]
  },
  "metric": {"components": [
    ["1+sin(x2+x4)/5","0","0","0"],
    ["0","1+cos(x1+x3)/5","0","0"],
    ["0","0","1+sin(x1+x4)/5","0"],
    ["0","0","0","1+cos(x2+x3)/5"]
  ]},
  "distribution_top": [["1","1","0","sin(x1+x3)/4"],["1","-1","0","-sin(x1+x3)/4"]],
  "contorsion": "none"
})";

inline mixedcurv::Scenario torus4() { return mixedcurv::load_scenario_json(kTorus4Json); }
inline mixedcurv::Scenario torus4_rotated() {
    return mixedcurv::load_scenario_json(kTorus4RotatedJson);
}
inline mixedcurv::Scenario torus4_contorsion() {
    return mixedcurv::load_scenario_json(kTorus4ContorsionJson);
}
inline mixedcurv::Scenario torus2_contorsion() {
    return mixedcurv::load_scenario_json(kTorus2ContorsionJson);
}

}  // namespace testutil
