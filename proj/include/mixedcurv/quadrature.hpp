#pragma once

// Quadrature over closed charts and coordinate-slice leaves. Periodic axes
// use midpoint rules (spectrally accurate for smooth periodic integrands,
// and the half-step offset avoids coordinate degeneracy lines); the
// remaining axes use Gauss-Legendre.

#include <functional>

#include "mixedcurv/geometry.hpp"

namespace mixedcurv {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedLeafError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Axis {
    std::vector<double> nodes;
    std::vector<double> weights;
};

struct QuadratureGrid {
    std::vector<Vec<double>> nodes;
    std::vector<double> weights;  // chart weights, volume form applied later
    int resolution = 0;
};

Axis build_axis(double lo, double hi, bool periodic, int resolution);
QuadratureGrid build_grid(const Chart& chart, int resolution);

using ScalarField = std::function<double(const Vec<double>&)>;

// sum_k w_k f(x_k) sqrt|det g(x_k)| with deterministic pairwise reduction.
double integrate(const Scenario& sc, const ScalarField& f, const QuadratureGrid& grid);

// Integral over the leaf {which-coordinates vary, the rest fixed}; the
// induced volume form is the corresponding metric block. Requires the
// distribution to be spanned by those coordinate directions with the
// metric block-diagonal (checked numerically).
double leaf_integrate(const Scenario& sc, const ScalarField& f, FrameSlice which,
                      const Vec<double>& fixed, int resolution);

// Throws UnsupportedLeafError unless D^top/D^bot are coordinate-aligned
// and the metric has no mixed block at the probe points.
void require_slice_structure(const Scenario& sc);

}  // namespace mixedcurv
