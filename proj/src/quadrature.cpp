#include "mixedcurv/quadrature.hpp"

#include <cmath>

namespace mixedcurv {

namespace {

// Gauss-Legendre nodes on (-1,1) by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

Axis build_axis(double lo, double hi, bool periodic, int resolution) {
    if (resolution < 4) throw QuadratureError("grid resolution must be at least 4 per axis");
    Axis axis;
    const double len = hi - lo;
    if (periodic) {
        double h = len / resolution;
        for (int k = 0; k < resolution; ++k) {
            axis.nodes.push_back(lo + (k + 0.5) * h);
            axis.weights.push_back(h);
        }
    } else {
        std::vector<double> x, w;
        gauss_legendre(resolution, x, w);
        for (int k = 0; k < resolution; ++k) {
            axis.nodes.push_back(lo + 0.5 * len * (x[k] + 1.0));
            axis.weights.push_back(0.5 * len * w[k]);
        }
    }
    return axis;
}

QuadratureGrid build_grid(const Chart& chart, int resolution) {
    const int d = chart.dim();
    std::vector<Axis> axes;
    for (int k = 0; k < d; ++k)
        axes.push_back(build_axis(chart.ranges[k].first, chart.ranges[k].second,
                                  chart.periodic[k], resolution));
    QuadratureGrid grid;
    grid.resolution = resolution;
    std::vector<int> idx(d, 0);
    for (;;) {
        Vec<double> x(d);
        double w = 1.0;
        for (int k = 0; k < d; ++k) {
            x[k] = axes[k].nodes[idx[k]];
            w *= axes[k].weights[idx[k]];
        }
        grid.nodes.push_back(x);
        grid.weights.push_back(w);
        int k = d - 1;
        while (k >= 0 && ++idx[k] == static_cast<int>(axes[k].nodes.size())) {
            idx[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return grid;
}

double integrate(const Scenario& sc, const ScalarField& f, const QuadratureGrid& grid) {
    std::vector<double> terms(grid.nodes.size());
    for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
        const Vec<double>& x = grid.nodes[k];
        double det;
        try {
            det = determinant(metric_at(sc, x));
        } catch (const std::exception& e) {
            throw QuadratureError("metric evaluation failed at node " + std::to_string(k) +
                                  ": " + e.what());
        }
        double fx;
        try {
            fx = f(x);
        } catch (const std::exception& e) {
            throw QuadratureError("integrand evaluation failed at node " + std::to_string(k) +
                                  ": " + e.what());
        }
        terms[k] = grid.weights[k] * fx * std::sqrt(std::abs(det));
    }
    return pairwise_sum(terms.data(), terms.size());
}

void require_slice_structure(const Scenario& sc) {
    const int d = sc.dim(), n = sc.n_top();
    // D^top must be the span of the first n coordinate directions (up to
    // pointwise scaling) and the metric block-diagonal.
    for (const auto& comps : sc.span_top)
        for (int k = n; k < d; ++k) {
            ExprPtr c = comps[k];
            if (c->kind == ExprKind::Number && c->number == 0.0) continue;
            throw UnsupportedLeafError(
                "leaf integration requires D^top spanned by the first coordinate directions");
        }
    for (const auto& x : sc.probe_points()) {
        Mat<double> g = metric_at(sc, x);
        for (int a = 0; a < n; ++a)
            for (int i = n; i < d; ++i)
                if (std::abs(g(a, i)) > 1e-10)
                    throw UnsupportedLeafError(
                        "leaf integration requires a block-diagonal metric");
    }
}

double leaf_integrate(const Scenario& sc, const ScalarField& f, FrameSlice which,
                      const Vec<double>& fixed, int resolution) {
    require_slice_structure(sc);
    const int d = sc.dim(), n = sc.n_top();
    const int lo_ax = which == FrameSlice::Top ? 0 : n;
    const int hi_ax = which == FrameSlice::Top ? n : d;
    std::vector<Axis> axes;
    for (int k = lo_ax; k < hi_ax; ++k)
        axes.push_back(build_axis(sc.chart.ranges[k].first, sc.chart.ranges[k].second,
                                  sc.chart.periodic[k], resolution));
    const int m = hi_ax - lo_ax;
    std::vector<int> idx(m, 0);
    std::vector<double> terms;
    for (;;) {
        Vec<double> x(d);
        for (int k = 0; k < d; ++k) x[k] = fixed[k];
        double w = 1.0;
        for (int k = 0; k < m; ++k) {
            x[lo_ax + k] = axes[k].nodes[idx[k]];
            w *= axes[k].weights[idx[k]];
        }
        Mat<double> g = metric_at(sc, x);
        Mat<double> block(m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) block(a, b) = g(lo_ax + a, lo_ax + b);
        terms.push_back(w * f(x) * std::sqrt(std::abs(determinant(block))));
        int k = m - 1;
        while (k >= 0 && ++idx[k] == static_cast<int>(axes[k].nodes.size())) {
            idx[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return pairwise_sum(terms.data(), terms.size());
}

}  // namespace mixedcurv
