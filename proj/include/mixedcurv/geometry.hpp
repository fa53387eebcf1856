#pragma once

// Carrier-generic evaluation of the Levi-Civita machinery at a point:
// metric, Christoffel symbols and their derivatives, curvature, adapted
// orthonormal frames and divergences. Instantiating the carrier S with
// Jet<double> turns every output into (value, first coordinate
// derivatives), which is how downstream divergence computations obtain
// exact derivatives of derived fields.

#include "mixedcurv/scenario.hpp"

namespace mixedcurv {

inline constexpr double kDegeneracyFloor = 1e-10;

template <class S>
Vec<Jet<S>> promote_point(const Vec<S>& x) {
    Vec<Jet<S>> xp(x.n);
    for (int k = 0; k < x.n; ++k) xp[k] = Jet<S>::variable(x[k], k, x.n);
    return xp;
}

template <class S>
Vec<S> point_value(const Vec<Jet<S>>& xp) {
    Vec<S> x(xp.n);
    for (int k = 0; k < xp.n; ++k) x[k] = xp[k].v;
    return x;
}

template <class S>
Mat<S> metric_at(const Scenario& sc, const Vec<S>& x) {
    const int d = sc.dim();
    Mat<S> g(d);
    std::span<const S> xs(x.e.data(), static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            g(i, j) = sc.metric.components[i][j]->eval(xs, sc.params);
            g(j, i) = g(i, j);
        }
    return g;
}

template <class S>
struct MetricJet {
    Mat<S> g;
    Mat<S> ginv;
    Ten3<S> dg;  // dg(i,j,k) = d_k g_ij
};

template <class S>
MetricJet<S> metric_jet_at(const Scenario& sc, const Vec<S>& x) {
    const int d = sc.dim();
    Mat<Jet<S>> gj = metric_at(sc, promote_point(x));
    MetricJet<S> out;
    out.g = Mat<S>(d);
    out.dg = Ten3<S>(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            out.g(i, j) = gj(i, j).v;
            for (int k = 0; k < d; ++k) out.dg(i, j, k) = gj(i, j).d[k];
        }
    out.ginv = inverse(out.g);
    return out;
}

// Gamma^l_{mn} = (1/2) g^{ls} (d_m g_ns + d_n g_ms - d_s g_mn)
template <class S>
Ten3<S> christoffel_at(const Scenario& sc, const Vec<S>& x) {
    const int d = sc.dim();
    MetricJet<S> mj = metric_jet_at(sc, x);
    Ten3<S> gamma(d);
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
            for (int n = m; n < d; ++n) {
                S sum(0.0);
                for (int s = 0; s < d; ++s)
                    sum += mj.ginv(l, s) *
                           (mj.dg(n, s, m) + mj.dg(m, s, n) - mj.dg(m, n, s));
                gamma(l, m, n) = S(0.5) * sum;
                gamma(l, n, m) = gamma(l, m, n);
            }
    return gamma;
}

template <class S>
struct ConnectionJet {
    Ten3<S> gamma;
    Ten4<S> dgamma;  // dgamma(l,m,n,r) = d_r Gamma^l_{mn}
};

template <class S>
ConnectionJet<S> christoffel_jet_at(const Scenario& sc, const Vec<S>& x) {
    const int d = sc.dim();
    Ten3<Jet<S>> gj = christoffel_at(sc, promote_point(x));
    ConnectionJet<S> out;
    out.gamma = Ten3<S>(d);
    out.dgamma = Ten4<S>(d);
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                out.gamma(l, m, n) = gj(l, m, n).v;
                for (int r = 0; r < d; ++r) out.dgamma(l, m, n, r) = gj(l, m, n).d[r];
            }
    return out;
}

// Components of R_{e_m, e_n} e_s with the convention
// R_{X,Y} = [nabla_Y, nabla_X] + nabla_{[X,Y]}:
//   R(l,s,m,n) = d_n Gamma^l_{ms} - d_m Gamma^l_{ns}
//              + Gamma^l_{nr} Gamma^r_{ms} - Gamma^l_{mr} Gamma^r_{ns}.
// Works for any coefficient field (Levi-Civita or Levi-Civita + contorsion).
template <class S>
Ten4<S> curvature_from_coefficients(const Ten3<S>& gamma, const Ten4<S>& dgamma) {
    const int d = gamma.n;
    Ten4<S> R(d);
    for (int l = 0; l < d; ++l)
        for (int s = 0; s < d; ++s)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    S sum = dgamma(l, m, s, n) - dgamma(l, n, s, m);
                    for (int r = 0; r < d; ++r)
                        sum += gamma(l, n, r) * gamma(r, m, s) -
                               gamma(l, m, r) * gamma(r, n, s);
                    R(l, s, m, n) = sum;
                }
    return R;
}

template <class S>
Ten4<S> riemann_at(const Scenario& sc, const Vec<S>& x) {
    ConnectionJet<S> cj = christoffel_jet_at(sc, x);
    return curvature_from_coefficients(cj.gamma, cj.dgamma);
}

// Component l of R_{X,Y} Z.
template <class S>
Vec<S> apply_curvature(const Ten4<S>& R, const Vec<S>& X, const Vec<S>& Y, const Vec<S>& Z) {
    const int d = R.n;
    Vec<S> out(d);
    for (int l = 0; l < d; ++l) {
        S sum(0.0);
        for (int s = 0; s < d; ++s)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) sum += R(l, s, m, n) * Z[s] * X[m] * Y[n];
        out[l] = sum;
    }
    return out;
}

// Adapted orthonormal frame {E_a} in D^top followed by {E_i} in D^bot,
// with signs eps = g(E,E) = +-1. Built by modified Gram-Schmidt in input
// order; candidates for an unspecified D^bot come from the coordinate
// basis.
template <class S>
struct AdaptedFrame {
    int d = 0, n_top = 0, n_bot = 0;
    std::array<Vec<S>, kMaxDim> E;
    std::array<int, kMaxDim> eps{};
    Mat<S> g;
    Mat<S> ginv;

    const Vec<S>& top(int a) const { return E[a]; }
    const Vec<S>& bot(int i) const { return E[n_top + i]; }
    int eps_top(int a) const { return eps[a]; }
    int eps_bot(int i) const { return eps[n_top + i]; }

    S inner(const Vec<S>& u, const Vec<S>& v) const { return dot(g, u, v); }

    Vec<S> project_top(const Vec<S>& v) const {
        Vec<S> out(d);
        for (int a = 0; a < n_top; ++a) {
            S c = S(double(eps[a])) * inner(v, E[a]);
            for (int k = 0; k < d; ++k) out[k] += c * E[a][k];
        }
        return out;
    }
    Vec<S> project_bot(const Vec<S>& v) const {
        Vec<S> out(d);
        for (int i = 0; i < n_bot; ++i) {
            S c = S(double(eps[n_top + i])) * inner(v, E[n_top + i]);
            for (int k = 0; k < d; ++k) out[k] += c * E[n_top + i][k];
        }
        return out;
    }
};

namespace detail {

template <class S>
Vec<S> eval_vector(const std::vector<ExprPtr>& comps, const Vec<S>& x,
                   const ParamMap& params) {
    Vec<S> v(x.n);
    std::span<const S> xs(x.e.data(), static_cast<std::size_t>(x.n));
    for (int k = 0; k < x.n; ++k) v[k] = comps[k]->eval(xs, params);
    return v;
}

// Orthonormalize `cand` against the vectors already in `frame`; returns
// false when the candidate is (numerically) dependent or null.
template <class S>
bool gram_schmidt_step(AdaptedFrame<S>& frame, Vec<S> cand, int filled) {
    const int d = frame.d;
    // Normalize the input so the degeneracy floor is scale-free.
    double norm2 = 0.0;
    for (int k = 0; k < d; ++k) {
        double c = scalar_value(cand[k]);
        norm2 += c * c;
    }
    if (norm2 < 1e-300) return false;
    S inv(1.0 / std::sqrt(norm2));
    for (int k = 0; k < d; ++k) cand[k] = inv * cand[k];

    for (int j = 0; j < filled; ++j) {
        S c = S(double(frame.eps[j])) * frame.inner(cand, frame.E[j]);
        for (int k = 0; k < d; ++k) cand[k] -= c * frame.E[j][k];
    }
    S q = frame.inner(cand, cand);
    double qv = scalar_value(q);
    if (std::abs(qv) < kDegeneracyFloor) return false;
    int sign = qv > 0.0 ? 1 : -1;
    S scale = S(1.0) / sqrt(S(double(sign)) * q);
    for (int k = 0; k < d; ++k) cand[k] = scale * cand[k];
    frame.E[filled] = cand;
    frame.eps[filled] = sign;
    return true;
}

}  // namespace detail

template <class S>
AdaptedFrame<S> adapted_frame_at(const Scenario& sc, const Vec<S>& x) {
    const int d = sc.dim();
    AdaptedFrame<S> frame;
    frame.d = d;
    frame.n_top = sc.n_top();
    frame.n_bot = sc.n_bot();
    frame.g = metric_at(sc, x);
    frame.ginv = inverse(frame.g);
    for (int k = 0; k < d; ++k) frame.E[k] = Vec<S>(d);

    int filled = 0;
    for (const auto& comps : sc.span_top) {
        if (!detail::gram_schmidt_step(frame, detail::eval_vector(comps, x, sc.params), filled))
            throw DegenerateDistributionError(
                "distribution D^top degenerate or dependent at sample point");
        ++filled;
    }
    if (!sc.span_bot.empty()) {
        for (const auto& comps : sc.span_bot) {
            if (!detail::gram_schmidt_step(frame, detail::eval_vector(comps, x, sc.params), filled))
                throw DegenerateDistributionError(
                    "distribution D^bot degenerate or dependent at sample point");
            ++filled;
        }
    } else {
        for (int k = 0; k < d && filled < d; ++k) {
            Vec<S> cand(d);
            cand[k] = S(1.0);
            if (detail::gram_schmidt_step(frame, cand, filled)) ++filled;
        }
        if (filled != d)
            throw DegenerateDistributionError(
                "could not complete D^bot from the coordinate basis");
    }
    return frame;
}

// (nabla_dir F)^l from field components carrying coordinate derivatives.
template <class S>
Vec<S> covariant_derivative_jet(const Ten3<S>& gamma, const Vec<Jet<S>>& field,
                                const Vec<S>& dir) {
    const int d = gamma.n;
    Vec<S> out(d);
    for (int l = 0; l < d; ++l) {
        S sum(0.0);
        for (int m = 0; m < d; ++m) {
            S t = field[l].d[m];
            for (int nn = 0; nn < d; ++nn) t += gamma(l, m, nn) * field[nn].v;
            sum += dir[m] * t;
        }
        out[l] = sum;
    }
    return out;
}

// Full divergence via the coordinate formula
//   div xi = sum_m d_m xi^m + xi^m d_m log sqrt|det g|.
// `field` must carry first derivatives (Jet carrier in the last level).
template <class S>
S divergence_from_jet(const Scenario& sc, const Vec<S>& x, const Vec<Jet<S>>& field) {
    const int d = sc.dim();
    Mat<Jet<S>> gj = metric_at(sc, promote_point(x));
    Jet<S> det = determinant(gj);
    Jet<S> logv = Jet<S>(0.5) * log(abs(det));
    S div(0.0);
    for (int m = 0; m < d; ++m) div += field[m].d[m] + field[m].v * logv.d[m];
    return div;
}

// Generic divergence of a derived vector field. F is invoked with the
// point promoted to jets and must run its whole computation on that
// carrier, returning coordinate components.
template <class F>
double divergence_of_field(const Scenario& sc, F&& fieldfn, const Vec<double>& x) {
    Vec<Jet<double>> comps = fieldfn(sc, promote_point(x));
    return divergence_from_jet(sc, x, comps);
}

enum class FrameSlice { Top, Bot };

// div^top xi = sum_a eps_a g(nabla_{E_a} xi, E_a), and the D^bot analogue.
template <class F>
double frame_divergence_of_field(const Scenario& sc, F&& fieldfn, const Vec<double>& x,
                                 FrameSlice which) {
    Vec<Jet<double>> comps = fieldfn(sc, promote_point(x));
    AdaptedFrame<double> frame = adapted_frame_at(sc, x);
    Ten3<double> gamma = christoffel_at(sc, x);
    double sum = 0.0;
    const int cnt = which == FrameSlice::Top ? frame.n_top : frame.n_bot;
    for (int k = 0; k < cnt; ++k) {
        const Vec<double>& e =
            which == FrameSlice::Top ? frame.top(k) : frame.bot(k);
        int eps = which == FrameSlice::Top ? frame.eps_top(k) : frame.eps_bot(k);
        Vec<double> nab = covariant_derivative_jet(gamma, comps, e);
        sum += eps * frame.inner(nab, e);
    }
    return sum;
}

// ---- chart-core public operations on expression-defined fields ----

Ten3<double> christoffel(const Scenario& sc, const Vec<double>& x);
Ten4<double> riemann(const Scenario& sc, const Vec<double>& x);

struct FramePacket {
    Vec<double> point;
    std::vector<Vec<double>> E;      // n vectors in D^top
    std::vector<int> eps_top;
    std::vector<Vec<double>> cal_E;  // p vectors in D^bot
    std::vector<int> eps_bot;
    Ten3<double> gamma;
    Ten4<double> dgamma;
};

FramePacket frame_packet(const Scenario& sc, const Vec<double>& x);

Vec<double> covariant_derivative(const Scenario& sc, const std::vector<ExprPtr>& field,
                                 const Vec<double>& dir, const Vec<double>& x);

double divergence(const Scenario& sc, const std::vector<ExprPtr>& field, const Vec<double>& x);
double frame_divergence(const Scenario& sc, const std::vector<ExprPtr>& field,
                        const Vec<double>& x, FrameSlice which);

}  // namespace mixedcurv
