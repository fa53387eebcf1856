#pragma once

// Extrinsic geometry of the distribution pair: second fundamental forms,
// integrability tensors, mean curvature vectors, Weingarten / sharp
// operators, and distribution classification. Everything is computed in
// the adapted frame so that the sign factors eps enter exactly as in the
// defining trace sums.

#include "mixedcurv/geometry.hpp"

namespace mixedcurv {

template <class S>
struct ExtrinsicData {
    AdaptedFrame<S> frame;
    Ten3<S> gamma;

    // Coordinate components of h(E_a,E_b), T(E_a,E_b) for the top
    // distribution (values lie in D^bot) and vice versa.
    std::array<std::array<Vec<S>, kMaxDim>, kMaxDim> h_top, T_top, h_bot, T_bot;
    // nabla_{E_k} E_l over the full frame (top block first), kept for
    // formulas that need frame-field derivatives.
    std::array<std::array<Vec<S>, kMaxDim>, kMaxDim> nabla;
    Vec<S> H_top, H_bot;

    int n_top() const { return frame.n_top; }
    int n_bot() const { return frame.n_bot; }

    S inner(const Vec<S>& u, const Vec<S>& v) const { return frame.inner(u, v); }

    // <h,h> and <T,T> with each tensor summed over its own domain frame.
    S inner_hh_top() const { return tensor_self_inner(h_top, frame.n_top, 0); }
    S inner_hh_bot() const { return tensor_self_inner(h_bot, frame.n_bot, frame.n_top); }
    S inner_TT_top() const { return tensor_self_inner(T_top, frame.n_top, 0); }
    S inner_TT_bot() const { return tensor_self_inner(T_bot, frame.n_bot, frame.n_top); }
    S norm2_H_top() const { return inner(H_top, H_top); }
    S norm2_H_bot() const { return inner(H_bot, H_bot); }

    // A^top_Z E_b = sum_a eps_a g(h^top(E_b,E_a), Z) E_a  (lives in D^top).
    Vec<S> weingarten_top(const Vec<S>& Z, int b) const {
        return op_apply(h_top, Z, b, /*top=*/true);
    }
    Vec<S> weingarten_bot(const Vec<S>& Z, int j) const {
        return op_apply(h_bot, Z, j, /*top=*/false);
    }
    Vec<S> sharp_top(const Vec<S>& Z, int b) const {
        return op_apply(T_top, Z, b, /*top=*/true);
    }
    Vec<S> sharp_bot(const Vec<S>& Z, int j) const {
        return op_apply(T_bot, Z, j, /*top=*/false);
    }

    // Weingarten applied to an arbitrary vector (projected to the domain
    // frame first).
    Vec<S> weingarten_top_v(const Vec<S>& Z, const Vec<S>& X) const {
        return op_apply_v(h_top, Z, X, /*top=*/true);
    }
    Vec<S> weingarten_bot_v(const Vec<S>& Z, const Vec<S>& X) const {
        return op_apply_v(h_bot, Z, X, /*top=*/false);
    }
    Vec<S> sharp_top_v(const Vec<S>& Z, const Vec<S>& X) const {
        return op_apply_v(T_top, Z, X, /*top=*/true);
    }
    Vec<S> sharp_bot_v(const Vec<S>& Z, const Vec<S>& X) const {
        return op_apply_v(T_bot, Z, X, /*top=*/false);
    }

    // h evaluated on arbitrary vectors through frame decomposition.
    Vec<S> h_top_v(const Vec<S>& X, const Vec<S>& Y) const {
        return bilinear_v(h_top, X, Y, /*top=*/true);
    }
    Vec<S> h_bot_v(const Vec<S>& X, const Vec<S>& Y) const {
        return bilinear_v(h_bot, X, Y, /*top=*/false);
    }
    Vec<S> T_top_v(const Vec<S>& X, const Vec<S>& Y) const {
        return bilinear_v(T_top, X, Y, /*top=*/true);
    }
    Vec<S> T_bot_v(const Vec<S>& X, const Vec<S>& Y) const {
        return bilinear_v(T_bot, X, Y, /*top=*/false);
    }

  private:
    S tensor_self_inner(const std::array<std::array<Vec<S>, kMaxDim>, kMaxDim>& t,
                        int count, int offset) const {
        S sum(0.0);
        for (int a = 0; a < count; ++a)
            for (int b = 0; b < count; ++b) {
                double w = frame.eps[offset + a] * frame.eps[offset + b];
                sum += S(w) * inner(t[a][b], t[a][b]);
            }
        return sum;
    }

    Vec<S> op_apply(const std::array<std::array<Vec<S>, kMaxDim>, kMaxDim>& t,
                    const Vec<S>& Z, int arg, bool top) const {
        const int d = frame.d;
        const int count = top ? frame.n_top : frame.n_bot;
        const int offset = top ? 0 : frame.n_top;
        Vec<S> out(d);
        for (int a = 0; a < count; ++a) {
            S c = S(double(frame.eps[offset + a])) * inner(t[arg][a], Z);
            for (int k = 0; k < d; ++k) out[k] += c * frame.E[offset + a][k];
        }
        return out;
    }

    Vec<S> op_apply_v(const std::array<std::array<Vec<S>, kMaxDim>, kMaxDim>& t,
                      const Vec<S>& Z, const Vec<S>& X, bool top) const {
        const int d = frame.d;
        const int count = top ? frame.n_top : frame.n_bot;
        const int offset = top ? 0 : frame.n_top;
        Vec<S> out(d);
        for (int b = 0; b < count; ++b) {
            S xb = S(double(frame.eps[offset + b])) * inner(X, frame.E[offset + b]);
            Vec<S> col = op_apply(t, Z, b, top);
            for (int k = 0; k < d; ++k) out[k] += xb * col[k];
        }
        return out;
    }

    Vec<S> bilinear_v(const std::array<std::array<Vec<S>, kMaxDim>, kMaxDim>& t,
                      const Vec<S>& X, const Vec<S>& Y, bool top) const {
        const int d = frame.d;
        const int count = top ? frame.n_top : frame.n_bot;
        const int offset = top ? 0 : frame.n_top;
        Vec<S> out(d);
        for (int a = 0; a < count; ++a) {
            S xa = S(double(frame.eps[offset + a])) * inner(X, frame.E[offset + a]);
            for (int b = 0; b < count; ++b) {
                S yb = S(double(frame.eps[offset + b])) * inner(Y, frame.E[offset + b]);
                S c = xa * yb;
                for (int k = 0; k < d; ++k) out[k] += c * t[a][b][k];
            }
        }
        return out;
    }
};

template <class S>
ExtrinsicData<S> extrinsic_at(const Scenario& sc, const Vec<S>& x) {
    const int d = sc.dim();
    ExtrinsicData<S> out;
    AdaptedFrame<Jet<S>> fj = adapted_frame_at(sc, promote_point(x));
    out.gamma = christoffel_at(sc, x);

    // Strip the derivative level off the frame.
    out.frame.d = d;
    out.frame.n_top = fj.n_top;
    out.frame.n_bot = fj.n_bot;
    out.frame.eps = fj.eps;
    out.frame.g = Mat<S>(d);
    out.frame.ginv = Mat<S>(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            out.frame.g(i, j) = fj.g(i, j).v;
            out.frame.ginv(i, j) = fj.ginv(i, j).v;
        }
    for (int k = 0; k < d; ++k) {
        out.frame.E[k] = Vec<S>(d);
        for (int c = 0; c < d; ++c) out.frame.E[k][c] = fj.E[k][c].v;
    }

    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            out.nabla[k][l] = covariant_derivative_jet(out.gamma, fj.E[l], out.frame.E[k]);

    const int n = fj.n_top, p = fj.n_bot;
    out.H_top = Vec<S>(d);
    out.H_bot = Vec<S>(d);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Vec<S> sym(d), asym(d);
            for (int k = 0; k < d; ++k) {
                sym[k] = S(0.5) * (out.nabla[a][b][k] + out.nabla[b][a][k]);
                asym[k] = S(0.5) * (out.nabla[a][b][k] - out.nabla[b][a][k]);
            }
            out.h_top[a][b] = out.frame.project_bot(sym);
            out.T_top[a][b] = out.frame.project_bot(asym);
        }
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            Vec<S> sym(d), asym(d);
            for (int k = 0; k < d; ++k) {
                sym[k] = S(0.5) * (out.nabla[n + i][n + j][k] + out.nabla[n + j][n + i][k]);
                asym[k] = S(0.5) * (out.nabla[n + i][n + j][k] - out.nabla[n + j][n + i][k]);
            }
            out.h_bot[i][j] = out.frame.project_top(sym);
            out.T_bot[i][j] = out.frame.project_top(asym);
        }
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < d; ++k)
            out.H_top[k] += S(double(out.frame.eps[a])) * out.h_top[a][a][k];
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < d; ++k)
            out.H_bot[k] += S(double(out.frame.eps[n + i])) * out.h_bot[i][i][k];
    return out;
}

// Projection of an arbitrary vector (spec op `project`).
Vec<double> project(const Scenario& sc, const Vec<double>& v, FrameSlice which,
                    const Vec<double>& x);

// Second fundamental form of D^top (or D^bot) evaluated on two
// expression-defined field extensions; used by the tensoriality tests.
Vec<double> second_fundamental_form_of_fields(const Scenario& sc,
                                              const std::vector<ExprPtr>& X,
                                              const std::vector<ExprPtr>& Y,
                                              FrameSlice which, const Vec<double>& x);

struct DistributionClass {
    double umbilical_deviation = 0.0;
    double harmonic_deviation = 0.0;
    double geodesic_deviation = 0.0;
    double integrability_deviation = 0.0;
    double cmc_deviation = 0.0;
};

struct ClassifyResult {
    DistributionClass top, bot;
};

ClassifyResult classify(const Scenario& sc, const std::vector<Vec<double>>& points);

struct MeanCurvatureGradient {
    // (nabla_{e_mu} H^top)^bot and (nabla_{e_mu} H^bot)^top for every
    // coordinate direction mu.
    std::vector<Vec<double>> dH_top_bot;
    std::vector<Vec<double>> dH_bot_top;
    double max_norm_top = 0.0;  // CMC deviation of D^top
    double max_norm_bot = 0.0;
};

MeanCurvatureGradient mean_curvature_gradient(const Scenario& sc, const Vec<double>& x);

// Sign-free Frobenius norm of frame components, used for deviation
// reports (invariant under orthogonal frame rotations).
template <class S>
double frobenius_vec(const AdaptedFrame<S>& frame, const Vec<S>& v) {
    double sum = 0.0;
    for (int k = 0; k < frame.d; ++k) {
        double c = scalar_value(frame.inner(v, frame.E[k]));
        sum += c * c;
    }
    return std::sqrt(sum);
}

}  // namespace mixedcurv
