#pragma once

// Scalar invariants: mixed scalar curvatures w.r.t. both connections,
// tensor norms, restricted inner products over the mixed subbundle,
// Ricci-type contractions and the correction scalars Q, Q1, Q2.

#include "mixedcurv/contorsion.hpp"

namespace mixedcurv {

struct NotCodimensionOneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything needed at one point, on any carrier: extrinsic data, the
// contorsion with its four conjugates (mixed indices), and the
// mean-curvature-type vectors of T and T^*.
template <class S>
struct GeomPoint {
    Vec<S> x;
    ExtrinsicData<S> ex;
    Ten3<S> T, Tstar, That, Thatstar, Tstarhat;
    Vec<S> Ht_T, Hb_T, Ht_Ts, Hb_Ts;

    const AdaptedFrame<S>& frame() const { return ex.frame; }
};

template <class S>
GeomPoint<S> geom_point(const Scenario& sc, const Vec<S>& x) {
    GeomPoint<S> gp;
    gp.x = x;
    gp.ex = extrinsic_at(sc, x);
    const AdaptedFrame<S>& fr = gp.ex.frame;
    gp.T = contorsion_mixed_at(sc, x);
    Ten3<S> low = lower_first_index(fr.g, gp.T);
    gp.Tstar = raise_first_index(fr.ginv, conjugate_lower(low, Conjugate::Star));
    gp.That = raise_first_index(fr.ginv, conjugate_lower(low, Conjugate::Hat));
    gp.Thatstar = raise_first_index(fr.ginv, conjugate_lower(low, Conjugate::HatStar));
    gp.Tstarhat = raise_first_index(fr.ginv, conjugate_lower(low, Conjugate::StarHat));
    gp.Ht_T = contorsion_trace(fr, gp.T, FrameSlice::Top);
    gp.Hb_T = contorsion_trace(fr, gp.T, FrameSlice::Bot);
    gp.Ht_Ts = contorsion_trace(fr, gp.Tstar, FrameSlice::Top);
    gp.Hb_Ts = contorsion_trace(fr, gp.Tstar, FrameSlice::Bot);
    return gp;
}

// S_mix = sum_{a,i} eps_a eps_i g(R_{E_a,Cal_E_i} E_a, Cal_E_i).
template <class S>
S mixed_scalar_from_riemann(const AdaptedFrame<S>& fr, const Ten4<S>& R) {
    S sum(0.0);
    for (int a = 0; a < fr.n_top; ++a)
        for (int i = 0; i < fr.n_bot; ++i) {
            Vec<S> r = apply_curvature(R, fr.top(a), fr.bot(i), fr.top(a));
            sum += S(double(fr.eps_top(a) * fr.eps_bot(i))) * fr.inner(r, fr.bot(i));
        }
    return sum;
}

// Symmetrized double contraction for a non-symmetric curvature.
template <class S>
S bar_mixed_scalar_from_riemann(const AdaptedFrame<S>& fr, const Ten4<S>& R) {
    S sum(0.0);
    for (int a = 0; a < fr.n_top; ++a)
        for (int i = 0; i < fr.n_bot; ++i) {
            Vec<S> r1 = apply_curvature(R, fr.top(a), fr.bot(i), fr.top(a));
            Vec<S> r2 = apply_curvature(R, fr.bot(i), fr.top(a), fr.bot(i));
            sum += S(0.5 * fr.eps_top(a) * fr.eps_bot(i)) *
                   (fr.inner(r1, fr.bot(i)) + fr.inner(r2, fr.top(a)));
        }
    return sum;
}

template <class S>
S mixed_scalar_at(const Scenario& sc, const Vec<S>& x, bool bar) {
    AdaptedFrame<S> fr = adapted_frame_at(sc, x);
    if (!bar) return mixed_scalar_from_riemann(fr, riemann_at(sc, x));
    return bar_mixed_scalar_from_riemann(fr, bar_riemann_direct(sc, x));
}

// <B,C> restricted to V = (D^top x D^bot) u (D^bot x D^top): sum of
// eps-weighted g(B(e,f), C(e,f)) over ordered mixed frame pairs.
template <class S>
S restricted_inner_V(const AdaptedFrame<S>& fr, const Ten3<S>& B, const Ten3<S>& C) {
    S sum(0.0);
    for (int a = 0; a < fr.n_top; ++a)
        for (int i = 0; i < fr.n_bot; ++i) {
            S w(double(fr.eps_top(a) * fr.eps_bot(i)));
            Vec<S> b1 = contorsion_apply(B, fr.top(a), fr.bot(i));
            Vec<S> c1 = contorsion_apply(C, fr.top(a), fr.bot(i));
            Vec<S> b2 = contorsion_apply(B, fr.bot(i), fr.top(a));
            Vec<S> c2 = contorsion_apply(C, fr.bot(i), fr.top(a));
            sum += w * (fr.inner(b1, c1) + fr.inner(b2, c2));
        }
    return sum;
}

// Full inner product of a (1,2)-tensor B with the combined extrinsic
// operator field A^bot - T^{bot#} + A^top - T^{top#}: sum over all
// ordered frame pairs (e,f) of eps_e eps_f g(B_e f, Op_e f).
template <class S>
S full_inner_with_extrinsic(const GeomPoint<S>& gp, const Ten3<S>& B) {
    const AdaptedFrame<S>& fr = gp.frame();
    const int d = fr.d;
    S sum(0.0);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            S w(double(fr.eps[k] * fr.eps[l]));
            Vec<S> b = contorsion_apply(B, fr.E[k], fr.E[l]);
            Vec<S> op = gp.ex.weingarten_bot_v(fr.E[k], fr.E[l]) -
                        gp.ex.sharp_bot_v(fr.E[k], fr.E[l]) +
                        gp.ex.weingarten_top_v(fr.E[k], fr.E[l]) -
                        gp.ex.sharp_top_v(fr.E[k], fr.E[l]);
            sum += w * fr.inner(b, op);
        }
    return sum;
}

// Ricci contraction over the full frame, Ric(X,Y) = sum_k eps_k
// g(R_{X,e_k} Y, e_k).
template <class S>
S ricci_full(const AdaptedFrame<S>& fr, const Ten4<S>& R, const Vec<S>& X, const Vec<S>& Y) {
    S sum(0.0);
    for (int k = 0; k < fr.d; ++k) {
        Vec<S> r = apply_curvature(R, X, fr.E[k], Y);
        sum += S(double(fr.eps[k])) * fr.inner(r, fr.E[k]);
    }
    return sum;
}

struct InvariantSet {
    double s_mix = 0.0, bar_s_mix = 0.0;
    double hh_top = 0.0, hh_bot = 0.0, tt_top = 0.0, tt_bot = 0.0;
    double h2_top = 0.0, h2_bot = 0.0;
};

InvariantSet invariants_at(const Scenario& sc, const Vec<double>& x);

// Independent route for bar S_mix: the expansion in nabla T and the
// contorsion commutators added to S_mix.
double bar_mixed_scalar_expanded(const Scenario& sc, const Vec<double>& x);

struct RicciNN {
    double ric_nn = 0.0, bar_ric_nn = 0.0, sigma2 = 0.0, q = 0.0;
};

// Codimension-one Ricci data with N the unit normal (requires p = 1 and
// eps_N = +1). sigma2 is the second elementary symmetric function of the
// Weingarten operator A^top_N.
RicciNN bar_ricci_nn(const Scenario& sc, const Vec<double>& x);

struct RicciHH {
    double ric_hh = 0.0, bar_ric_hh = 0.0, q1 = 0.0, q2 = 0.0;
};

RicciHH bar_ricci_hh(const Scenario& sc, const Vec<double>& x);

}  // namespace mixedcurv
