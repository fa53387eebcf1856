#include "mixedcurv/invariants.hpp"

namespace mixedcurv {

namespace {

Vec<double> val(const Vec<Jet<double>>& f) {
    Vec<double> out(f.n);
    for (int k = 0; k < f.n; ++k) out[k] = f[k].v;
    return out;
}

// Point bundle carrying one derivative level on every derived field.
struct JetData {
    GeomPoint<Jet<double>> j;
    GeomPoint<double> v;
    Ten3<double> gamma;

    JetData(const Scenario& sc, const Vec<double>& x)
        : j(geom_point(sc, promote_point(x))),
          v(geom_point(sc, x)),
          gamma(christoffel_at(sc, x)) {}
};

// (nabla_r S)^l_{mn} for a (1,2)-tensor field given with coordinate
// derivatives.
Ten4<double> cov_tensor12(const Ten3<double>& gamma, const Ten3<Jet<double>>& Tj) {
    const int d = gamma.n;
    Ten4<double> out(d);
    for (int r = 0; r < d; ++r)
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    double sum = Tj(l, m, n).d[r];
                    for (int s = 0; s < d; ++s)
                        sum += gamma(l, r, s) * Tj(s, m, n).v -
                               gamma(s, r, m) * Tj(l, s, n).v -
                               gamma(s, r, n) * Tj(l, m, s).v;
                    out(l, m, n, r) = sum;
                }
    return out;
}

Vec<double> nabla_t_apply(const Ten4<double>& nab, const Vec<double>& dir,
                          const Vec<double>& Y, const Vec<double>& Z) {
    const int d = nab.n;
    Vec<double> out(d);
    for (int l = 0; l < d; ++l) {
        double sum = 0.0;
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                for (int r = 0; r < d; ++r)
                    sum += nab(l, m, n, r) * dir[r] * Y[m] * Z[n];
        out[l] = sum;
    }
    return out;
}

// Coordinate components of a bilinear map given by an ExtrinsicData
// accessor on the jet carrier.
template <class F>
Ten3<Jet<double>> coord_tensor(int d, F&& bil) {
    Ten3<Jet<double>> out(d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            Vec<Jet<double>> em(d), en(d);
            em[m] = Jet<double>(1.0);
            en[n] = Jet<double>(1.0);
            Vec<Jet<double>> r = bil(em, en);
            for (int l = 0; l < d; ++l) out(l, m, n) = r[l];
        }
    return out;
}

}  // namespace

InvariantSet invariants_at(const Scenario& sc, const Vec<double>& x) {
    InvariantSet out;
    ExtrinsicData<double> ex = extrinsic_at(sc, x);
    out.s_mix = mixed_scalar_from_riemann(ex.frame, riemann_at(sc, x));
    out.bar_s_mix = bar_mixed_scalar_from_riemann(ex.frame, bar_riemann_direct(sc, x));
    out.hh_top = ex.inner_hh_top();
    out.hh_bot = ex.inner_hh_bot();
    out.tt_top = ex.inner_TT_top();
    out.tt_bot = ex.inner_TT_bot();
    out.h2_top = ex.norm2_H_top();
    out.h2_bot = ex.norm2_H_bot();
    return out;
}

double bar_mixed_scalar_expanded(const Scenario& sc, const Vec<double>& x) {
    AdaptedFrame<double> fr = adapted_frame_at(sc, x);
    ContorsionJet<double> cj = contorsion_jet_at(sc, x);
    double s = mixed_scalar_from_riemann(fr, riemann_at(sc, x));
    double corr = 0.0;
    for (int a = 0; a < fr.n_top; ++a)
        for (int i = 0; i < fr.n_bot; ++i) {
            const Vec<double>& Ea = fr.top(a);
            const Vec<double>& Ei = fr.bot(i);
            double w = 0.5 * fr.eps_top(a) * fr.eps_bot(i);
            Vec<double> d1 = nabla_t_apply(cj.nabla, Ei, Ea, Ea);
            Vec<double> d2 = nabla_t_apply(cj.nabla, Ea, Ei, Ea);
            Vec<double> d3 = nabla_t_apply(cj.nabla, Ea, Ei, Ei);
            Vec<double> d4 = nabla_t_apply(cj.nabla, Ei, Ea, Ei);
            Vec<double> c1 = contorsion_apply(cj.mixed, Ei, contorsion_apply(cj.mixed, Ea, Ea)) -
                             contorsion_apply(cj.mixed, Ea, contorsion_apply(cj.mixed, Ei, Ea));
            Vec<double> c2 = contorsion_apply(cj.mixed, Ea, contorsion_apply(cj.mixed, Ei, Ei)) -
                             contorsion_apply(cj.mixed, Ei, contorsion_apply(cj.mixed, Ea, Ei));
            corr += w * (fr.inner(d1, Ei) - fr.inner(d2, Ei) + fr.inner(d3, Ea) -
                         fr.inner(d4, Ea) + fr.inner(c1, Ei) + fr.inner(c2, Ea));
        }
    return s + corr;
}

RicciNN bar_ricci_nn(const Scenario& sc, const Vec<double>& x) {
    if (sc.n_bot() != 1)
        throw NotCodimensionOneError("bar_ricci_nn requires a rank-one D^bot");
    GeomPoint<double> gp = geom_point(sc, x);
    const AdaptedFrame<double>& fr = gp.frame();
    if (fr.eps_bot(0) != 1)
        throw NotCodimensionOneError("bar_ricci_nn requires eps_N = +1");
    const Vec<double>& N = fr.bot(0);

    RicciNN out;
    Ten4<double> R = riemann_at(sc, x);
    Ten4<double> Rbar = bar_riemann_direct(sc, x);
    for (int a = 0; a < fr.n_top; ++a) {
        double w = fr.eps_top(a);
        out.ric_nn += w * fr.inner(apply_curvature(R, N, fr.top(a), N), fr.top(a));
        out.bar_ric_nn += w * fr.inner(apply_curvature(Rbar, N, fr.top(a), N), fr.top(a));
    }

    double trA = 0.0, trA2 = 0.0;
    for (int a = 0; a < fr.n_top; ++a) {
        trA += fr.eps_top(a) * fr.inner(gp.ex.h_top[a][a], N);
        for (int b = 0; b < fr.n_top; ++b)
            trA2 += fr.eps_top(a) * fr.eps_top(b) * fr.inner(gp.ex.h_top[a][b], N) *
                    fr.inner(gp.ex.h_top[b][a], N);
    }
    out.sigma2 = 0.5 * (trA * trA - trA2);

    // Correction scalar: all terms produced by expanding the divergence of
    // (T_N N)^top - (H^top_{T*})^bot against the contracted deformation of
    // the curvature; the nabla T traces cancel pairwise and the remainder
    // is derivative-free.
    Vec<double> TNN = contorsion_apply(gp.T, N, N);
    const Vec<double>& Hb = gp.ex.H_bot;
    double q = 0.0;
    for (int a = 0; a < fr.n_top; ++a) {
        const Vec<double>& Ea = fr.top(a);
        Vec<double> SEa = gp.ex.weingarten_top(N, a) + gp.ex.sharp_top(N, a);
        q -= fr.eps_top(a) * (fr.inner(contorsion_apply(gp.T, SEa, N), Ea) +
                              fr.inner(contorsion_apply(gp.T, N, SEa), Ea));
        q += fr.eps_top(a) * fr.inner(Ea, Hb) *
             (fr.inner(contorsion_apply(gp.Tstar, N, Ea), N) +
              fr.inner(contorsion_apply(gp.Tstar, Ea, N), N));
        q -= fr.eps_top(a) *
             fr.inner(contorsion_apply(gp.T, Ea, TNN) -
                          contorsion_apply(gp.T, N, contorsion_apply(gp.T, Ea, N)),
                      Ea);
    }
    q += fr.inner(TNN, N) * trA - fr.inner(TNN, Hb);
    q += fr.inner(gp.Ht_Ts, N) * trA - fr.inner(gp.Ht_Ts, Hb);
    out.q = q;
    return out;
}

namespace {

// Q1 of the Riemannian divergence identity for
// A^top_{H^top} H^bot + A^bot_{H^bot} H^top.
double q1_of(const Scenario& sc, const JetData& D) {
    const AdaptedFrame<double>& fr = D.v.frame();
    const int d = fr.d;
    const ExtrinsicData<double>& ex = D.v.ex;
    const Vec<double>& Ht = ex.H_top;
    const Vec<double>& Hb = ex.H_bot;

    Vec<double> nHbHt = covariant_derivative_jet(D.gamma, D.j.ex.H_top, Hb);
    Vec<double> nHtHb = covariant_derivative_jet(D.gamma, D.j.ex.H_bot, Ht);
    double q1 = fr.inner(Ht, nHbHt) + fr.inner(Hb, nHtHb);

    // Coordinate tensors for nabla T^top / nabla T^bot via their
    // projector-extended coordinate tensors.
    Ten3<Jet<double>> Ttopj = coord_tensor(d, [&](const auto& X, const auto& Y) {
        return D.j.ex.T_top_v(X, Y);
    });
    Ten3<Jet<double>> Tbotj = coord_tensor(d, [&](const auto& X, const auto& Y) {
        return D.j.ex.T_bot_v(X, Y);
    });
    Ten4<double> nTtop = cov_tensor12(D.gamma, Ttopj);
    Ten4<double> nTbot = cov_tensor12(D.gamma, Tbotj);

    for (int a = 0; a < fr.n_top; ++a) {
        const Vec<double>& Ea = fr.top(a);
        double w = fr.eps_top(a);
        q1 -= w * fr.inner(nabla_t_apply(nTtop, Ea, Hb, Ea), Ht);
        Vec<double> W = ex.T_top_v(Hb, Ea);
        q1 -= 2.0 * w * fr.inner(covariant_derivative_jet(D.gamma, D.j.frame().E[a], W), Ht);
        Vec<double> nEaHt = covariant_derivative_jet(D.gamma, D.j.ex.H_top, Ea);
        q1 += w * fr.inner(ex.h_top_v(Hb, Ea), fr.project_bot(nEaHt));
        Vec<double> nEaHb = covariant_derivative_jet(D.gamma, D.j.ex.H_bot, Ea);
        q1 += w * fr.inner(ex.weingarten_top_v(Ht, Ea), nEaHb);
    }
    for (int i = 0; i < fr.n_bot; ++i) {
        const Vec<double>& Ei = fr.bot(i);
        double w = fr.eps_bot(i);
        q1 -= w * fr.inner(nabla_t_apply(nTbot, Ei, Ht, Ei), Hb);
        Vec<double> W = ex.T_bot_v(Ht, Ei);
        q1 -= 2.0 * w *
              fr.inner(covariant_derivative_jet(D.gamma, D.j.frame().E[fr.n_top + i], W), Hb);
        Vec<double> nEiHb = covariant_derivative_jet(D.gamma, D.j.ex.H_bot, Ei);
        q1 += w * fr.inner(ex.h_bot_v(Ht, Ei), fr.project_top(nEiHb));
        Vec<double> nEiHt = covariant_derivative_jet(D.gamma, D.j.ex.H_top, Ei);
        q1 += w * fr.inner(ex.weingarten_bot_v(Hb, Ei), nEiHt);
    }

    q1 -= fr.inner(ex.h_top_v(Hb, Hb), Ht) + fr.inner(ex.h_bot_v(Ht, Ht), Hb);
    return q1;
}

// One orientation of Q2: the frame expansion of div(T_Q P) plus half the
// contracted curvature deformation written through nabla T and T.T terms.
double q2_oriented(const JetData& D, const Vec<Jet<double>>& Pj, const Vec<Jet<double>>& Qj,
                   const Ten4<double>& nT) {
    const AdaptedFrame<double>& fr = D.v.frame();
    const Ten3<double>& T = D.v.T;
    Vec<double> P = val(Pj), Q = val(Qj);

    double q2 = 0.0;
    for (int k = 0; k < fr.d; ++k) {
        const Vec<double>& Ek = fr.E[k];
        Vec<double> nP = covariant_derivative_jet(D.gamma, Pj, Ek);
        Vec<double> nQ = covariant_derivative_jet(D.gamma, Qj, Ek);
        Vec<double> t = nabla_t_apply(nT, Ek, Q, P) + contorsion_apply(T, nQ, P) +
                        contorsion_apply(T, Q, nP);
        q2 += fr.eps[k] * fr.inner(t, Ek);
    }
    for (int a = 0; a < fr.n_top; ++a) {
        const Vec<double>& Ea = fr.top(a);
        Vec<double> t = nabla_t_apply(nT, Ea, Q, P) - nabla_t_apply(nT, Q, Ea, P) +
                        contorsion_apply(T, Ea, contorsion_apply(T, Q, P)) -
                        contorsion_apply(T, Q, contorsion_apply(T, Ea, P));
        q2 += 0.5 * fr.eps_top(a) * fr.inner(t, Ea);
    }
    for (int i = 0; i < fr.n_bot; ++i) {
        const Vec<double>& Ei = fr.bot(i);
        Vec<double> t = nabla_t_apply(nT, Ei, P, Q) - nabla_t_apply(nT, P, Ei, Q) +
                        contorsion_apply(T, Ei, contorsion_apply(T, P, Q)) -
                        contorsion_apply(T, P, contorsion_apply(T, Ei, Q));
        q2 += 0.5 * fr.eps_bot(i) * fr.inner(t, Ei);
    }
    return q2;
}

double bar_ric_hh_oriented(const AdaptedFrame<double>& fr, const Ten4<double>& Rbar,
                           const Vec<double>& P, const Vec<double>& Q) {
    double sum = 0.0;
    for (int a = 0; a < fr.n_top; ++a)
        sum += fr.eps_top(a) * fr.inner(apply_curvature(Rbar, Q, fr.top(a), P), fr.top(a));
    for (int i = 0; i < fr.n_bot; ++i)
        sum += fr.eps_bot(i) * fr.inner(apply_curvature(Rbar, P, fr.bot(i), Q), fr.bot(i));
    return sum;
}

}  // namespace

RicciHH bar_ricci_hh(const Scenario& sc, const Vec<double>& x) {
    JetData D(sc, x);
    const AdaptedFrame<double>& fr = D.v.frame();
    RicciHH out;
    Ten4<double> R = riemann_at(sc, x);
    Ten4<double> Rbar = bar_riemann_direct(sc, x);
    out.ric_hh = ricci_full(fr, R, D.v.ex.H_top, D.v.ex.H_bot);
    out.bar_ric_hh = 0.5 * (bar_ric_hh_oriented(fr, Rbar, D.v.ex.H_top, D.v.ex.H_bot) +
                            bar_ric_hh_oriented(fr, Rbar, D.v.ex.H_bot, D.v.ex.H_top));
    out.q1 = q1_of(sc, D);
    Ten4<double> nT = contorsion_jet_at(sc, x).nabla;
    out.q2 = q2_oriented(D, D.j.ex.H_top, D.j.ex.H_bot, nT) +
             q2_oriented(D, D.j.ex.H_bot, D.j.ex.H_top, nT);
    return out;
}

}  // namespace mixedcurv
