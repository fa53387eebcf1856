#pragma once

// Contorsion tensor algebra: index lowering/raising, the four conjugate
// tensors, connection-class checks, contorsion mean vectors, covariant
// derivative of the contorsion, and the curvature of the deformed
// connection (computed two independent ways).

#include "mixedcurv/extrinsic.hpp"

namespace mixedcurv {

// Mixed components C(l,m,n) = component l of T_{e_m} e_n.
template <class S>
Ten3<S> contorsion_mixed_at(const Scenario& sc, const Vec<S>& x) {
    const int d = sc.dim();
    Ten3<S> out(d);
    if (sc.contorsion.trivial) return out;
    std::span<const S> xs(x.e.data(), static_cast<std::size_t>(d));
    Ten3<S> raw(d);
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                raw(l, m, n) = sc.contorsion.components[l][m][n]->eval(xs, sc.params);
    if (!sc.contorsion.lower_indices) return raw;
    Mat<S> ginv = inverse(metric_at(sc, x));
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                S sum(0.0);
                for (int s = 0; s < d; ++s) sum += ginv(l, s) * raw(s, m, n);
                out(l, m, n) = sum;
            }
    return out;
}

// All-lower components C_{lmn} = g(T_{e_m} e_n, e_l).
template <class S>
Ten3<S> lower_first_index(const Mat<S>& g, const Ten3<S>& mixed) {
    const int d = mixed.n;
    Ten3<S> out(d);
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                S sum(0.0);
                for (int s = 0; s < d; ++s) sum += g(l, s) * mixed(s, m, n);
                out(l, m, n) = sum;
            }
    return out;
}

template <class S>
Ten3<S> raise_first_index(const Mat<S>& ginv, const Ten3<S>& lower) {
    return lower_first_index(ginv, lower);
}

// Conjugates expressed as index permutations of the all-lower tensor
// C_{lmn} = g(T_{e_m} e_n, e_l):
//   (T^*)_{lmn}        = C_{nml}
//   (T-hat)_{lmn}      = C_{lnm}
//   ((T-hat)^*)_{lmn}  = C_{nlm}
//   (hat of T^*)_{lmn} = C_{mnl}
enum class Conjugate { Identity, Star, Hat, HatStar, StarHat };

template <class S>
Ten3<S> conjugate_lower(const Ten3<S>& C, Conjugate which) {
    const int d = C.n;
    Ten3<S> out(d);
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                switch (which) {
                    case Conjugate::Identity: out(l, m, n) = C(l, m, n); break;
                    case Conjugate::Star: out(l, m, n) = C(n, m, l); break;
                    case Conjugate::Hat: out(l, m, n) = C(l, n, m); break;
                    case Conjugate::HatStar: out(l, m, n) = C(n, l, m); break;
                    case Conjugate::StarHat: out(l, m, n) = C(m, n, l); break;
                }
            }
    return out;
}

// T_X Y from mixed components.
template <class S>
Vec<S> contorsion_apply(const Ten3<S>& mixed, const Vec<S>& X, const Vec<S>& Y) {
    const int d = mixed.n;
    Vec<S> out(d);
    for (int l = 0; l < d; ++l) {
        S sum(0.0);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) sum += mixed(l, m, n) * X[m] * Y[n];
        out[l] = sum;
    }
    return out;
}

// Frame traces H^top_T = sum_a eps_a T_{E_a} E_a and the D^bot analogue.
template <class S>
Vec<S> contorsion_trace(const AdaptedFrame<S>& frame, const Ten3<S>& mixed, FrameSlice which) {
    const int d = frame.d;
    const int count = which == FrameSlice::Top ? frame.n_top : frame.n_bot;
    const int offset = which == FrameSlice::Top ? 0 : frame.n_top;
    Vec<S> out(d);
    for (int a = 0; a < count; ++a) {
        Vec<S> t = contorsion_apply(mixed, frame.E[offset + a], frame.E[offset + a]);
        for (int k = 0; k < d; ++k) out[k] += S(double(frame.eps[offset + a])) * t[k];
    }
    return out;
}

// (nabla_r T)^l_{mn} for the Levi-Civita connection.
template <class S>
struct ContorsionJet {
    Ten3<S> mixed;
    Ten4<S> nabla;  // nabla(l,m,n,r) = (nabla_{e_r} T)^l_{mn}
};

template <class S>
ContorsionJet<S> contorsion_jet_at(const Scenario& sc, const Vec<S>& x) {
    const int d = sc.dim();
    ContorsionJet<S> out;
    out.nabla = Ten4<S>(d);
    Ten3<Jet<S>> Cj = contorsion_mixed_at(sc, promote_point(x));
    out.mixed = Ten3<S>(d);
    Ten3<S> gamma = christoffel_at(sc, x);
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) out.mixed(l, m, n) = Cj(l, m, n).v;
    for (int r = 0; r < d; ++r)
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    S sum = Cj(l, m, n).d[r];
                    for (int s = 0; s < d; ++s)
                        sum += gamma(l, r, s) * out.mixed(s, m, n) -
                               gamma(s, r, m) * out.mixed(l, s, n) -
                               gamma(s, r, n) * out.mixed(l, m, s);
                    out.nabla(l, m, n, r) = sum;
                }
    return out;
}

// Curvature of nabla-bar = nabla + T, route 1: apply the coordinate
// curvature formula to the deformed coefficients Gamma + T.
template <class S>
Ten4<S> bar_riemann_direct(const Scenario& sc, const Vec<S>& x) {
    const int d = sc.dim();
    Ten3<Jet<S>> coeff = christoffel_at(sc, promote_point(x));
    Ten3<Jet<S>> Cj = contorsion_mixed_at(sc, promote_point(x));
    Ten3<S> bar(d);
    Ten4<S> dbar(d);
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                Jet<S> t = coeff(l, m, n) + Cj(l, m, n);
                bar(l, m, n) = t.v;
                for (int r = 0; r < d; ++r) dbar(l, m, n, r) = t.d[r];
            }
    return curvature_from_coefficients(bar, dbar);
}

// Route 2: R-bar from R plus covariant derivatives and quadratic terms
// of the contorsion,
//   Rbar(l,s,m,n) = R(l,s,m,n) + (nabla_n T)^l_{ms} - (nabla_m T)^l_{ns}
//                 + T^l_{nr} T^r_{ms} - T^l_{mr} T^r_{ns}.
template <class S>
Ten4<S> bar_riemann_from_contorsion(const Scenario& sc, const Vec<S>& x) {
    const int d = sc.dim();
    Ten4<S> R = riemann_at(sc, x);
    ContorsionJet<S> cj = contorsion_jet_at(sc, x);
    Ten4<S> out(d);
    for (int l = 0; l < d; ++l)
        for (int s = 0; s < d; ++s)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    S sum = R(l, s, m, n) + cj.nabla(l, m, s, n) - cj.nabla(l, n, s, m);
                    for (int r = 0; r < d; ++r)
                        sum += cj.mixed(l, n, r) * cj.mixed(r, m, s) -
                               cj.mixed(l, m, r) * cj.mixed(r, n, s);
                    out(l, s, m, n) = sum;
                }
    return out;
}

// Extrinsic data of the deformed connection:
//   h-bar(X,Y) = h(X,Y) + (1/2)(T_X Y + T_Y X)^perp,
//   T-bar-sharp analogue with the antisymmetric part, and the deformed
//   mean curvatures H-bar = H + (H_T)^perp.
template <class S>
struct BarExtrinsic {
    std::array<std::array<Vec<S>, kMaxDim>, kMaxDim> h_top, T_top, h_bot, T_bot;
    Vec<S> H_top, H_bot;
};

template <class S>
BarExtrinsic<S> bar_extrinsic(const Scenario& sc, const ExtrinsicData<S>& ex,
                              const Ten3<S>& mixed) {
    const auto& frame = ex.frame;
    const int d = frame.d, n = frame.n_top, p = frame.n_bot;
    BarExtrinsic<S> out;
    out.H_top = Vec<S>(d);
    out.H_bot = Vec<S>(d);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Vec<S> tab = contorsion_apply(mixed, frame.E[a], frame.E[b]);
            Vec<S> tba = contorsion_apply(mixed, frame.E[b], frame.E[a]);
            Vec<S> sym(d), asym(d);
            for (int k = 0; k < d; ++k) {
                sym[k] = S(0.5) * (tab[k] + tba[k]);
                asym[k] = S(0.5) * (tab[k] - tba[k]);
            }
            out.h_top[a][b] = ex.h_top[a][b] + frame.project_bot(sym);
            out.T_top[a][b] = ex.T_top[a][b] + frame.project_bot(asym);
        }
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            Vec<S> tij = contorsion_apply(mixed, frame.E[n + i], frame.E[n + j]);
            Vec<S> tji = contorsion_apply(mixed, frame.E[n + j], frame.E[n + i]);
            Vec<S> sym(d), asym(d);
            for (int k = 0; k < d; ++k) {
                sym[k] = S(0.5) * (tij[k] + tji[k]);
                asym[k] = S(0.5) * (tij[k] - tji[k]);
            }
            out.h_bot[i][j] = ex.h_bot[i][j] + frame.project_top(sym);
            out.T_bot[i][j] = ex.T_bot[i][j] + frame.project_top(asym);
        }
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < d; ++k)
            out.H_top[k] += S(double(frame.eps[a])) * out.h_top[a][a][k];
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < d; ++k)
            out.H_bot[k] += S(double(frame.eps[n + i])) * out.h_bot[i][i][k];
    return out;
}

struct ConnectionClassReport {
    double max_abs = 0.0;              // largest |C_{lmn}| seen
    double metric_compat_dev = 0.0;    // max |C_{lmn} + C_{nml}|
    double statistical_dev = 0.0;      // max deviation from full symmetry
};

ConnectionClassReport classify_connection(const Scenario& sc,
                                          const std::vector<Vec<double>>& points);

}  // namespace mixedcurv
