#include "mixedcurv/extrinsic.hpp"

#include <algorithm>

namespace mixedcurv {

Vec<double> project(const Scenario& sc, const Vec<double>& v, FrameSlice which,
                    const Vec<double>& x) {
    AdaptedFrame<double> frame = adapted_frame_at(sc, x);
    return which == FrameSlice::Top ? frame.project_top(v) : frame.project_bot(v);
}

Vec<double> second_fundamental_form_of_fields(const Scenario& sc,
                                              const std::vector<ExprPtr>& X,
                                              const std::vector<ExprPtr>& Y,
                                              FrameSlice which, const Vec<double>& x) {
    const int d = sc.dim();
    Ten3<double> gamma = christoffel_at(sc, x);
    Vec<Jet<double>> Xj = detail::eval_vector(X, promote_point(x), sc.params);
    Vec<Jet<double>> Yj = detail::eval_vector(Y, promote_point(x), sc.params);
    Vec<double> Xv = point_value(Xj), Yv = point_value(Yj);
    Vec<double> nxy = covariant_derivative_jet(gamma, Yj, Xv);
    Vec<double> nyx = covariant_derivative_jet(gamma, Xj, Yv);
    Vec<double> sym(d);
    for (int k = 0; k < d; ++k) sym[k] = 0.5 * (nxy[k] + nyx[k]);
    AdaptedFrame<double> frame = adapted_frame_at(sc, x);
    // The form takes values in the complementary distribution.
    return which == FrameSlice::Top ? frame.project_bot(sym) : frame.project_top(sym);
}

namespace {

void accumulate_deviations(const ExtrinsicData<double>& ex, bool top, DistributionClass& dc) {
    const auto& frame = ex.frame;
    const int count = top ? frame.n_top : frame.n_bot;
    const int offset = top ? 0 : frame.n_top;
    const auto& h = top ? ex.h_top : ex.h_bot;
    const auto& T = top ? ex.T_top : ex.T_bot;
    const Vec<double>& H = top ? ex.H_top : ex.H_bot;

    double umb = 0.0, geo = 0.0, integ = 0.0;
    for (int a = 0; a < count; ++a)
        for (int b = 0; b < count; ++b) {
            Vec<double> dev = h[a][b];
            if (a == b) {
                double w = double(frame.eps[offset + a]) / count;
                for (int k = 0; k < frame.d; ++k) dev[k] -= w * H[k];
            }
            umb = std::max(umb, frobenius_vec(frame, dev));
            geo = std::max(geo, frobenius_vec(frame, h[a][b]));
            integ = std::max(integ, frobenius_vec(frame, T[a][b]));
        }
    dc.umbilical_deviation = std::max(dc.umbilical_deviation, umb);
    dc.geodesic_deviation = std::max(dc.geodesic_deviation, geo);
    dc.integrability_deviation = std::max(dc.integrability_deviation, integ);
    dc.harmonic_deviation = std::max(dc.harmonic_deviation, frobenius_vec(frame, H));
}

}  // namespace

ClassifyResult classify(const Scenario& sc, const std::vector<Vec<double>>& points) {
    ClassifyResult out;
    for (const auto& x : points) {
        ExtrinsicData<double> ex = extrinsic_at(sc, x);
        accumulate_deviations(ex, true, out.top);
        accumulate_deviations(ex, false, out.bot);
        MeanCurvatureGradient mcg = mean_curvature_gradient(sc, x);
        out.top.cmc_deviation = std::max(out.top.cmc_deviation, mcg.max_norm_top);
        out.bot.cmc_deviation = std::max(out.bot.cmc_deviation, mcg.max_norm_bot);
    }
    return out;
}

MeanCurvatureGradient mean_curvature_gradient(const Scenario& sc, const Vec<double>& x) {
    const int d = sc.dim();
    ExtrinsicData<Jet<double>> exj = extrinsic_at(sc, promote_point(x));
    Ten3<double> gamma = christoffel_at(sc, x);
    AdaptedFrame<double> frame = adapted_frame_at(sc, x);

    MeanCurvatureGradient out;
    for (int mu = 0; mu < d; ++mu) {
        Vec<double> dir(d);
        dir[mu] = 1.0;
        Vec<double> dHt = covariant_derivative_jet(gamma, exj.H_top, dir);
        Vec<double> dHb = covariant_derivative_jet(gamma, exj.H_bot, dir);
        Vec<double> pt = frame.project_bot(dHt);
        Vec<double> pb = frame.project_top(dHb);
        out.dH_top_bot.push_back(pt);
        out.dH_bot_top.push_back(pb);
        out.max_norm_top = std::max(out.max_norm_top, frobenius_vec(frame, pt));
        out.max_norm_bot = std::max(out.max_norm_bot, frobenius_vec(frame, pb));
    }
    return out;
}

}  // namespace mixedcurv
