#include "mixedcurv/geometry.hpp"

namespace mixedcurv {

Ten3<double> christoffel(const Scenario& sc, const Vec<double>& x) {
    return christoffel_at(sc, x);
}

Ten4<double> riemann(const Scenario& sc, const Vec<double>& x) {
    return riemann_at(sc, x);
}

FramePacket frame_packet(const Scenario& sc, const Vec<double>& x) {
    FramePacket out;
    out.point = x;
    AdaptedFrame<double> frame = adapted_frame_at(sc, x);
    for (int a = 0; a < frame.n_top; ++a) {
        out.E.push_back(frame.top(a));
        out.eps_top.push_back(frame.eps_top(a));
    }
    for (int i = 0; i < frame.n_bot; ++i) {
        out.cal_E.push_back(frame.bot(i));
        out.eps_bot.push_back(frame.eps_bot(i));
    }
    ConnectionJet<double> cj = christoffel_jet_at(sc, x);
    out.gamma = cj.gamma;
    out.dgamma = cj.dgamma;
    return out;
}

Vec<double> covariant_derivative(const Scenario& sc, const std::vector<ExprPtr>& field,
                                 const Vec<double>& dir, const Vec<double>& x) {
    Ten3<double> gamma = christoffel_at(sc, x);
    Vec<Jet<double>> comps = detail::eval_vector(field, promote_point(x), sc.params);
    return covariant_derivative_jet(gamma, comps, dir);
}

double divergence(const Scenario& sc, const std::vector<ExprPtr>& field, const Vec<double>& x) {
    Vec<Jet<double>> comps = detail::eval_vector(field, promote_point(x), sc.params);
    return divergence_from_jet(sc, x, comps);
}

double frame_divergence(const Scenario& sc, const std::vector<ExprPtr>& field,
                        const Vec<double>& x, FrameSlice which) {
    auto fieldfn = [&field](const Scenario& s, const Vec<Jet<double>>& xp) {
        return detail::eval_vector(field, xp, s.params);
    };
    return frame_divergence_of_field(sc, fieldfn, x, which);
}

}  // namespace mixedcurv
