#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mixedcurv/extrinsic.hpp"
#include "helpers.hpp"

using namespace mixedcurv;
using testutil::SplitMix64;

namespace {

double max_abs(const Vec<double>& v) {
    double m = 0.0;
    for (int k = 0; k < v.n; ++k) m = std::max(m, std::abs(v[k]));
    return m;
}

}  // namespace

TEST_CASE("warped torus: D^top geodesic, H_bot = -(u'/u) d_x") {
    Scenario sc = build_preset("warped_torus");
    SplitMix64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        Vec<double> x = testutil::random_point(sc, rng);
        ExtrinsicData<double> ex = extrinsic_at(sc, x);
        CHECK(max_abs(ex.h_top[0][0]) < 1e-13);
        double u = 2.0 + std::sin(x[0]), du = std::cos(x[0]);
        CHECK(ex.H_bot[0] == doctest::Approx(-du / u).epsilon(1e-12));
        CHECK(std::abs(ex.H_bot[1]) < 1e-13);
        CHECK(ex.norm2_H_bot() == doctest::Approx(du * du / (u * u)).epsilon(1e-11));
    }
}

TEST_CASE("hopf fibration: both distributions totally geodesic, <T,T>_bot = 2") {
    Scenario sc = build_preset("hopf_s3");
    SplitMix64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        Vec<double> x = testutil::random_point(sc, rng);
        ExtrinsicData<double> ex = extrinsic_at(sc, x);
        CHECK(ex.inner_hh_top() == doctest::Approx(0.0).epsilon(1e-11).scale(1.0));
        CHECK(ex.inner_hh_bot() == doctest::Approx(0.0).epsilon(1e-11).scale(1.0));
        CHECK(ex.inner_TT_top() == doctest::Approx(0.0).epsilon(1e-11).scale(1.0));
        CHECK(ex.inner_TT_bot() == doctest::Approx(2.0).epsilon(1e-10));
    }
}

TEST_CASE("doubly twisted torus: H_top is the negative twisted-function gradient") {
    Scenario sc = build_preset("doubly_twisted");
    SplitMix64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        Vec<double> x = testutil::random_point(sc, rng);
        ExtrinsicData<double> ex = extrinsic_at(sc, x);
        // metric diag(v^2, u^2) with u = 2+sin(x1+x2)/2, v = 2+cos(x1-x2)/2.
        double vv = 2.0 + std::cos(x[0] - x[1]) / 2.0;
        double uu = 2.0 + std::sin(x[0] + x[1]) / 2.0;
        double dv2 = std::sin(x[0] - x[1]) / 2.0;  // d v / d x2
        double du1 = std::cos(x[0] + x[1]) / 2.0;  // d u / d x1
        // H_top = -grad^bot log v, H_bot = -grad^top log u.
        CHECK(ex.H_top[1] == doctest::Approx(-dv2 / (vv * uu * uu)).epsilon(1e-11));
        CHECK(std::abs(ex.H_top[0]) < 1e-13);
        CHECK(ex.H_bot[0] == doctest::Approx(-du1 / (uu * vv * vv)).epsilon(1e-11));
        CHECK(std::abs(ex.H_bot[1]) < 1e-13);
        CHECK(max_abs(ex.T_top[0][0]) < 1e-13);
        CHECK(max_abs(ex.T_bot[0][0]) < 1e-13);
    }
}

TEST_CASE("four-torus with tilted plane field has a nonzero integrability tensor") {
    Scenario sc = testutil::torus4();
    SplitMix64 rng(9);
    Vec<double> x = testutil::random_point(sc, rng);
    ExtrinsicData<double> ex = extrinsic_at(sc, x);
    CHECK(ex.inner_TT_top() > 1e-4);
    // T is antisymmetric, diagonal entries vanish.
    CHECK(max_abs(ex.T_top[0][0]) < 1e-13);
    CHECK(max_abs(ex.T_top[1][1]) < 1e-13);
    for (int k = 0; k < 4; ++k)
        CHECK(ex.T_top[0][1][k] == doctest::Approx(-ex.T_top[1][0][k]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("weingarten operators are dual to the second fundamental forms") {
    Scenario sc = testutil::torus4();
    SplitMix64 rng(13);
    Vec<double> x = testutil::random_point(sc, rng);
    ExtrinsicData<double> ex = extrinsic_at(sc, x);
    const auto& fr = ex.frame;
    Vec<double> Z(4);
    for (int k = 0; k < 4; ++k) Z[k] = rng.uniform(-1.0, 1.0);
    Vec<double> Zb = fr.project_bot(Z);
    for (int a = 0; a < fr.n_top; ++a)
        for (int b = 0; b < fr.n_top; ++b) {
            double lhs = fr.inner(ex.weingarten_top(Zb, b), fr.top(a));
            double rhs = fr.inner(ex.h_top[b][a], Zb);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
            double ls = fr.inner(ex.sharp_top(Zb, b), fr.top(a));
            double rs = fr.inner(ex.T_top[b][a], Zb);
            CHECK(ls == doctest::Approx(rs).epsilon(1e-12).scale(1.0));
        }
    // the _v variants agree with frame sums
    Vec<double> X = fr.top(0), Y = fr.top(1);
    Vec<double> hv = ex.h_top_v(X, Y);
    for (int k = 0; k < 4; ++k)
        CHECK(hv[k] == doctest::Approx(ex.h_top[0][1][k]).epsilon(1e-12).scale(1.0));
    Vec<double> wv = ex.weingarten_top_v(Zb, Y);
    Vec<double> wf = ex.weingarten_top(Zb, 1);
    for (int k = 0; k < 4; ++k)
        CHECK(wv[k] == doctest::Approx(wf[k]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("second fundamental form of field extensions is tensorial") {
    Scenario sc = testutil::torus4();
    SplitMix64 rng(17);
    Vec<double> x = testutil::random_point(sc, rng);

    auto vec_exprs = [](std::initializer_list<const char*> comps) {
        std::vector<ExprPtr> out;
        for (const char* c : comps) out.push_back(parse_expression(c));
        return out;
    };
    auto X0 = vec_exprs({"1", "0", "0", "0"});
    auto Y0 = vec_exprs({"0", "1", "0", "sin(x1+x3)/4"});
    auto Xf = vec_exprs({"sin(x2)", "0", "0", "0"});
    auto Yg = vec_exprs({"0", "cos(x1)", "0", "cos(x1)*sin(x1+x3)/4"});

    Vec<double> base = second_fundamental_form_of_fields(sc, X0, Y0, FrameSlice::Top, x);
    Vec<double> scaled = second_fundamental_form_of_fields(sc, Xf, Yg, FrameSlice::Top, x);
    double f = std::sin(x[1]) * std::cos(x[0]);
    for (int k = 0; k < 4; ++k)
        CHECK(scaled[k] == doctest::Approx(f * base[k]).epsilon(1e-10).scale(1.0));

    // symmetric in its arguments
    Vec<double> swapped = second_fundamental_form_of_fields(sc, Y0, X0, FrameSlice::Top, x);
    for (int k = 0; k < 4; ++k)
        CHECK(swapped[k] == doctest::Approx(base[k]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("project splits vectors along the distribution pair") {
    Scenario sc = build_preset("warped_torus");
    Vec<double> x(2);
    x[0] = 1.2;
    x[1] = 0.3;
    Vec<double> v(2);
    v[0] = 1.0;
    v[1] = 1.0;
    Vec<double> t = project(sc, v, FrameSlice::Top, x);
    Vec<double> b = project(sc, v, FrameSlice::Bot, x);
    CHECK(t[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(t[1] == doctest::Approx(0.0).epsilon(1e-13).scale(1.0));
    CHECK(b[0] == doctest::Approx(0.0).epsilon(1e-13).scale(1.0));
    CHECK(b[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("classify reports the expected deviations per preset") {
    SplitMix64 rng(21);
    auto sample = [&](const Scenario& sc) {
        std::vector<Vec<double>> pts;
        for (int i = 0; i < 6; ++i) pts.push_back(testutil::random_point(sc, rng));
        return pts;
    };

    Scenario warped = build_preset("warped_torus");
    ClassifyResult cw = classify(warped, sample(warped));
    CHECK(cw.top.geodesic_deviation < 1e-11);
    CHECK(cw.top.integrability_deviation < 1e-11);
    CHECK(cw.bot.integrability_deviation < 1e-11);
    CHECK(cw.bot.geodesic_deviation > 1e-3);
    CHECK(cw.bot.umbilical_deviation < 1e-11);

    Scenario hopf = build_preset("hopf_s3");
    ClassifyResult ch = classify(hopf, sample(hopf));
    CHECK(ch.top.geodesic_deviation < 1e-10);
    CHECK(ch.bot.geodesic_deviation < 1e-10);
    CHECK(ch.bot.integrability_deviation > 0.5);

    Scenario t4 = testutil::torus4();
    ClassifyResult c4 = classify(t4, sample(t4));
    CHECK(c4.top.integrability_deviation > 1e-3);
}

TEST_CASE("mean curvature gradient vanishes exactly on the flat torus") {
    Scenario sc = build_preset("flat_torus");
    Vec<double> x(2);
    x[0] = 0.8;
    x[1] = 2.2;
    MeanCurvatureGradient mg = mean_curvature_gradient(sc, x);
    CHECK(mg.max_norm_top == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
    CHECK(mg.max_norm_bot == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
}

TEST_CASE("mean curvature gradient matches the warped-product derivative") {
    Scenario sc = build_preset("warped_torus");
    Vec<double> x(2);
    x[0] = 0.6;
    x[1] = 1.9;
    MeanCurvatureGradient mg = mean_curvature_gradient(sc, x);
    // H_bot = -(u'/u) d_x and nabla_{d_x} d_x = 0, so the top-projected
    // derivative along x1 is -(u'/u)' d_x.
    double u = 2.0 + std::sin(x[0]), du = std::cos(x[0]), ddu = -std::sin(x[0]);
    double expect = -(ddu / u - du * du / (u * u));
    CHECK(mg.dH_bot_top[0][0] == doctest::Approx(expect).epsilon(1e-11));
    CHECK(mg.max_norm_bot > 1e-3);
}
