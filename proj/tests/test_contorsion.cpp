#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mixedcurv/contorsion.hpp"
#include "helpers.hpp"

using namespace mixedcurv;
using testutil::SplitMix64;

namespace {

double max_diff(const Ten3<double>& a, const Ten3<double>& b) {
    double m = 0.0;
    for (int l = 0; l < a.n; ++l)
        for (int i = 0; i < a.n; ++i)
            for (int j = 0; j < a.n; ++j) m = std::max(m, std::abs(a(l, i, j) - b(l, i, j)));
    return m;
}

double max_diff4(const Ten4<double>& a, const Ten4<double>& b) {
    double m = 0.0;
    for (int l = 0; l < a.n; ++l)
        for (int s = 0; s < a.n; ++s)
            for (int i = 0; i < a.n; ++i)
                for (int j = 0; j < a.n; ++j)
                    m = std::max(m, std::abs(a(l, s, i, j) - b(l, s, i, j)));
    return m;
}

}  // namespace

TEST_CASE("lower/raise first index round trips") {
    Scenario sc = testutil::torus2_contorsion();
    SplitMix64 rng(3);
    Vec<double> x = testutil::random_point(sc, rng);
    Mat<double> g = metric_at(sc, x);
    Mat<double> ginv = inverse(g);
    Ten3<double> mixed = contorsion_mixed_at(sc, x);
    Ten3<double> lower = lower_first_index(g, mixed);
    Ten3<double> back = raise_first_index(ginv, lower);
    CHECK(max_diff(mixed, back) < 1e-13);
}

TEST_CASE("conjugation operators are involutive and commute as permutations") {
    Scenario sc = testutil::torus4_contorsion();
    SplitMix64 rng(5);
    Vec<double> x = testutil::random_point(sc, rng);
    Ten3<double> C = lower_first_index(metric_at(sc, x), contorsion_mixed_at(sc, x));

    Ten3<double> star = conjugate_lower(C, Conjugate::Star);
    Ten3<double> hat = conjugate_lower(C, Conjugate::Hat);
    CHECK(max_diff(conjugate_lower(star, Conjugate::Star), C) < 1e-15);
    CHECK(max_diff(conjugate_lower(hat, Conjugate::Hat), C) < 1e-15);
    // hat-star composites match the direct permutations
    CHECK(max_diff(conjugate_lower(hat, Conjugate::Star), conjugate_lower(C, Conjugate::HatStar)) <
          1e-15);
    CHECK(max_diff(conjugate_lower(star, Conjugate::Hat), conjugate_lower(C, Conjugate::StarHat)) <
          1e-15);
}

TEST_CASE("skew preset is metric compatible with T* = -T") {
    Scenario sc = build_preset("skew_contorsion_t3");
    SplitMix64 rng(7);
    std::vector<Vec<double>> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(testutil::random_point(sc, rng));
    ConnectionClassReport rep = classify_connection(sc, pts);
    CHECK(rep.max_abs == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.metric_compat_dev < 1e-13);
    CHECK(rep.statistical_dev > 0.1);

    Ten3<double> C = lower_first_index(metric_at(sc, pts[0]), contorsion_mixed_at(sc, pts[0]));
    Ten3<double> minus_star = conjugate_lower(C, Conjugate::Star);
    for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n)
                CHECK(C(l, m, n) == doctest::Approx(-minus_star(l, m, n)).epsilon(1e-13).scale(1.0));
}

TEST_CASE("statistical preset has a fully symmetric lower tensor") {
    Scenario sc = build_preset("statistical_torus");
    SplitMix64 rng(9);
    std::vector<Vec<double>> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(testutil::random_point(sc, rng));
    ConnectionClassReport rep = classify_connection(sc, pts);
    CHECK(rep.statistical_dev < 1e-13);
    CHECK(rep.max_abs == doctest::Approx(0.3).epsilon(1e-12));

    // every conjugate equals the tensor itself
    Ten3<double> C = lower_first_index(metric_at(sc, pts[0]), contorsion_mixed_at(sc, pts[0]));
    for (auto which : {Conjugate::Star, Conjugate::Hat, Conjugate::HatStar, Conjugate::StarHat})
        CHECK(max_diff(C, conjugate_lower(C, which)) < 1e-14);
}

TEST_CASE("misdeclared contorsion class is rejected at load time") {
    // skew tensor declared statistical
    CHECK_THROWS_AS(load_scenario_json(R"({
      "name": "bad-class",
      "dims": {"top": 1, "bot": 1},
      "chart": {"ranges": [[0,6.283185307179586],[0,6.283185307179586]], "periodic": [true,true]},
      "metric": {"components": [["1","0"],["0","1"]]},
      "distribution_top": [["1","0"]],
      "contorsion": {
        "components": [[["0","1"],["0","0"]],[["0","0"],["-1","0"]]],
        "lower_indices": true,
        "class": "statistical"
      }
    })"),
                    MisdeclaredClassError);
}

TEST_CASE("deformed curvature: coefficient route equals contorsion expansion route") {
    SplitMix64 rng(11);
    std::vector<Scenario> zoo;
    zoo.push_back(build_preset("skew_contorsion_t3"));
    zoo.push_back(build_preset("statistical_torus"));
    zoo.push_back(build_preset("doubly_twisted", {{"tau_b", 0.2}, {"tau_f", -0.15}}));
    zoo.push_back(testutil::torus4_contorsion());
    zoo.push_back(testutil::torus2_contorsion());
    for (const Scenario& sc : zoo) {
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            Vec<double> x = testutil::random_point(sc, rng);
            Ten4<double> direct = bar_riemann_direct(sc, x);
            Ten4<double> expanded = bar_riemann_from_contorsion(sc, x);
            worst = std::max(worst, max_diff4(direct, expanded));
        }
        INFO("scenario " << sc.name);
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("nabla T contracts like a tensor derivative") {
    // Leibniz check against finite differences of the frame-contracted
    // scalar g(T_V W, U) with parallel-transport corrections folded in by
    // the covariant derivative itself: compare (nabla_r T)^l_{mn} with the
    // FD derivative of the mixed components plus Gamma corrections.
    Scenario sc = testutil::torus2_contorsion();
    SplitMix64 rng(13);
    Vec<double> x = testutil::random_point(sc, rng);
    ContorsionJet<double> cj = contorsion_jet_at(sc, x);
    Ten3<double> gamma = christoffel_at(sc, x);
    const int d = 2;
    for (int r = 0; r < d; ++r)
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    double fd = testutil::fd_partial(
                        [&](const Vec<double>& p) { return contorsion_mixed_at(sc, p)(l, m, n); },
                        x, r);
                    for (int s = 0; s < d; ++s)
                        fd += gamma(l, r, s) * cj.mixed(s, m, n) -
                              gamma(s, r, m) * cj.mixed(l, s, n) -
                              gamma(s, r, n) * cj.mixed(l, m, s);
                    CHECK(cj.nabla(l, m, n, r) == doctest::Approx(fd).epsilon(1e-8).scale(1.0));
                }
}

TEST_CASE("contorsion traces and the deformed mean curvature") {
    Scenario sc = build_preset("statistical_torus");
    SplitMix64 rng(17);
    Vec<double> x = testutil::random_point(sc, rng);
    ExtrinsicData<double> ex = extrinsic_at(sc, x);
    Ten3<double> mixed = contorsion_mixed_at(sc, x);

    Vec<double> Ht = contorsion_trace(ex.frame, mixed, FrameSlice::Top);
    Vec<double> Hb = contorsion_trace(ex.frame, mixed, FrameSlice::Bot);
    // statistical_torus on the flat chart: H^top_T = (0, c), c = 0.3
    CHECK(Ht[0] == doctest::Approx(0.0).epsilon(1e-13).scale(1.0));
    CHECK(Ht[1] == doctest::Approx(0.3).epsilon(1e-13));

    BarExtrinsic<double> bar = bar_extrinsic(sc, ex, mixed);
    // H-bar = H + (H_T)^perp
    Vec<double> expect_top = ex.H_top + ex.frame.project_bot(Ht);
    Vec<double> expect_bot = ex.H_bot + ex.frame.project_top(Hb);
    for (int k = 0; k < 2; ++k) {
        CHECK(bar.H_top[k] == doctest::Approx(expect_top[k]).epsilon(1e-13).scale(1.0));
        CHECK(bar.H_bot[k] == doctest::Approx(expect_bot[k]).epsilon(1e-13).scale(1.0));
    }
}

TEST_CASE("contorsion_apply agrees with direct index contraction") {
    Scenario sc = testutil::torus4_contorsion();
    SplitMix64 rng(19);
    Vec<double> x = testutil::random_point(sc, rng);
    Ten3<double> mixed = contorsion_mixed_at(sc, x);
    Vec<double> X(4), Y(4);
    for (int k = 0; k < 4; ++k) {
        X[k] = rng.uniform(-1.0, 1.0);
        Y[k] = rng.uniform(-1.0, 1.0);
    }
    Vec<double> out = contorsion_apply(mixed, X, Y);
    for (int l = 0; l < 4; ++l) {
        double sum = 0.0;
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) sum += mixed(l, m, n) * X[m] * Y[n];
        CHECK(out[l] == doctest::Approx(sum).epsilon(1e-14).scale(1.0));
    }
}
