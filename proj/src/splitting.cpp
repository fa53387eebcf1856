#include "mixedcurv/splitting.hpp"

#include <algorithm>

namespace mixedcurv {

namespace {

constexpr double kPredicateTol = 1e-10;
constexpr double kSignSlack = 1e-9;
constexpr double kSplitTol = 1e-7;

struct NodeScan {
    SplittingReport rep;
    bool first = true;

    void absorb(const Scenario& sc, const Vec<double>& x) {
        GeomPoint<double> gp = geom_point(sc, x);
        const AdaptedFrame<double>& fr = gp.frame();

        Vec<double> ai = 2.0 * gp.ex.H_top - fr.project_bot(gp.Ht_Ts - gp.Ht_T);
        rep.mixed_ai = std::max(rep.mixed_ai, frobenius_vec(fr, ai));

        for (int a = 0; a < fr.n_top; ++a)
            for (int i = 0; i < fr.n_bot; ++i)
                for (const Ten3<double>* t : {&gp.T, &gp.Tstar})
                    rep.cond4 = std::max(
                        {rep.cond4,
                         frobenius_vec(fr, contorsion_apply(*t, fr.top(a), fr.bot(i))),
                         frobenius_vec(fr, contorsion_apply(*t, fr.bot(i), fr.top(a)))});

        rep.cond5 = std::max(rep.cond5,
                             std::abs(fr.inner(gp.Ht_T - gp.Ht_Ts, gp.ex.H_bot)));
        for (const Vec<double>* v : {&gp.Ht_T, &gp.Hb_T, &gp.Ht_Ts, &gp.Hb_Ts})
            rep.cond_hht = std::max(rep.cond_hht, frobenius_vec(fr, *v));
        rep.cross_pairing = std::max(rep.cross_pairing,
                                     std::abs(fr.inner(gp.Ht_T, gp.Hb_Ts) +
                                              fr.inner(gp.Hb_T, gp.Ht_Ts)));

        rep.H_top_max = std::max(rep.H_top_max, frobenius_vec(fr, gp.ex.H_top));
        rep.H_bot_max = std::max(rep.H_bot_max, frobenius_vec(fr, gp.ex.H_bot));
        for (int a = 0; a < fr.n_top; ++a)
            for (int b = 0; b < fr.n_top; ++b) {
                rep.h_top_max = std::max(rep.h_top_max, frobenius_vec(fr, gp.ex.h_top[a][b]));
                rep.t_top_max = std::max(rep.t_top_max, frobenius_vec(fr, gp.ex.T_top[a][b]));
                Vec<double> dev = gp.ex.h_top[a][b];
                if (a == b) dev = dev - (double(fr.eps_top(a)) / fr.n_top) * gp.ex.H_top;
                rep.umbilical_top = std::max(rep.umbilical_top, frobenius_vec(fr, dev));
            }
        for (int i = 0; i < fr.n_bot; ++i)
            for (int j = 0; j < fr.n_bot; ++j) {
                rep.h_bot_max = std::max(rep.h_bot_max, frobenius_vec(fr, gp.ex.h_bot[i][j]));
                rep.t_bot_max = std::max(rep.t_bot_max, frobenius_vec(fr, gp.ex.T_bot[i][j]));
                Vec<double> dev = gp.ex.h_bot[i][j];
                if (i == j) dev = dev - (double(fr.eps_bot(i)) / fr.n_bot) * gp.ex.H_bot;
                rep.umbilical_bot = std::max(rep.umbilical_bot, frobenius_vec(fr, dev));
            }

        double sbar = bar_mixed_scalar_from_riemann(fr, bar_riemann_direct(sc, x));
        if (first) {
            rep.s_bar_min = rep.s_bar_max = sbar;
            first = false;
        } else {
            rep.s_bar_min = std::min(rep.s_bar_min, sbar);
            rep.s_bar_max = std::max(rep.s_bar_max, sbar);
        }
    }
};

struct TheoremSpec {
    std::string id;
    // predicate name -> deviation accessor
    std::vector<std::pair<std::string, double SplittingReport::*>> needs;
    std::string sign_condition;  // ">=0", "<=0" or empty
    std::vector<std::string> unverified;
    bool twisted_only = false;
};

}  // namespace

SplittingReport check_hypotheses(const Scenario& sc, const QuadratureGrid& grid) {
    NodeScan scan;
    for (const auto& x : grid.nodes) scan.absorb(sc, x);
    SplittingReport& rep = scan.rep;

    const std::vector<TheoremSpec> specs = {
        {"harmonic-split",
         {{"mixed-ai", &SplittingReport::mixed_ai},
          {"cond4", &SplittingReport::cond4},
          {"cond5", &SplittingReport::cond5},
          {"integrable-top", &SplittingReport::t_top_max},
          {"integrable-bot", &SplittingReport::t_bot_max}},
         ">=0",
         {"leafwise L1 bound on the mean-curvature field", "completeness of the leaves"},
         false},
        {"harmonic-foliations-split",
         {{"cond4", &SplittingReport::cond4},
          {"harmonic-top", &SplittingReport::H_top_max},
          {"harmonic-bot", &SplittingReport::H_bot_max},
          {"integrable-top", &SplittingReport::t_top_max},
          {"integrable-bot", &SplittingReport::t_bot_max},
          {"cross-pairing", &SplittingReport::cross_pairing}},
         ">=0",
         {"L1 bound on the contorsion mean-vector field"},
         false},
        {"umbilical-split",
         {{"cond4", &SplittingReport::cond4},
          {"cond5", &SplittingReport::cond5},
          {"hht-b", &SplittingReport::cond_hht},
          {"umbilical-top", &SplittingReport::umbilical_top},
          {"umbilical-bot", &SplittingReport::umbilical_bot}},
         "<=0",
         {"L1 bound on H_top + H_bot"},
         false},
        {"twisted-fiber-split",
         {{"mixed-ai", &SplittingReport::mixed_ai}, {"cond5", &SplittingReport::cond5}},
         "<=0",
         {"completeness of the fibres", "fibrewise L1 bound on the mean-curvature field"},
         true},
        {"twisted-product-split",
         {{"cond5", &SplittingReport::cond5}, {"hht-b", &SplittingReport::cond_hht}},
         "<=0",
         {"L1 bound on H_top + H_bot"},
         true},
    };

    for (const auto& spec : specs) {
        TheoremCheck check;
        check.id = spec.id;
        check.sign_condition = "bar_s_mix " + spec.sign_condition;
        check.unverified = spec.unverified;
        if (spec.twisted_only && !sc.twisted_preset) {
            check.failing.push_back("twisted-preset");
        } else {
            for (const auto& [name, member] : spec.needs)
                if (rep.*member > kPredicateTol) check.failing.push_back(name);
        }
        check.sign_met = spec.sign_condition == ">=0" ? rep.s_bar_min >= -kSignSlack
                                                      : rep.s_bar_max <= kSignSlack;
        check.applicable = check.failing.empty() && check.sign_met;
        rep.theorems.push_back(std::move(check));
    }
    return rep;
}

SplitVerdict verify_splitting(const Scenario& sc, const QuadratureGrid& grid) {
    SplittingReport rep = check_hypotheses(sc, grid);
    SplitVerdict verdict;
    const std::pair<const char*, double> tensors[] = {
        {"h_top", rep.h_top_max},
        {"h_bot", rep.h_bot_max},
        {"T_top", rep.t_top_max},
        {"T_bot", rep.t_bot_max},
    };
    for (const auto& [name, dev] : tensors)
        if (dev >= kSplitTol) verdict.obstructions.push_back(name);
    verdict.splits = verdict.obstructions.empty();
    return verdict;
}

}  // namespace mixedcurv
