#pragma once

// Hypothesis predicates of the splitting and nonexistence results and the
// numerical splitting verdict. Predicates are evaluated over a grid; the
// analytic assumptions that cannot be checked on a chart (completeness,
// L1 bounds on mean-curvature fields) are surfaced as explicit
// unverified-assumption entries instead of being silently assumed.

#include "mixedcurv/identities.hpp"

namespace mixedcurv {

struct TheoremCheck {
    std::string id;
    bool applicable = false;
    std::vector<std::string> failing;     // predicates out of tolerance
    std::string sign_condition;           // e.g. "bar_s_mix >= 0"
    bool sign_met = false;
    std::vector<std::string> unverified;  // assumptions beyond numerical reach
};

struct SplittingReport {
    // Worst deviations over the grid.
    double mixed_ai = 0.0;
    double cond4 = 0.0;
    double cond5 = 0.0;
    double cond_hht = 0.0;
    double cross_pairing = 0.0;  // |g(Ht_T, Hb_Ts) + g(Hb_T, Ht_Ts)|
    double umbilical_top = 0.0, umbilical_bot = 0.0;
    double h_top_max = 0.0, h_bot_max = 0.0;
    double t_top_max = 0.0, t_bot_max = 0.0;
    double H_top_max = 0.0, H_bot_max = 0.0;
    double s_bar_min = 0.0, s_bar_max = 0.0;
    std::vector<TheoremCheck> theorems;
};

SplittingReport check_hypotheses(const Scenario& sc, const QuadratureGrid& grid);

struct SplitVerdict {
    bool splits = false;
    std::vector<std::string> obstructions;  // nonzero tensors, e.g. "h_bot"
};

// splits iff max(|h_top|, |h_bot|, |T_top|, |T_bot|) < 1e-7 over the grid.
SplitVerdict verify_splitting(const Scenario& sc, const QuadratureGrid& grid);

}  // namespace mixedcurv
