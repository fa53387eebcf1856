#include "mixedcurv/contorsion.hpp"

#include <algorithm>

namespace mixedcurv {

ConnectionClassReport classify_connection(const Scenario& sc,
                                          const std::vector<Vec<double>>& points) {
    ConnectionClassReport rep;
    const int d = sc.dim();
    for (const auto& x : points) {
        Mat<double> g = metric_at(sc, x);
        Ten3<double> C = lower_first_index(g, contorsion_mixed_at(sc, x));
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n) {
                    double c = C(l, m, n);
                    rep.max_abs = std::max(rep.max_abs, std::abs(c));
                    rep.metric_compat_dev =
                        std::max(rep.metric_compat_dev, std::abs(c + C(n, m, l)));
                    // statistical: T-hat = T and T^* = T, i.e. symmetry in
                    // (m,n) and in (l,n), hence full symmetry.
                    rep.statistical_dev = std::max(
                        rep.statistical_dev,
                        std::max(std::abs(c - C(l, n, m)), std::abs(c - C(n, m, l))));
                }
    }
    return rep;
}

}  // namespace mixedcurv
