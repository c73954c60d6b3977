#include "fixpoint/search.hpp"

#include <cmath>

namespace fixpoint {

MinimizeResult minimize_on_interval(const std::function<double(double)>& f, double a, double b,
                                    int iterations) {
    MinimizeResult best;
    best.x = a;
    best.value = f(a);
    auto consider = [&best, &f](double x) {
        double v = f(x);
        if (v < best.value) {
            best.value = v;
            best.x = x;
        }
        return v;
    };
    consider(b);
    for (int i = 0; i < iterations && b - a > 0.0; ++i) {
        double m1 = a + (b - a) / 3.0;
        double m2 = b - (b - a) / 3.0;
        if (m1 >= m2) break;
        if (consider(m1) < consider(m2)) {
            b = m2;
        } else {
            a = m1;
        }
    }
    return best;
}

double bisect_sign_change(const std::function<double(double)>& h, double a, double b,
                          int iterations) {
    double ha = h(a);
    double hb = h(b);
    double best_x = std::fabs(ha) <= std::fabs(hb) ? a : b;
    double best_v = std::fabs(ha) <= std::fabs(hb) ? std::fabs(ha) : std::fabs(hb);
    for (int i = 0; i < iterations && b - a > 0.0; ++i) {
        double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        double hm = h(mid);
        if (std::fabs(hm) < best_v) {
            best_v = std::fabs(hm);
            best_x = mid;
        }
        if ((ha <= 0.0) == (hm <= 0.0)) {
            a = mid;
            ha = hm;
        } else {
            b = mid;
            hb = hm;
        }
    }
    return best_x;
}

}  // namespace fixpoint
