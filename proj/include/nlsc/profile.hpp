#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace nlsc {

// Dense radial profile produced by an ODE integration in the regularized
// variable v(r) = r^rho q(r).  Evaluation uses cubic Hermite interpolation on
// the stored mesh (values and derivatives), the exact power behavior below
// the first mesh point, and an exponential far-field continuation
// q(r) = q_tail (r_tail/r)^{(d-1)/2} e^{-(r - r_tail)} beyond r_tail.
struct RadialProfile {
    int d = 0;
    double rho = 0.0;
    std::vector<double> r, v, dv;
    double r_tail = 0.0;
    double q_tail = 0.0;

    double value(double rr) const {
        if (rr >= r_tail)
            return q_tail * std::pow(r_tail / rr, 0.5 * (d - 1)) * std::exp(-(rr - r_tail));
        if (rr <= r.front()) return v.front() * std::pow(rr, -rho);
        auto it = std::upper_bound(r.begin(), r.end(), rr);
        const auto i = static_cast<size_t>(it - r.begin()) - 1;
        const double hseg = r[i + 1] - r[i];
        const double t = (rr - r[i]) / hseg;
        const double t2 = t * t, t3 = t2 * t;
        const double vv = (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * hseg * dv[i] +
                          (-2 * t3 + 3 * t2) * v[i + 1] + (t3 - t2) * hseg * dv[i + 1];
        return vv * std::pow(rr, -rho);
    }
};

}  // namespace nlsc
