#include "damctl/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "damctl/parallel.hpp"

namespace damctl {

namespace {

constexpr double kThresholdTol = 1e-3;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Balanced: return "balanced";
        case Regime::Upper: return "upper";
        case Regime::Lower: return "lower";
    }
    return "?";
}

ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double c_max,
                              double tol) {
    if (c_max <= 0.0) throw DomainError("c_max must be positive");
    if (tol <= 0.0) throw DomainError("tol must be positive");

    // 64 probes: 0, a geometric ladder resolving the near-boundary decades,
    // and a linear fill of the rest of the interval.
    std::vector<double> pts;
    pts.reserve(64);
    pts.push_back(0.0);
    for (int i = 0; i < 32; ++i)
        pts.push_back(c_max * std::pow(10.0, -5.0 * double(31 - i) / 31.0));
    for (int i = 1; i < 32; ++i) pts.push_back(c_max * double(i) / 31.0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::size_t best = 0;
    const double f_origin = f(pts[0]);
    double fbest = f_origin;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double fi = f(pts[i]);
        if (fi < fbest) {
            fbest = fi;
            best = i;
        }
    }
    double a = best > 0 ? pts[best - 1] : pts[0];
    double b = best + 1 < pts.size() ? pts[best + 1] : pts.back();

    // Golden-section on [a, b].
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    double xmin = f1 < f2 ? x1 : x2;
    double fmin = std::min(f1, f2);
    if (fbest < fmin) { // grid point can beat the refined bracket interior
        xmin = pts[best];
        fmin = fbest;
    }
    // boundary minimizers snap to C = 0 exactly; flat stretches count as
    // boundary rather than a phantom interior point
    if (xmin < tol || f_origin <= fmin) return {0.0, f_origin};
    return {xmin, fmin};
}

ControlSolution solve(const RegimeParams& p, double c_max, double tol) {
    ControlSolution sol;
    sol.balanced_value = balanced_limit(p);
    sol.upper_min = minimize_scalar([&p](double C) { return j_upper(p, C); }, c_max, tol);
    sol.lower_min = minimize_scalar([&p](double C) { return j_lower(p, C); }, c_max, tol);

    bool upper_interior = sol.upper_min.argmin > tol;
    bool lower_interior = sol.lower_min.argmin > tol;
    if (upper_interior && lower_interior) {
        if (std::abs(sol.upper_min.value - sol.lower_min.value) < tol)
            throw AmbiguityError("both regime functionals have interior minima of "
                                 "equal value (upper C=" +
                                 fmt(sol.upper_min.argmin) +
                                 ", lower C=" + fmt(sol.lower_min.argmin) + ")");
        upper_interior = sol.upper_min.value < sol.lower_min.value;
        lower_interior = !upper_interior;
    }
    if (upper_interior) {
        sol.regime = Regime::Upper;
        sol.C = sol.upper_min.argmin;
        sol.objective = sol.upper_min.value;
    } else if (lower_interior) {
        sol.regime = Regime::Lower;
        sol.C = sol.lower_min.argmin;
        sol.objective = sol.lower_min.value;
    } else {
        sol.regime = Regime::Balanced;
        sol.C = 0.0;
        sol.objective = sol.balanced_value;
    }
    return sol;
}

std::vector<SweepRow> sweep_j2(const RegimeParams& p, const std::vector<double>& j2_values,
                               double c_max, double tol) {
    if (j2_values.empty()) throw DomainError("sweep needs at least one j2 value");
    std::vector<SweepRow> rows(j2_values.size());
    parallel_for(j2_values.size(), [&](std::size_t i) {
        RegimeParams q = p;
        q.j2 = j2_values[i];
        ControlSolution sol = solve(q, c_max, tol);
        rows[i] = {q.j2, sol.regime, sol.C, sol.objective};
    });
    return rows;
}

double threshold_j2(const RegimeParams& p, double c_max, double tol) {
    // The balanced band opens where the upper functional's minimizer reaches
    // C = 0; that onset is monotone in j2 while "regime == balanced" itself
    // is a thin band and cannot drive a bisection.
    auto upper_at = [&](double j2) {
        RegimeParams q = p;
        q.j2 = j2;
        return solve(q, c_max, tol).regime == Regime::Upper;
    };
    double lo = p.j1;
    double hi = p.j1 + 10.0;
    if (!upper_at(lo)) return lo; // already balanced (or lower) at the scan start
    if (upper_at(hi))
        throw BracketError("upper regime persists on j2 in [" + fmt(lo) + ", " +
                           fmt(hi) + "]");
    while (hi - lo > kThresholdTol) {
        double mid = 0.5 * (lo + hi);
        (upper_at(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace damctl
