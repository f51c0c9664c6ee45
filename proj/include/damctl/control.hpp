#pragma once

#include <functional>
#include <string>
#include <vector>

#include "damctl/asympt.hpp"

namespace damctl {

enum class Regime { Balanced, Upper, Lower };

std::string to_string(Regime r);

struct ScalarMinimum {
    double argmin = 0.0;
    double value = 0.0;
};

/// Coarse grid scan (64 points, geometric + linear mix) followed by
/// golden-section refinement on the best bracket. Argmins below tol snap
/// to C = 0 exactly.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double c_max,
                              double tol);

struct ControlSolution {
    Regime regime = Regime::Balanced;
    double C = 0.0; // optimal control parameter; 0 in the balanced regime
    double objective = 0.0;
    ScalarMinimum upper_min;
    ScalarMinimum lower_min;
    double balanced_value = 0.0;
};

/// Minimizes both regime functionals and applies the decision rule: the
/// balanced output is optimal iff both minima sit at C = 0.
ControlSolution solve(const RegimeParams& p, double c_max = 50.0, double tol = 1e-4);

struct SweepRow {
    double j2 = 0.0;
    Regime regime = Regime::Balanced;
    double C = 0.0;
    double objective = 0.0;
};

/// One solve per j2 value; rows may be evaluated concurrently but are
/// returned in input order.
std::vector<SweepRow> sweep_j2(const RegimeParams& p, const std::vector<double>& j2_values,
                               double c_max = 50.0, double tol = 1e-4);

/// Smallest j2 (other parameters fixed, p.j2 ignored) at which the solution
/// stops being the upper regime, i.e. where the balanced band opens.
/// Bisection on [j1, j1 + 10] to 1e-3.
double threshold_j2(const RegimeParams& p, double c_max = 50.0, double tol = 1e-4);

} // namespace damctl
