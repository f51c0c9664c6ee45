#pragma once

#include "damctl/costs.hpp"

namespace damctl {

/// Inputs of the heavy-traffic limit functionals. rho12 is the limit of
/// lambda^2 E[X^2] along the design family of normal-state service laws;
/// boundedness of the third scaled moment is assumed, not represented.
struct RegimeParams {
    double j1;
    double j2;
    double rho2;
    double rho12;
    CostModel costs;

    RegimeParams(double j1_, double j2_, double rho2_, double rho12_, CostModel costs_);
};

/// Limit of the objective when the service rates balance the inflow.
double balanced_limit(const RegimeParams& p);

/// Limit objective for the overloaded band (rho_1 = 1 + delta, L delta -> C).
/// Continuously extends to the balanced limit at C = 0.
double j_upper(const RegimeParams& p, double C);

/// Limit objective for the underloaded band (rho_1 = 1 - delta), in the
/// mirrored form that meets the balanced limit at C = 0.
double j_lower(const RegimeParams& p, double C);

/// The lower functional with its penalty exponents as printed in the source
/// material (rho12/2C); diverges as C -> 0. Kept for side-by-side comparison.
double j_lower_paper_literal(const RegimeParams& p, double C);

/// State-probability approximations q_{L-j} for the two unbalanced regimes.
double q_upper_approx(double delta, double C, double rho12, int j);
double q_lower_approx(double delta, double C, double rho12, int j);

} // namespace damctl
