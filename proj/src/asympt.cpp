#include "damctl/asympt.hpp"

#include <cmath>

namespace damctl {

namespace {

// x / (e^x - 1), continuous through x = 0.
double penalty_kernel(double x) {
    if (std::abs(x) < 1e-5) return 1.0 - x / 2.0 + x * x / 12.0;
    return x / std::expm1(x);
}

} // namespace

RegimeParams::RegimeParams(double j1_, double j2_, double rho2_, double rho12_,
                           CostModel costs_)
    : j1(j1_), j2(j2_), rho2(rho2_), rho12(rho12_), costs(std::move(costs_)) {
    if (j1 < 0.0 || j2 < 0.0) throw DomainError("penalty coefficients must be >= 0");
    if (!(rho2 > 0.0 && rho2 < 1.0)) throw DomainError("rho2 must lie in (0,1)");
    if (rho12 <= 0.0) throw DomainError("rho12 must be positive");
}

double balanced_limit(const RegimeParams& p) {
    return p.j1 * p.rho12 / 2.0 +
           p.j2 * (p.rho2 / (1.0 - p.rho2)) * p.rho12 / 2.0 + c_star(p.costs);
}

double j_upper(const RegimeParams& p, double C) {
    if (C < 0.0) throw DomainError("C must be nonnegative");
    double x = 2.0 * C / p.rho12;
    double g = penalty_kernel(x);
    // C j1/(e^x-1) = j1 (rho12/2) g;  C j2 rho2 e^x/((1-rho2)(e^x-1)) mirrors it.
    double penalties = 0.5 * p.rho12 * g *
                       (p.j1 + p.j2 * p.rho2 / (1.0 - p.rho2) * std::exp(x));
    return penalties + psi(p.costs, C, p.rho12);
}

double j_lower(const RegimeParams& p, double C) {
    if (C < 0.0) throw DomainError("C must be nonnegative");
    double x = 2.0 * C / p.rho12;
    double g = penalty_kernel(x);
    double penalties = 0.5 * p.rho12 * g *
                       (p.j1 * std::exp(x) + p.j2 * p.rho2 / (1.0 - p.rho2));
    return penalties + eta(p.costs, C, p.rho12);
}

double j_lower_paper_literal(const RegimeParams& p, double C) {
    if (C <= 0.0) throw DomainError("the literal form is undefined at C = 0");
    double e = std::exp(p.rho12 / (2.0 * C));
    double penalties = C * (p.j1 * e + p.j2 * p.rho2 / (1.0 - p.rho2) * (e - 1.0));
    return penalties + eta(p.costs, C, p.rho12);
}

double q_upper_approx(double delta, double C, double rho12, int j) {
    if (delta <= 0.0) throw DomainError("delta must be positive");
    if (C <= 0.0) throw DomainError("C must be positive");
    if (rho12 <= 0.0) throw DomainError("rho12 must be positive");
    double step = 2.0 * delta / rho12;
    if (step >= 1.0) throw DomainError("2 delta / rho12 must be below 1");
    double x = 2.0 * C / rho12;
    double ex = std::exp(x);
    return ex / (ex - 1.0) * std::pow(1.0 - step, j) * step;
}

double q_lower_approx(double delta, double C, double rho12, int j) {
    if (delta <= 0.0) throw DomainError("delta must be positive");
    if (C <= 0.0) throw DomainError("C must be positive");
    if (rho12 <= 0.0) throw DomainError("rho12 must be positive");
    double step = 2.0 * delta / rho12;
    double x = 2.0 * C / rho12;
    return step / std::expm1(x) * std::pow(1.0 + step, j);
}

} // namespace damctl
