#pragma once

#include <vector>

#include "damctl/costs.hpp"
#include "damctl/dists.hpp"

namespace damctl {

/// Full description of the dam in its queueing reading: Poisson(lambda)
/// inflow, service law b1 inside the band, b2 above it, L levels, and the
/// level-crossing penalty coefficients (J_k = j_k * L are derived).
class DamModelParams {
  public:
    DamModelParams(double lambda, DistributionSpec b1, DistributionSpec b2, int levels,
                   double j1, double j2);

    double lambda() const { return lambda_; }
    const DistributionSpec& b1() const { return b1_; }
    const DistributionSpec& b2() const { return b2_; }
    int levels() const { return levels_; }
    double j1() const { return j1_; }
    double j2() const { return j2_; }

    double rho1() const;
    double rho2() const;
    double penalty_lower() const { return j1_ * levels_; } // J_1
    double penalty_upper() const { return j2_ * levels_; } // J_2

  private:
    double lambda_;
    DistributionSpec b1_;
    DistributionSpec b2_;
    int levels_;
    double j1_;
    double j2_;
};

/// Expected services per busy period of M/GI/1/n for n = 0..L, stored as
/// mantissas relative to exp(log_scale) so supercritical growth never
/// overflows. Entries are strictly increasing (before scaling, counts[0]=1).
struct BusyPeriodTable {
    std::vector<double> counts;
    double log_scale = 0.0;

    int levels() const { return static_cast<int>(counts.size()) - 1; }

    /// True count Evnu_n; +inf if it exceeds the double range.
    double count(int n) const;
    /// log(Evnu_n), safe at any scale.
    double count_log(int n) const;
    /// Evnu_n - Evnu_{n-1} in mantissa units (shared scale).
    double increment(int n) const { return counts[n] - counts[n - 1]; }
};

/// Solves the busy-period count recurrence forward from Evnu_0 = 1.
/// With log_scaling disabled the raw values must fit in a double.
BusyPeriodTable busy_counts(const DistributionSpec& b1, double lambda, int L,
                            bool log_scaling = true);

/// Expected services (both laws) per busy cycle; 1/p1 by renewal reward.
double expected_cycle_services(const DamModelParams& model);
double expected_cycle_services_log(const DamModelParams& model);

/// Expected services under the above-band law per busy period.
double expected_b2_services(const DamModelParams& model);
/// Expected busy-period length, via Wald's identity on both service laws.
double expected_busy_time(const DamModelParams& model);
/// Expected idle period: one exponential interarrival.
double expected_idle_time(const DamModelParams& model);

/// The stationary formulas evaluated literally: they sum to 1 - rho1*p1,
/// and the shortfall is reported as `defect` rather than hidden.
struct StationaryResult {
    double p1 = 0.0;
    double p2 = 0.0;
    std::vector<double> q; // q[0] is level 1
    double defect = 0.0;

    /// Copy with (p1, p2, q) divided by their sum; defect becomes 0.
    StationaryResult renormalized() const;
};

StationaryResult stationary(const DamModelParams& model);
StationaryResult stationary(const DamModelParams& model, const BusyPeriodTable& table);

/// Long-run expense rate p1 J1 + p2 J2 + sum q_i c_i at this finite L.
double objective_exact(const DamModelParams& model, const CostModel& costs);

} // namespace damctl
