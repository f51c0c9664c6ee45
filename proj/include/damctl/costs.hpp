#pragma once

#include <variant>
#include <vector>

#include "damctl/errors.hpp"

namespace damctl {

/// How a finite cost table extends as the level count grows.
enum class ExtensionRule {
    RepeatLast, // levels past the table reuse the last entry
    Stretch,    // the table is rescaled piecewise-linearly to length L
};

struct ConstantCost {
    double c;
};

struct LinearCost {
    double c_top;    // cost at level 1
    double c_bottom; // cost at level L
};

struct TableCost {
    std::vector<double> values; // positive, nonincreasing
    ExtensionRule rule;
};

/// Per-level water costs c_1 >= c_2 >= ... >= c_L > 0.
class CostModel {
  public:
    using Kind = std::variant<ConstantCost, LinearCost, TableCost>;

    explicit CostModel(Kind kind);

    static CostModel constant(double c);
    static CostModel linear(double c_top, double c_bottom);
    static CostModel table(std::vector<double> values, ExtensionRule rule);

    const Kind& kind() const { return kind_; }

  private:
    Kind kind_;
};

/// c_i for 1 <= i <= L under the model's extension convention.
double cost_at(const CostModel& costs, int i, int L);

/// Cesaro limit of the level-average cost.
double c_star(const CostModel& costs);

/// Backward generating cost function: sum_{j=0}^{L-1} c_{L-j} z^j.
double backward_cost_gen(const CostModel& costs, double z, int L);

/// Limit average cost weighting under the upper regime; psi(0) = c_star.
double psi(const CostModel& costs, double C, double rho12);

/// Limit average cost weighting under the lower regime; eta(0) = c_star.
double eta(const CostModel& costs, double C, double rho12);

/// Finite-L weighted-average proxies that the limits above are defined from.
double psi_finite(const CostModel& costs, double C, double rho12, int L);
double eta_finite(const CostModel& costs, double C, double rho12, int L);

} // namespace damctl
