#include "damctl/exact.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace damctl {

namespace {

constexpr int kMaxLevels = 100'000; // recurrence is O(L^2)
constexpr double kRescaleThreshold = 0x1p512;
constexpr double kRescaleFactor = 0x1p-512;
const double kLogRescale = 512.0 * std::log(2.0);

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

DamModelParams::DamModelParams(double lambda, DistributionSpec b1, DistributionSpec b2,
                               int levels, double j1, double j2)
    : lambda_(lambda),
      b1_(std::move(b1)),
      b2_(std::move(b2)),
      levels_(levels),
      j1_(j1),
      j2_(j2) {
    if (lambda_ <= 0.0) throw DomainError("arrival rate must be positive");
    if (levels_ < 1) throw DomainError("level count must be at least 1");
    if (levels_ > kMaxLevels)
        throw DomainError("level count above the practical cap " +
                          std::to_string(kMaxLevels));
    if (j1_ < 0.0 || j2_ < 0.0) throw DomainError("penalty coefficients must be >= 0");
    if (rho2() >= 1.0)
        throw DomainError("above-band service must satisfy rho_2 < 1 (got " +
                          fmt(rho2()) + ")");
}

double DamModelParams::rho1() const { return lambda_ * b1_.mean(); }
double DamModelParams::rho2() const { return lambda_ * b2_.mean(); }

double BusyPeriodTable::count(int n) const {
    return counts[n] * std::exp(log_scale);
}

double BusyPeriodTable::count_log(int n) const {
    return std::log(counts[n]) + log_scale;
}

BusyPeriodTable busy_counts(const DistributionSpec& b1, double lambda, int L,
                            bool log_scaling) {
    if (L < 1) throw DomainError("level count must be at least 1");
    if (L > kMaxLevels)
        throw DomainError("level count above the practical cap " +
                          std::to_string(kMaxLevels));
    const MixedPoissonWeights w = poisson_weights(b1, lambda, L + 1);
    const auto& r = w.weights();

    BusyPeriodTable table;
    table.counts.assign(static_cast<std::size_t>(L) + 1, 0.0);
    table.counts[0] = 1.0;
    // Evnu_n = sum_{j=0}^{n} Evnu_{n-j+1} r_j, solved for the top term.
    for (int n = 0; n < L; ++n) {
        double acc = table.counts[n];
        for (int j = 1; j <= n; ++j) acc -= table.counts[n - j + 1] * r[j];
        double next = acc / r[0];
        if (!std::isfinite(next))
            throw OverflowError("busy-period counts exceeded the floating range at n=" +
                                std::to_string(n + 1));
        table.counts[n + 1] = next;
        if (next >= kRescaleThreshold) {
            if (!log_scaling)
                throw OverflowError(
                    "busy-period counts exceeded the scaling threshold at n=" +
                    std::to_string(n + 1) + " with log-scaling disabled");
            for (int i = 0; i <= n + 1; ++i) table.counts[i] *= kRescaleFactor;
            table.log_scale += kLogRescale;
        }
    }
    return table;
}

double expected_cycle_services(const DamModelParams& model) {
    return std::exp(expected_cycle_services_log(model));
}

double expected_b2_services(const DamModelParams& model) {
    BusyPeriodTable table = busy_counts(model.b1(), model.lambda(), model.levels());
    double enu1 = table.count(model.levels());
    return 1.0 / (1.0 - model.rho2()) -
           (1.0 - model.rho1()) / (1.0 - model.rho2()) * enu1;
}

double expected_busy_time(const DamModelParams& model) {
    BusyPeriodTable table = busy_counts(model.b1(), model.lambda(), model.levels());
    double enu1 = table.count(model.levels());
    double enu2 = 1.0 / (1.0 - model.rho2()) -
                  (1.0 - model.rho1()) / (1.0 - model.rho2()) * enu1;
    return (model.rho1() * enu1 + model.rho2() * enu2) / model.lambda();
}

double expected_idle_time(const DamModelParams& model) {
    return 1.0 / model.lambda();
}

double expected_cycle_services_log(const DamModelParams& model) {
    BusyPeriodTable table = busy_counts(model.b1(), model.lambda(), model.levels());
    double rho1 = model.rho1();
    double rho2 = model.rho2();
    int L = model.levels();
    // Evnu_L = (1 + (rho1 - rho2) Evnu_L^(1)) / (1 - rho2), in scaled space.
    double scaled = std::exp(-table.log_scale) + (rho1 - rho2) * table.counts[L];
    return std::log(scaled / (1.0 - rho2)) + table.log_scale;
}

StationaryResult stationary(const DamModelParams& model) {
    BusyPeriodTable table = busy_counts(model.b1(), model.lambda(), model.levels());
    return stationary(model, table);
}

StationaryResult stationary(const DamModelParams& model, const BusyPeriodTable& table) {
    const int L = model.levels();
    if (table.levels() != L)
        throw DomainError("busy-period table has " + std::to_string(table.levels()) +
                          " levels, model has " + std::to_string(L));
    const double rho1 = model.rho1();
    const double rho2 = model.rho2();
    // Everything is a ratio against 1 + (rho1 - rho2) Evnu_L; dividing the
    // numerators and the denominator by the running scale keeps all terms
    // representable however large the raw counts are.
    const double inv_scale = std::exp(-table.log_scale);
    const double denom = inv_scale + (rho1 - rho2) * table.counts[L];

    StationaryResult res;
    res.p1 = (1.0 - rho2) * inv_scale / denom;
    res.p2 = (rho2 * inv_scale + rho2 * (rho1 - 1.0) * table.counts[L]) / denom;
    res.q.resize(L);
    const double qfactor = rho1 * (1.0 - rho2) / denom;
    double qsum = 0.0, comp = 0.0;
    for (int i = 1; i <= L; ++i) {
        // increments below the rounding floor can come out as -1 ulp noise
        double qi = std::max(0.0, qfactor * table.increment(i));
        res.q[i - 1] = qi;
        double y = qi - comp; // Kahan: L may reach 1e5
        double t = qsum + y;
        comp = (t - qsum) - y;
        qsum = t;
    }
    res.defect = 1.0 - (res.p1 + res.p2 + qsum);
    return res;
}

StationaryResult StationaryResult::renormalized() const {
    StationaryResult out = *this;
    double total = p1 + p2;
    for (double qi : q) total += qi;
    out.p1 /= total;
    out.p2 /= total;
    for (double& qi : out.q) qi /= total;
    out.defect = 0.0;
    return out;
}

double objective_exact(const DamModelParams& model, const CostModel& costs) {
    StationaryResult st = stationary(model);
    const int L = model.levels();
    double j = st.p1 * model.penalty_lower() + st.p2 * model.penalty_upper();
    double csum = 0.0, comp = 0.0;
    for (int i = 1; i <= L; ++i) {
        double term = st.q[i - 1] * cost_at(costs, i, L);
        double y = term - comp;
        double t = csum + y;
        comp = (t - csum) - y;
        csum = t;
    }
    return j + csum;
}

} // namespace damctl
