#include "damctl/costs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>

namespace damctl {

namespace {

constexpr long long kCesaroEvalL = 10'000'000;
constexpr double kCesaroTol = 1e-6;
constexpr int kProxyEvalL = 100'000;
constexpr double kProxyTol = 1e-3;
constexpr double kKernelSeriesCut = 1e-4;

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// (e^x - 1 - x) / (x (e^x - 1)): the upper-regime averaging kernel.
// Equals 1/2 at x = 0 and decreases; series below the cut avoids 0/0.
double kernel_upper(double x) {
    if (std::abs(x) < kKernelSeriesCut)
        return 0.5 - x / 12.0 + x * x * x / 720.0;
    double em = std::expm1(x);
    return (em - x) / (x * em);
}

// (x - 1 + e^-x) / (x (1 - e^-x)): the lower-regime averaging kernel.
double kernel_lower(double x) {
    if (std::abs(x) < kKernelSeriesCut)
        return 0.5 + x / 12.0 - x * x * x / 720.0;
    double em = -std::expm1(-x); // 1 - e^-x
    return (x - em) / (x * em);
}

// sum_{j=0}^{L-1} z^j without cancellation near z = 1.
double geometric_sum(double z, long long L) {
    if (std::abs(z - 1.0) < 1e-12) return double(L);
    return std::expm1(double(L) * std::log(z)) / (z - 1.0);
}

const TableCost* as_table(const CostModel& costs) {
    return std::get_if<TableCost>(&costs.kind());
}

// Average of the stretched table sampled at L uniformly spaced levels,
// grouped per table segment so the cost is O(table size), not O(L).
double stretch_average(const std::vector<double>& v, long long L) {
    const long long len = static_cast<long long>(v.size());
    if (len == 1 || L == 1) return v.front();
    const double g = double(len - 1) / double(L - 1); // du per sample
    double sum = 0.0;
    long long assigned = 0;
    for (long long s = 0; s < len - 1; ++s) {
        // samples i (1-based) with u_i = (i-1) g in [s, s+1)
        long long a = (s == 0) ? 1 : (long long)std::ceil(double(s) / g) + 1;
        long long b = (s == len - 2) ? L : (long long)std::ceil(double(s + 1) / g);
        if (a < 1) a = 1;
        if (b > L) b = L;
        if (b < a) continue;
        const long long n = b - a + 1;
        const double d = v[s + 1] - v[s];
        // f(u) = v[s] + (u - s) d, u_i = (i-1) g; arithmetic series in i
        const double mean_i_minus_1 = 0.5 * double(a - 1 + b - 1);
        sum += double(n) * (v[s] - double(s) * d + d * g * mean_i_minus_1);
        assigned += n;
    }
    require(assigned == L, "internal: stretch sample grouping mismatch");
    return sum / double(L);
}

double cesaro_average(const TableCost& t, long long L) {
    const long long len = static_cast<long long>(t.values.size());
    if (t.rule == ExtensionRule::RepeatLast) {
        if (L <= len)
            return std::accumulate(t.values.begin(), t.values.begin() + L, 0.0) /
                   double(L);
        double prefix = std::accumulate(t.values.begin(), t.values.end(), 0.0);
        return (prefix + double(L - len) * t.values.back()) / double(L);
    }
    return stretch_average(t.values, L);
}

} // namespace

CostModel::CostModel(Kind kind) : kind_(std::move(kind)) {
    std::visit(
        [](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantCost>) {
                require(k.c > 0.0, "constant cost must be positive");
            } else if constexpr (std::is_same_v<T, LinearCost>) {
                require(k.c_bottom > 0.0, "linear cost floor must be positive");
                require(k.c_bottom < k.c_top,
                        "linear costs need c_bottom < c_top (nonincreasing in level)");
            } else {
                require(!k.values.empty(), "cost table must be nonempty");
                double prev = std::numeric_limits<double>::infinity();
                for (double c : k.values) {
                    require(c > 0.0, "table costs must be positive");
                    require(c <= prev, "table costs must be nonincreasing");
                    prev = c;
                }
            }
        },
        kind_);
}

CostModel CostModel::constant(double c) { return CostModel(ConstantCost{c}); }

CostModel CostModel::linear(double c_top, double c_bottom) {
    return CostModel(LinearCost{c_top, c_bottom});
}

CostModel CostModel::table(std::vector<double> values, ExtensionRule rule) {
    return CostModel(TableCost{std::move(values), rule});
}

double cost_at(const CostModel& costs, int i, int L) {
    if (L < 1) throw IndexError("level count must be positive");
    if (i < 1 || i > L)
        throw IndexError("level " + std::to_string(i) + " outside [1, " +
                         std::to_string(L) + "]");
    return std::visit(
        [i, L](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantCost>) {
                return k.c;
            } else if constexpr (std::is_same_v<T, LinearCost>) {
                if (L == 1) return k.c_top;
                return k.c_top - double(i - 1) / double(L - 1) * (k.c_top - k.c_bottom);
            } else {
                const auto& v = k.values;
                const int len = static_cast<int>(v.size());
                if (k.rule == ExtensionRule::RepeatLast)
                    return i <= len ? v[i - 1] : v.back();
                if (L == 1 || len == 1) return v.front();
                double u = double(i - 1) * double(len - 1) / double(L - 1);
                int s = std::min(static_cast<int>(u), len - 2);
                double frac = u - s;
                return v[s] + frac * (v[s + 1] - v[s]);
            }
        },
        costs.kind());
}

double c_star(const CostModel& costs) {
    if (const auto* c = std::get_if<ConstantCost>(&costs.kind())) return c->c;
    if (const auto* l = std::get_if<LinearCost>(&costs.kind()))
        return 0.5 * (l->c_top + l->c_bottom);
    const auto& t = *as_table(costs);
    double a = cesaro_average(t, kCesaroEvalL);
    double b = cesaro_average(t, 2 * kCesaroEvalL);
    if (std::abs(a - b) > kCesaroTol)
        throw ConvergenceError("Cesaro average still moving at the evaluation scale: " +
                               fmt(a) + " vs " + fmt(b));
    return 2.0 * b - a; // Richardson step cancels the O(1/L) term
}

double backward_cost_gen(const CostModel& costs, double z, int L) {
    double p = cost_at(costs, 1, L);
    for (int i = 2; i <= L; ++i) p = p * z + cost_at(costs, i, L);
    return p;
}

namespace {

double finite_ratio(const CostModel& costs, double C, double rho12, int L, int sign) {
    require(C >= 0.0, "C must be nonnegative");
    require(rho12 > 0.0, "rho12 must be positive");
    require(L >= 1, "L must be positive");
    double step = 2.0 * C / (rho12 * double(L));
    if (sign < 0 && step >= 1.0)
        throw DomainError("finite proxy needs 2C/(rho12 L) < 1; increase L");
    if (sign > 0 && 2.0 * C / rho12 > 500.0)
        throw DomainError("finite proxy overflows for 2C/rho12 > 500");
    double z = 1.0 + sign * step;
    return backward_cost_gen(costs, z, L) / geometric_sum(z, L);
}

double table_limit(const CostModel& costs, double C, double rho12, int sign) {
    double a = finite_ratio(costs, C, rho12, kProxyEvalL, sign);
    double b = finite_ratio(costs, C, rho12, 2 * kProxyEvalL, sign);
    if (std::abs(a - b) > kProxyTol)
        throw ConvergenceError("finite-L cost proxy not settled: " + fmt(a) + " vs " +
                               fmt(b));
    return 2.0 * b - a;
}

} // namespace

double psi(const CostModel& costs, double C, double rho12) {
    require(C >= 0.0, "C must be nonnegative");
    require(rho12 > 0.0, "rho12 must be positive");
    if (const auto* c = std::get_if<ConstantCost>(&costs.kind())) return c->c;
    if (C == 0.0) return c_star(costs);
    if (const auto* l = std::get_if<LinearCost>(&costs.kind()))
        return l->c_bottom +
               (l->c_top - l->c_bottom) * kernel_upper(2.0 * C / rho12);
    return table_limit(costs, C, rho12, -1);
}

double eta(const CostModel& costs, double C, double rho12) {
    require(C >= 0.0, "C must be nonnegative");
    require(rho12 > 0.0, "rho12 must be positive");
    if (const auto* c = std::get_if<ConstantCost>(&costs.kind())) return c->c;
    if (C == 0.0) return c_star(costs);
    if (const auto* l = std::get_if<LinearCost>(&costs.kind()))
        return l->c_bottom +
               (l->c_top - l->c_bottom) * kernel_lower(2.0 * C / rho12);
    return table_limit(costs, C, rho12, +1);
}

double psi_finite(const CostModel& costs, double C, double rho12, int L) {
    return finite_ratio(costs, C, rho12, L, -1);
}

double eta_finite(const CostModel& costs, double C, double rho12, int L) {
    return finite_ratio(costs, C, rho12, L, +1);
}

} // namespace damctl
