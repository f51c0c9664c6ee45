#include "damctl/dists.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <type_traits>

namespace damctl {

namespace {

constexpr double kBracketEps = 1e-9;
constexpr double kRootResidualTol = 1e-12;
constexpr int kMaxBisectionIters = 200;

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

DistributionSpec::DistributionSpec(Family family) : family_(std::move(family)) {
    std::visit(
        [](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                require(f.rate > 0.0, "exponential rate must be positive");
            } else if constexpr (std::is_same_v<T, Erlang>) {
                require(f.shape >= 1, "erlang shape must be a positive integer");
                require(f.rate > 0.0, "erlang rate must be positive");
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                require(!f.weights.empty() && f.weights.size() == f.rates.size(),
                        "hyperexponential needs matching nonempty weights and rates");
                double sum = 0.0;
                for (double w : f.weights) {
                    require(w >= 0.0, "hyperexponential weights must be nonnegative");
                    sum += w;
                }
                require(std::abs(sum - 1.0) <= 1e-12,
                        "hyperexponential weights must sum to 1 (got " + fmt(sum) + ")");
                for (double r : f.rates)
                    require(r > 0.0, "hyperexponential rates must be positive");
            } else {
                require(f.value > 0.0, "deterministic value must be positive");
            }
        },
        family_);
}

DistributionSpec DistributionSpec::exponential(double rate) {
    return DistributionSpec(Exponential{rate});
}

DistributionSpec DistributionSpec::erlang(int shape, double rate) {
    return DistributionSpec(Erlang{shape, rate});
}

DistributionSpec DistributionSpec::hyper_exponential(std::vector<double> weights,
                                                     std::vector<double> rates) {
    return DistributionSpec(HyperExponential{std::move(weights), std::move(rates)});
}

DistributionSpec DistributionSpec::deterministic(double value) {
    return DistributionSpec(Deterministic{value});
}

double DistributionSpec::mean() const { return raw_moment(1); }

double DistributionSpec::raw_moment(int l) const {
    require(l >= 1 && l <= 3, "raw_moment supports orders 1..3");
    return std::visit(
        [l](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                // E[X^l] = l!/rate^l
                double fact = (l == 1) ? 1.0 : (l == 2) ? 2.0 : 6.0;
                return fact / std::pow(f.rate, l);
            } else if constexpr (std::is_same_v<T, Erlang>) {
                // E[X^l] = k(k+1)...(k+l-1)/rate^l
                double num = 1.0;
                for (int i = 0; i < l; ++i) num *= f.shape + i;
                return num / std::pow(f.rate, l);
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                double fact = (l == 1) ? 1.0 : (l == 2) ? 2.0 : 6.0;
                double m = 0.0;
                for (std::size_t i = 0; i < f.weights.size(); ++i)
                    m += f.weights[i] * fact / std::pow(f.rates[i], l);
                return m;
            } else {
                return std::pow(f.value, l);
            }
        },
        family_);
}

double DistributionSpec::min_rate() const {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return f.rate;
            } else if constexpr (std::is_same_v<T, Erlang>) {
                return f.rate;
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                return *std::min_element(f.rates.begin(), f.rates.end());
            } else {
                return std::numeric_limits<double>::infinity();
            }
        },
        family_);
}

std::string DistributionSpec::name() const {
    std::ostringstream os;
    std::visit(
        [&os](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                os << "exp:" << f.rate;
            } else if constexpr (std::is_same_v<T, Erlang>) {
                os << "erlang:" << f.shape << "," << f.rate;
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                os << "hyperexp:";
                for (std::size_t i = 0; i < f.weights.size(); ++i)
                    os << (i ? "|" : "") << f.weights[i];
                os << ";";
                for (std::size_t i = 0; i < f.rates.size(); ++i)
                    os << (i ? "|" : "") << f.rates[i];
            } else {
                os << "det:" << f.value;
            }
        },
        family_);
    return os.str();
}

MixedPoissonWeights::MixedPoissonWeights(double lambda, std::vector<double> weights,
                                         double tail_mass)
    : lambda_(lambda), weights_(std::move(weights)), tail_mass_(tail_mass) {
    require(lambda_ > 0.0, "arrival rate must be positive");
    double sum = 0.0;
    for (double r : weights_) {
        require(r >= -1e-15 && r <= 1.0 + 1e-15, "weight outside [0,1]");
        sum += r;
    }
    require(std::abs(sum + tail_mass_ - 1.0) <= 1e-10,
            "weights plus tail mass must total 1 (got " + fmt(sum + tail_mass_) + ")");
    require(weights_.size() >= 2, "need at least r_0 and r_1");
    // Tauberian condition: fails only for laws concentrated at 0.
    require(weights_[0] + weights_[1] < 1.0, "r_0 + r_1 must be below 1");
}

double MixedPoissonWeights::gamma1() const {
    double s = 0.0;
    for (std::size_t n = 1; n < weights_.size(); ++n) s += double(n) * weights_[n];
    return s;
}

double MixedPoissonWeights::gamma2() const {
    double s = 0.0;
    for (std::size_t n = 2; n < weights_.size(); ++n)
        s += double(n) * double(n - 1) * weights_[n];
    return s;
}

double lst(const DistributionSpec& spec, double s) {
    const double bound = spec.min_rate();
    if (std::isfinite(bound) && s <= -bound)
        throw DomainError("transform argument " + fmt(s) +
                          " at or beyond the divergence boundary " + fmt(-bound));
    return std::visit(
        [s](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return f.rate / (f.rate + s);
            } else if constexpr (std::is_same_v<T, Erlang>) {
                return std::pow(f.rate / (f.rate + s), f.shape);
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                double v = 0.0;
                for (std::size_t i = 0; i < f.weights.size(); ++i)
                    v += f.weights[i] * f.rates[i] / (f.rates[i] + s);
                return v;
            } else {
                return std::exp(-s * f.value);
            }
        },
        spec.family());
}

double lst_derivative(const DistributionSpec& spec, double s) {
    const double bound = spec.min_rate();
    if (std::isfinite(bound) && s <= -bound)
        throw DomainError("transform argument " + fmt(s) +
                          " at or beyond the divergence boundary " + fmt(-bound));
    return std::visit(
        [s](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                double d = f.rate + s;
                return -f.rate / (d * d);
            } else if constexpr (std::is_same_v<T, Erlang>) {
                return -f.shape / (f.rate + s) * std::pow(f.rate / (f.rate + s), f.shape);
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                double v = 0.0;
                for (std::size_t i = 0; i < f.weights.size(); ++i) {
                    double d = f.rates[i] + s;
                    v -= f.weights[i] * f.rates[i] / (d * d);
                }
                return v;
            } else {
                return -f.value * std::exp(-s * f.value);
            }
        },
        spec.family());
}

double scaled_moment(const DistributionSpec& spec, double lambda, int l) {
    require(lambda > 0.0, "arrival rate must be positive");
    return std::pow(lambda, l) * spec.raw_moment(l);
}

MixedPoissonWeights poisson_weights(const DistributionSpec& spec, double lambda,
                                    int n_max) {
    require(lambda > 0.0, "arrival rate must be positive");
    require(n_max >= 1, "n_max must be at least 1");
    std::vector<double> r(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                // geometric: (rate/(rate+lambda)) * (lambda/(rate+lambda))^j
                double p = f.rate / (f.rate + lambda);
                double q = lambda / (f.rate + lambda);
                double v = p;
                for (int j = 0; j <= n_max; ++j, v *= q) r[j] = v;
            } else if constexpr (std::is_same_v<T, Erlang>) {
                // negative binomial: C(j+k-1, j) p^k q^j
                double p = f.rate / (f.rate + lambda);
                double q = lambda / (f.rate + lambda);
                double v = std::pow(p, f.shape);
                for (int j = 0; j <= n_max; ++j) {
                    r[j] = v;
                    v *= q * double(j + f.shape) / double(j + 1);
                }
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                for (std::size_t i = 0; i < f.weights.size(); ++i) {
                    double p = f.rates[i] / (f.rates[i] + lambda);
                    double q = lambda / (f.rates[i] + lambda);
                    double v = f.weights[i] * p;
                    for (int j = 0; j <= n_max; ++j, v *= q) r[j] += v;
                }
            } else {
                // Poisson pmf at mean lambda*d
                double m = lambda * f.value;
                double v = std::exp(-m);
                for (int j = 0; j <= n_max; ++j) {
                    r[j] = v;
                    v *= m / double(j + 1);
                }
            }
        },
        spec.family());
    double sum = std::accumulate(r.begin(), r.end(), 0.0);
    double tail = std::max(0.0, 1.0 - sum);
    return MixedPoissonWeights(lambda, std::move(r), tail);
}

namespace {

// z - B^(lambda - lambda z), the characteristic fixed-point defect.
double char_defect(const DistributionSpec& spec, double lambda, double z) {
    return z - lst(spec, lambda - lambda * z);
}

double bisect(const DistributionSpec& spec, double lambda, double lo, double hi,
              double flo) {
    for (int it = 0; it < kMaxBisectionIters; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = char_defect(spec, lambda, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double z = 0.5 * (lo + hi);
    if (std::abs(char_defect(spec, lambda, z)) >= kRootResidualTol)
        throw ConvergenceError("root refinement stalled on [" + fmt(lo) + ", " +
                               fmt(hi) + "]");
    return z;
}

} // namespace

double root_phi(const DistributionSpec& spec, double lambda) {
    double rho1 = scaled_moment(spec, lambda, 1);
    if (rho1 <= 1.0)
        throw RegimeError("root_phi requires rho_1 > 1 (got " + fmt(rho1) + ")");
    double lo = kBracketEps;
    double hi = 1.0 - kBracketEps;
    double flo = char_defect(spec, lambda, lo);
    double fhi = char_defect(spec, lambda, hi);
    if ((flo < 0.0) == (fhi < 0.0))
        throw ConvergenceError("no sign change on [" + fmt(lo) + ", " + fmt(hi) +
                               "]: f(lo)=" + fmt(flo) + " f(hi)=" + fmt(fhi));
    return bisect(spec, lambda, lo, hi, flo);
}

double root_tau(const DistributionSpec& spec, double lambda) {
    double rho1 = scaled_moment(spec, lambda, 1);
    if (rho1 >= 1.0)
        throw RegimeError("root_tau requires rho_1 < 1 (got " + fmt(rho1) + ")");
    double bound = spec.min_rate();
    // Keep lambda - lambda z strictly inside the transform domain.
    double z_hi = std::isfinite(bound) ? 1.0 + 0.999 * bound / lambda : 64.0;
    double lo = 1.0 + kBracketEps;
    double flo = char_defect(spec, lambda, lo);
    // Scan for the first sign change; f starts positive near 1 when rho_1 < 1.
    const int kScanPoints = 256;
    double prev = lo, fprev = flo, hi = lo;
    bool found = false;
    for (int i = 1; i <= kScanPoints; ++i) {
        double z = lo + (z_hi - lo) * double(i) / kScanPoints;
        double f = char_defect(spec, lambda, z);
        if ((f < 0.0) != (fprev < 0.0)) {
            hi = z;
            found = true;
            break;
        }
        prev = z;
        fprev = f;
    }
    if (!found)
        throw ExistenceError("no root of z = B^(lambda - lambda z) inside (" +
                             fmt(lo) + ", " + fmt(z_hi) + "]");
    return bisect(spec, lambda, prev, hi, fprev);
}

double rho12_at_critical(const DistributionSpec& spec) {
    double m1 = spec.raw_moment(1);
    return spec.raw_moment(2) / (m1 * m1);
}

} // namespace damctl
