#pragma once

#include <string>
#include <variant>
#include <vector>

#include "damctl/errors.hpp"

namespace damctl {

struct Exponential {
    double rate;
};

struct Erlang {
    int shape;
    double rate;
};

struct HyperExponential {
    std::vector<double> weights;
    std::vector<double> rates;
};

struct Deterministic {
    double value;
};

/// A parametric service-time law with a closed-form Laplace-Stieltjes
/// transform. Immutable after construction; parameters are validated once.
class DistributionSpec {
  public:
    using Family = std::variant<Exponential, Erlang, HyperExponential, Deterministic>;

    explicit DistributionSpec(Family family);

    static DistributionSpec exponential(double rate);
    static DistributionSpec erlang(int shape, double rate);
    static DistributionSpec hyper_exponential(std::vector<double> weights,
                                              std::vector<double> rates);
    static DistributionSpec deterministic(double value);

    const Family& family() const { return family_; }

    double mean() const;
    /// Raw moment E[X^l], l in {1,2,3}.
    double raw_moment(int l) const;

    /// Smallest rate parameter; the transform integral diverges at
    /// s = -min_rate(). Infinite for Deterministic.
    double min_rate() const;

    std::string name() const;

  private:
    Family family_;
};

/// Mixed-Poisson masses r_j = P{j arrivals during one service}, truncated
/// at n_max with the remaining probability reported as tail_mass.
class MixedPoissonWeights {
  public:
    MixedPoissonWeights(double lambda, std::vector<double> weights, double tail_mass);

    double lambda() const { return lambda_; }
    const std::vector<double>& weights() const { return weights_; }
    double tail_mass() const { return tail_mass_; }

    double gamma1() const; // sum n r_n over the truncated window
    double gamma2() const; // sum n(n-1) r_n over the truncated window

  private:
    double lambda_;
    std::vector<double> weights_;
    double tail_mass_;
};

/// B^(s) = integral exp(-s x) dB(x).
double lst(const DistributionSpec& spec, double s);

/// B^'(s) = -integral x exp(-s x) dB(x); equals -mean at s = 0.
double lst_derivative(const DistributionSpec& spec, double s);

/// lambda^l E[X^l]; the traffic intensity for l = 1.
double scaled_moment(const DistributionSpec& spec, double lambda, int l);

MixedPoissonWeights poisson_weights(const DistributionSpec& spec, double lambda,
                                    int n_max);

/// Root of z = B^(lambda - lambda z) in (0,1); requires rho_1 > 1.
double root_phi(const DistributionSpec& spec, double lambda);

/// Root of z = B^(lambda - lambda z) above 1; requires rho_1 < 1.
/// Not guaranteed to exist for every law inside the admissible bracket.
double root_tau(const DistributionSpec& spec, double lambda);

/// Second scaled moment of the spec rescaled so its traffic intensity is 1:
/// rho_{1,2}/rho_1^2 = E[X^2]/E[X]^2. This is the limit rho~_{1,2} along a
/// design family that keeps the shape and tunes the rate.
double rho12_at_critical(const DistributionSpec& spec);

} // namespace damctl
