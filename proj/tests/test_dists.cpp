#include <doctest.h>

#include <cmath>
#include <vector>

#include "damctl/dists.hpp"

using namespace damctl;

namespace {

// Simpson quadrature of f over [0, hi]; oracle-side only, deliberately
// independent of the closed forms under test.
template <typename F>
double simpson(F f, double hi, int n = 20000) {
    double h = hi / n;
    double acc = f(0.0) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double density(const DistributionSpec& spec, double x) {
    return std::visit(
        [x](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return f.rate * std::exp(-f.rate * x);
            } else if constexpr (std::is_same_v<T, Erlang>) {
                double logp = f.shape * std::log(f.rate) + (f.shape - 1) * std::log(x) -
                              f.rate * x - std::lgamma(f.shape);
                return std::exp(logp);
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                double v = 0.0;
                for (std::size_t i = 0; i < f.weights.size(); ++i)
                    v += f.weights[i] * f.rates[i] * std::exp(-f.rates[i] * x);
                return v;
            } else {
                return 0.0; // no density; callers special-case Deterministic
            }
        },
        spec.family());
}

double weight_by_quadrature(const DistributionSpec& spec, double lambda, int j) {
    double cutoff = 80.0 / std::min(spec.min_rate(), lambda);
    return simpson(
        [&](double x) {
            double logp = -lambda * x + j * std::log(std::max(x * lambda, 1e-300)) -
                          std::lgamma(j + 1);
            return std::exp(logp) * density(spec, x);
        },
        cutoff);
}

std::vector<DistributionSpec> family_battery() {
    return {DistributionSpec::exponential(1.0),
            DistributionSpec::exponential(2.5),
            DistributionSpec::erlang(3, 2.0),
            DistributionSpec::hyper_exponential({0.3, 0.7}, {1.0, 4.0}),
            DistributionSpec::deterministic(1.0),
            DistributionSpec::deterministic(0.4)};
}

} // namespace

TEST_CASE("lst closed forms and boundary") {
    CHECK(lst(DistributionSpec::exponential(1.0), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lst(DistributionSpec::exponential(1.0), 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(lst(DistributionSpec::deterministic(2.0), 0.5) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(lst(DistributionSpec::exponential(1.0), -1.0), DomainError);
    CHECK_THROWS_AS(lst(DistributionSpec::erlang(2, 1.5), -1.5), DomainError);
    CHECK_THROWS_AS(lst(DistributionSpec::hyper_exponential({0.5, 0.5}, {1.0, 3.0}), -1.0),
                    DomainError);
    // deterministic transform has no boundary
    CHECK(lst(DistributionSpec::deterministic(1.0), -3.0) ==
          doctest::Approx(std::exp(3.0)).epsilon(1e-14));
}

TEST_CASE("lst and derivative at zero across families") {
    for (const auto& spec : family_battery()) {
        CAPTURE(spec.name());
        CHECK(lst(spec, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(lst_derivative(spec, 0.0) == doctest::Approx(-spec.mean()).epsilon(1e-12));
    }
}

TEST_CASE("lst_derivative examples") {
    CHECK(lst_derivative(DistributionSpec::exponential(1.0), 1.0) ==
          doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(lst_derivative(DistributionSpec::deterministic(1.0), 0.0) ==
          doctest::Approx(-1.0).epsilon(1e-14));
    // quadrature cross-check for a non-trivial family
    DistributionSpec er = DistributionSpec::erlang(3, 2.0);
    double oracle = -simpson([&](double x) { return x * std::exp(-0.7 * x) * density(er, x); },
                             60.0);
    CHECK(lst_derivative(er, 0.7) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("scaled moments") {
    CHECK(scaled_moment(DistributionSpec::exponential(2.0), 1.0, 1) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(scaled_moment(DistributionSpec::exponential(1.0), 1.0, 2) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(scaled_moment(DistributionSpec::deterministic(1.0), 1.0, 2) ==
          doctest::Approx(1.0).epsilon(1e-14));
    DistributionSpec hy = DistributionSpec::hyper_exponential({0.3, 0.7}, {1.0, 4.0});
    for (int l : {1, 2, 3}) {
        double oracle =
            simpson([&](double x) { return std::pow(x, l) * density(hy, x); }, 100.0);
        CHECK(scaled_moment(hy, 1.3, l) ==
              doctest::Approx(std::pow(1.3, l) * oracle).epsilon(1e-7));
    }
}

TEST_CASE("mixed-Poisson weights: closed families against the pmf forms") {
    auto exp_w = poisson_weights(DistributionSpec::exponential(1.0), 1.0, 12);
    for (int j = 0; j <= 12; ++j)
        CHECK(exp_w.weights()[j] == doctest::Approx(std::pow(2.0, -(j + 1))).epsilon(1e-13));

    auto det_w = poisson_weights(DistributionSpec::deterministic(1.0), 1.0, 12);
    double fact = 1.0;
    for (int j = 0; j <= 12; ++j) {
        if (j > 0) fact *= j;
        CHECK(det_w.weights()[j] ==
              doctest::Approx(std::exp(-1.0) / fact).epsilon(1e-13));
    }
}

TEST_CASE("mixed-Poisson weights: quadrature oracle for erlang and hyperexp") {
    for (const auto& spec : {DistributionSpec::erlang(3, 2.0),
                             DistributionSpec::hyper_exponential({0.3, 0.7}, {1.0, 4.0})}) {
        CAPTURE(spec.name());
        auto w = poisson_weights(spec, 1.0, 8);
        for (int j = 0; j <= 8; ++j)
            CHECK(w.weights()[j] ==
                  doctest::Approx(weight_by_quadrature(spec, 1.0, j)).epsilon(1e-8));
    }
}

TEST_CASE("weights: normalization, Tauberian condition and moment identities") {
    for (const auto& spec : family_battery()) {
        for (double lambda : {0.5, 1.0, 2.0}) {
            CAPTURE(spec.name());
            CAPTURE(lambda);
            auto w = poisson_weights(spec, lambda, 400);
            double sum = w.tail_mass();
            for (double r : w.weights()) {
                CHECK(r >= 0.0);
                CHECK(r <= 1.0);
                sum += r;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(w.weights()[0] + w.weights()[1] < 1.0);
            CHECK(w.gamma1() ==
                  doctest::Approx(scaled_moment(spec, lambda, 1)).epsilon(1e-8));
            CHECK(w.gamma2() ==
                  doctest::Approx(scaled_moment(spec, lambda, 2)).epsilon(1e-8));
        }
    }
}

TEST_CASE("root_phi") {
    CHECK(root_phi(DistributionSpec::exponential(1.0), 2.0) ==
          doctest::Approx(0.5).epsilon(1e-11));
    CHECK(root_phi(DistributionSpec::exponential(1.0), 1.01) ==
          doctest::Approx(1.0 / 1.01).epsilon(1e-11));
    CHECK_THROWS_AS(root_phi(DistributionSpec::exponential(1.0), 1.0), RegimeError);
    CHECK_THROWS_AS(root_phi(DistributionSpec::exponential(2.0), 1.0), RegimeError);
}

TEST_CASE("root_tau") {
    CHECK(root_tau(DistributionSpec::exponential(2.0), 1.0) ==
          doctest::Approx(2.0).epsilon(1e-11));
    CHECK(root_tau(DistributionSpec::deterministic(0.5), 1.0) ==
          doctest::Approx(3.51286241725234).epsilon(1e-10));
    CHECK(root_tau(DistributionSpec::exponential(1.0 / 0.99), 1.0) ==
          doctest::Approx(1.0 / 0.99).epsilon(1e-11));
    CHECK_THROWS_AS(root_tau(DistributionSpec::exponential(0.5), 1.0), RegimeError);
    // root beyond the documented deterministic bracket cap
    CHECK_THROWS_AS(root_tau(DistributionSpec::deterministic(0.05), 1.0), ExistenceError);
}

TEST_CASE("roots satisfy the fixed-point equation to 1e-12") {
    for (const auto& spec : family_battery()) {
        CAPTURE(spec.name());
        double super = 1.25 / spec.mean(); // rho1 = 1.25
        double phi = root_phi(spec, super);
        CHECK(phi > 0.0);
        CHECK(phi < 1.0);
        CHECK(std::abs(phi - lst(spec, super - super * phi)) < 1e-12);

        double sub = 0.8 / spec.mean(); // rho1 = 0.8
        double tau = root_tau(spec, sub);
        CHECK(tau > 1.0);
        CHECK(std::abs(tau - lst(spec, sub - sub * tau)) < 1e-12);
    }
}

TEST_CASE("first-order root expansions carry a quadratic error term") {
    std::vector<double> deltas = {0.02, 0.01, 0.005};
    auto slope = [&](bool upper) {
        std::vector<double> errs;
        for (double d : deltas) {
            double rho1 = upper ? 1.0 + d : 1.0 - d;
            DistributionSpec b1 = DistributionSpec::exponential(1.0 / rho1);
            double rho12 = scaled_moment(b1, 1.0, 2);
            double root = upper ? root_phi(b1, 1.0) : root_tau(b1, 1.0);
            double first = upper ? 1.0 - 2.0 * d / rho12 : 1.0 + 2.0 * d / rho12;
            errs.push_back(std::abs(root - first));
        }
        return std::log(errs.front() / errs.back()) /
               std::log(deltas.front() / deltas.back());
    };
    CHECK(slope(true) > 1.7);
    CHECK(slope(true) < 2.3);
    CHECK(slope(false) > 1.7);
    CHECK(slope(false) < 2.3);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(DistributionSpec::exponential(0.0), DomainError);
    CHECK_THROWS_AS(DistributionSpec::exponential(-1.0), DomainError);
    CHECK_THROWS_AS(DistributionSpec::erlang(0, 1.0), DomainError);
    CHECK_THROWS_AS(DistributionSpec::deterministic(0.0), DomainError);
    CHECK_THROWS_AS(DistributionSpec::hyper_exponential({0.3, 0.6}, {1.0, 2.0}),
                    DomainError); // weights sum 0.9
    CHECK_THROWS_AS(DistributionSpec::hyper_exponential({0.5, 0.5}, {1.0}), DomainError);
    CHECK_THROWS_AS(DistributionSpec::hyper_exponential({0.5, 0.5}, {1.0, -2.0}),
                    DomainError);
    for (const auto& spec : family_battery()) CHECK(spec.mean() > 0.0);
}

TEST_CASE("rho12 at the critical point") {
    CHECK(rho12_at_critical(DistributionSpec::exponential(3.0)) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rho12_at_critical(DistributionSpec::deterministic(0.7)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rho12_at_critical(DistributionSpec::erlang(4, 1.0)) ==
          doctest::Approx(1.25).epsilon(1e-14)); // (k+1)/k
}
