#include "damctl/sim.hpp"

#include <cmath>
#include <limits>
#include <variant>

#include "damctl/parallel.hpp"
#include "damctl/rng.hpp"

namespace damctl {

namespace {

double sample_service(const DistributionSpec& spec, SplitMix64& rng) {
    return std::visit(
        [&rng](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return -std::log(rng.next_open01()) / f.rate;
            } else if constexpr (std::is_same_v<T, Erlang>) {
                double s = 0.0;
                for (int i = 0; i < f.shape; ++i)
                    s += -std::log(rng.next_open01());
                return s / f.rate;
            } else if constexpr (std::is_same_v<T, HyperExponential>) {
                double u = rng.next_open01();
                double acc = 0.0;
                std::size_t pick = f.weights.size() - 1;
                for (std::size_t i = 0; i < f.weights.size(); ++i) {
                    acc += f.weights[i];
                    if (u <= acc) {
                        pick = i;
                        break;
                    }
                }
                return -std::log(rng.next_open01()) / f.rates[pick];
            } else {
                return f.value;
            }
        },
        spec.family());
}

struct Replication {
    double p1 = 0.0;
    double p2 = 0.0;
    std::vector<double> q;
    double objective = 0.0;
};

Replication run_replication(const SimConfig& cfg, std::uint64_t stream) {
    const double lambda = cfg.model.lambda();
    const int L = cfg.model.levels();
    SplitMix64 rng = SplitMix64::substream(cfg.seed, stream);

    // buckets: [0] empty, [1..L] in-band levels, [L+1] above the band
    std::vector<double> buckets(static_cast<std::size_t>(L) + 2, 0.0);
    const double inf = std::numeric_limits<double>::infinity();

    auto start_service = [&](int level_at_start) {
        const bool above = cfg.exclusive_count ? (level_at_start - 1 > L)
                                               : (level_at_start > L);
        return sample_service(above ? cfg.model.b2() : cfg.model.b1(), rng);
    };

    double t = 0.0;
    int n = 0;
    double next_arrival = -std::log(rng.next_open01()) / lambda;
    double next_departure = inf; // output frozen while the dam is empty

    while (t < cfg.horizon) {
        double te = std::min(next_arrival, next_departure);
        double lo = std::max(t, cfg.warmup);
        double hi = std::min(te, cfg.horizon);
        if (hi > lo) buckets[n > L ? L + 1 : n] += hi - lo;
        if (te >= cfg.horizon) break;
        t = te;
        if (next_departure <= next_arrival) {
            --n;
            next_departure = n >= 1 ? t + start_service(n) : inf;
        } else {
            ++n;
            if (n == 1) next_departure = t + start_service(n);
            next_arrival = t + -std::log(rng.next_open01()) / lambda;
        }
    }

    const double span = cfg.horizon - cfg.warmup;
    Replication rep;
    rep.p1 = buckets[0] / span;
    rep.p2 = buckets[L + 1] / span;
    rep.q.resize(L);
    for (int i = 1; i <= L; ++i) rep.q[i - 1] = buckets[i] / span;
    rep.objective = rep.p1 * cfg.model.penalty_lower() + rep.p2 * cfg.model.penalty_upper();
    for (int i = 1; i <= L; ++i)
        rep.objective += rep.q[i - 1] * cost_at(cfg.costs, i, L);
    return rep;
}

Estimate reduce(const std::vector<double>& xs) {
    const std::size_t r = xs.size();
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= double(r);
    if (r == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (double(r) * double(r - 1)))};
}

} // namespace

SimEstimate simulate(const SimConfig& cfg) {
    if (cfg.warmup < 0.0) throw ConfigError("warmup must be nonnegative");
    if (cfg.horizon <= cfg.warmup) throw ConfigError("horizon must exceed warmup");
    if (cfg.replications < 1) throw ConfigError("need at least one replication");

    const int R = cfg.replications;
    std::vector<Replication> reps(R);
    parallel_for(static_cast<std::size_t>(R), [&](std::size_t r) {
        reps[r] = run_replication(cfg, static_cast<std::uint64_t>(r));
    });

    const int L = cfg.model.levels();
    SimEstimate est;
    std::vector<double> scratch(R);
    auto gather = [&](auto&& pick) {
        for (int r = 0; r < R; ++r) scratch[r] = pick(reps[r]);
        return reduce(scratch);
    };
    est.p1 = gather([](const Replication& r) { return r.p1; });
    est.p2 = gather([](const Replication& r) { return r.p2; });
    est.q.resize(L);
    for (int i = 0; i < L; ++i)
        est.q[i] = gather([i](const Replication& r) { return r.q[i]; });
    est.objective = gather([](const Replication& r) { return r.objective; });
    return est;
}

} // namespace damctl
