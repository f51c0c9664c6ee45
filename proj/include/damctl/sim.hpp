#pragma once

#include <cstdint>
#include <vector>

#include "damctl/costs.hpp"
#include "damctl/exact.hpp"

namespace damctl {

struct SimConfig {
    DamModelParams model;
    CostModel costs;
    double horizon;       // simulated time per replication
    double warmup = 0.0;  // discarded initial time
    std::uint64_t seed = 1;
    int replications = 1;
    // Level comparison at a service start counts the unit entering service;
    // flipping this excludes it (sensitivity convention).
    bool exclusive_count = false;
};

struct Estimate {
    double value = 0.0;
    double se = 0.0; // standard error over replications (0 when R = 1)
};

struct SimEstimate {
    Estimate p1;
    Estimate p2;
    std::vector<Estimate> q; // q[0] is level 1
    Estimate objective;
};

/// Event-driven simulation of the dam queue. Time-in-state fractions over
/// (warmup, horizon] per replication, averaged across replications with
/// standard errors from the replication variance. Reproducible per seed;
/// replications run on independent RNG substreams and merge in index order.
SimEstimate simulate(const SimConfig& cfg);

} // namespace damctl
