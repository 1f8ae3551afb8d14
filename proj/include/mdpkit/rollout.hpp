#pragma once

#include "mdpkit/switching.hpp"

#include <cstdint>

namespace mdpkit {

/// Counter-based uniform stream keyed by (seed, candidate, replication).
/// uniform(step) is a pure function of the key and step, so replications
/// and candidates can be evaluated in any order with identical results.
struct RngStreamKey {
    std::uint64_t seed = 0;
    std::uint64_t candidate = 0;
    std::uint64_t replication = 0;

    /// Uniform in [0, 1), one value per step index.
    double uniform(std::uint64_t step) const;
};

enum class Selector { Saa, Racing };

struct RolloutConfig {
    int horizon = 1;        // truncation length H
    int replications = 1;   // sample paths per candidate
    std::uint64_t seed = 0;
    bool crn = true;        // common random numbers across candidates
    double tie_tol = 1e-6;  // incumbent-keeps-on-tie tolerance for estimates
    Selector selector = Selector::Saa;
    double racing_delta = 0.05;  // confidence parameter for racing_select
};

struct CandidateEstimate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (0 when n = 1)
    int replications = 0;
};

struct EstimateReport {
    std::vector<CandidateEstimate> candidates;
    int chosen_index = -1;   // member index within the candidate set
    int chosen_action = -1;  // its action at the queried state
    double truncation_bound = 0.0;  // gamma^H * Rmax / (1 - gamma)
};

/// Smallest H with gamma^H * rmax / (1 - gamma) <= eps, floored at 1.
int truncation_horizon(double gamma, double rmax, double eps);

/// Inverse-CDF draw over the transition row of (x, a) for a uniform u.
int sample_transition(const MdpModel& model, int x, int a, double u);

/// One truncated discounted return along a sampled path from x. Consumes
/// exactly `horizon` uniforms (one per step, even on deterministic rows)
/// so CRN-paired candidates stay aligned.
double rollout_return(const MdpModel& model, const Policy& pi, int x, int horizon,
                      const RngStreamKey& stream);

/// Sample-average estimate of V^pi(x) over config.replications paths.
/// With crn on, the candidate index is dropped from the transition-noise
/// key, so all candidates see the same noise sequences.
CandidateEstimate estimate_value(const MdpModel& model, const Policy& pi, int x,
                                 const RolloutConfig& config, int candidate_index);

/// Picks the neighborhood member with the largest mean estimate at x;
/// the incumbent keeps its action within tie_tol of the max.
std::pair<int, EstimateReport> saa_select(const MdpModel& model, const PolicySet& neighborhood,
                                          int x, const RolloutConfig& config);

/// Successive-elimination selection: samples survivors in equal rounds and
/// drops any candidate whose upper confidence bound falls below the best
/// lower bound. Falls back to the SAA rule among survivors when the
/// replication budget runs out.
std::pair<int, EstimateReport> racing_select(const MdpModel& model, const PolicySet& neighborhood,
                                             int x, const RolloutConfig& config);

}  // namespace mdpkit
