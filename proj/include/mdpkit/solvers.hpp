#pragma once

#include "mdpkit/switching.hpp"

#include <cstdint>
#include <string>

namespace mdpkit {

enum class DeltaStrategy { HowardGreedy, ParallelPi, RandomK };
enum class StateSelection { Random, RoundRobin, GivenSequence };

std::string to_string(DeltaStrategy s);
DeltaStrategy delta_strategy_from_string(const std::string& name);

struct SolverConfig {
    int max_iterations = 100000;
    std::uint64_t seed = 0;
    DeltaStrategy delta_strategy = DeltaStrategy::HowardGreedy;
    StateSelection state_selection = StateSelection::Random;
    std::vector<int> state_sequence;  // consumed by GivenSequence
    int random_k = 3;                 // candidates per iteration for RandomK
    double improve_tol = kImproveTol;
};

struct TraceStep {
    int iteration = 0;
    Policy policy;
    ValueVector values;
    std::vector<int> improvable;
    std::vector<int> switched;  // states changed when forming the next policy
    double wall_seconds = 0.0;
};

struct IterationTrace {
    std::string algorithm;
    std::vector<TraceStep> steps;  // steps[0] holds pi0
    Policy final_policy;
    bool optimal = false;  // improvable set empty at termination
};

IterationTrace howard_pi(const MdpModel& model, const Policy& pi0, const SolverConfig& config);

/// Switches only a maximal-advantage state per iteration (lowest state
/// index on ties), taking the greedy action there.
IterationTrace simplex_pi(const MdpModel& model, const Policy& pi0, const SolverConfig& config);

/// Switches one improvable state per iteration, chosen by
/// config.state_selection, taking the greedy action there.
IterationTrace newton_pi(const MdpModel& model, const Policy& pi0, const SolverConfig& config);

/// Synchronous policy-switching iteration: pi_{n+1} switches over
/// build_delta(pi_n) plus pi_n as incumbent.
IterationTrace pspi_sync(const MdpModel& model, const Policy& pi0, const SolverConfig& config);

/// Asynchronous variant: one improvable state per iteration, switched over
/// its local neighborhood with the incumbent tie rule.
IterationTrace pspi_async(const MdpModel& model, const Policy& pi0, const SolverConfig& config);

struct DeltaResult {
    PolicySet set;             // no incumbent; callers add the base
    bool base_optimal = false; // set is empty in that case
};

/// Candidate-set construction for pspi_sync. Every strategy yields at
/// least one strict improvement of a non-optimal base.
DeltaResult build_delta(const MdpModel& model, const Policy& pi, DeltaStrategy strategy,
                        std::uint64_t seed, int random_k = 3, double improve_tol = kImproveTol);

}  // namespace mdpkit
