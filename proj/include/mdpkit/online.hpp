#pragma once

#include "mdpkit/rollout.hpp"
#include "mdpkit/solvers.hpp"

#include <optional>
#include <set>

namespace mdpkit {

enum class OnlineAlgo { Opi, Pspi };
enum class EvalMode { Exact, Rollout };

struct TrajectoryStep {
    int k = 0;
    int state = 0;
    int action = 0;
    Policy policy;  // pi_{k+1}, the policy after the update at `state`
    std::optional<ValueVector> values;  // V^{pi_{k+1}} in exact mode
    bool changed = false;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    std::uint64_t seed = 0;
    EvalMode mode = EvalMode::Exact;
    Policy final_policy;
};

struct OnlineConfig {
    int settle_window = -1;  // <0 means 10 * |X|
    double improve_tol = kImproveTol;
    RolloutConfig rollout;       // used when mode == Rollout
    PolicySet extra_candidates;  // optional additions to the local neighborhood
};

struct StabilizationResult {
    std::optional<int> k_prime;  // index of the last changed step
    std::set<int> chi;           // states visited after k_prime
    bool unsettled = false;      // fewer than settle_window steps after k_prime
};

struct LocalMdpReport {
    std::vector<int> chi;
    bool closed = false;
    bool locally_optimal = false;
    Policy final_policy;
};

struct OnlineResult {
    Trajectory trajectory;
    StabilizationResult stabilization;
    LocalMdpReport local_report;
};

/// Samples the next state under (x, a) with one uniform from the keyed
/// stream at index `step`.
int env_step(const MdpModel& model, int x, int a, const RngStreamKey& stream,
             std::uint64_t step);

/// Greedy single-state update against V^pi: replaces pi(x) by a maximizer
/// of the q-values at x, keeping pi(x) when it attains the max within tol.
Policy opi_step(const MdpModel& model, const Policy& pi, int x, double tol = kImproveTol);

/// Single-state switch over the local neighborhood of (pi, x) with the
/// incumbent tie rule, using the injected per-state evaluator.
Policy pspi_step(const MdpModel& model, const Policy& pi, int x, const StateEvaluator& evaluator,
                 double tol = kImproveTol);

/// As pspi_step, but the candidate set is the local neighborhood plus
/// `extra`; only the action at x may change.
Policy pspi_step_extended(const MdpModel& model, const Policy& pi, int x, const PolicySet& extra,
                          const StateEvaluator& evaluator, double tol = kImproveTol);

/// Runs the on-line engine for `steps` steps from (pi0, x0), alternating a
/// single-state policy update with an environment transition. Exact mode
/// checks per-step value monotonicity and throws std::logic_error on a
/// breach.
OnlineResult run_online(const MdpModel& model, const Policy& pi0, int x0, OnlineAlgo algo,
                        int steps, EvalMode mode, const OnlineConfig& config,
                        std::uint64_t seed);

StabilizationResult detect_stabilization(const Trajectory& trajectory, int num_states,
                                         int settle_window = -1);

/// Builds the restriction where actions are free on chi and pinned to
/// final_policy elsewhere, checks that chi is closed under the policy, and
/// tests whether the policy is optimal for that restriction.
LocalMdpReport verify_local_optimality(const MdpModel& model, const Policy& final_policy,
                                       const std::vector<int>& chi);

}  // namespace mdpkit
