#pragma once

#include "mdpkit/model.hpp"

#include <utility>

namespace mdpkit {

/// T_pi(u): one-step backup under a fixed policy.
ValueVector policy_backup(const MdpModel& model, const Policy& policy, const ValueVector& u);

/// T(u) together with a greedy policy attaining the max at every state
/// (ties break to the lowest action index).
std::pair<ValueVector, Policy> bellman_backup(const MdpModel& model, const ValueVector& u);

/// R(x,a) + gamma * P^a_x . u
double q_value(const MdpModel& model, const ValueVector& u, int x, int a);

/// Exact policy evaluation: solves (I - gamma P_pi) V = R_pi by partial-pivot LU.
ValueVector evaluate_exact(const MdpModel& model, const Policy& policy);

struct IterativeResult {
    ValueVector values;
    int iterations = 0;
    double residual = 0.0;  // last sup-norm step size
    bool converged = false;
};

/// Fixed-point iteration of T_pi from u = 0. Stops when the step size
/// drops below tol*(1-gamma)/gamma, which bounds ||u - V^pi||_inf by tol.
IterativeResult evaluate_iterative(const MdpModel& model, const Policy& policy, double tol,
                                   int max_iters);

struct AnalysisReport {
    std::vector<std::vector<int>> switchable;  // S^pi(x) per state
    std::vector<int> improvable;               // I^pi, ascending
    ValueVector advantages;                    // T(V^pi)(x) - V^pi(x)
};

/// Switchable actions, improvable states, and advantages of `policy`
/// against `values` (which should be V^pi within evaluation tolerance).
AnalysisReport analyze(const MdpModel& model, const Policy& policy, const ValueVector& values,
                       double improve_tol = kImproveTol);

bool is_optimal(const MdpModel& model, const Policy& policy, double improve_tol = kImproveTol);

struct BruteForceResult {
    Policy policy;       // lowest-lexicographic attainer of V* at all states
    ValueVector values;  // componentwise max over all policies
};

/// Enumerates every deterministic policy; throws std::runtime_error when
/// the policy count exceeds `cap`.
BruteForceResult brute_force_optimal(const MdpModel& model, long long cap = 1000000);

/// True iff the graph with an edge x->y whenever some admissible action
/// reaches y with positive probability is strongly connected.
bool is_communicating(const MdpModel& model);

}  // namespace mdpkit
