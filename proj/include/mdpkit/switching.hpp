#pragma once

#include "mdpkit/operators.hpp"

#include <functional>
#include <optional>

namespace mdpkit {

/// Ordered candidate set for policy switching. When an incumbent is
/// designated, it keeps its action on per-state value ties.
struct PolicySet {
    std::vector<Policy> members;
    std::optional<int> incumbent;
};

struct SwitchOutcome {
    Policy policy;
    std::vector<int> source_index;          // member chosen at each state
    std::vector<ValueVector> member_values;  // one per member, in order
};

/// Value-evaluation hook: (member policy, member index) -> V estimate.
/// Defaults to exact evaluation.
using MemberEvaluator = std::function<ValueVector(const Policy&, int)>;

/// At every state, adopts the action of a member with maximal value at
/// that state. Incumbent keeps its action on ties within `tol`; otherwise
/// the lowest member index wins.
SwitchOutcome policy_switch(const MdpModel& model, const PolicySet& delta,
                            const MemberEvaluator& evaluator = {}, double tol = kImproveTol);

/// Single-state variant: returns (chosen member index, per-member values
/// at x). The evaluator only needs to produce the value at `x`.
using StateEvaluator = std::function<double(const Policy&, int member, int state)>;
std::pair<int, std::vector<double>> switch_at_state(const PolicySet& delta, int x,
                                                    const StateEvaluator& evaluator,
                                                    double tol = kImproveTol);

/// The |A(x)| policies differing from `policy` only at x (the policy
/// itself included and designated incumbent), ordered by action index.
PolicySet local_neighborhood(const MdpModel& model, const Policy& policy, int x);

/// V^candidate >= V^base everywhere and strictly larger somewhere.
bool strictly_improves(const MdpModel& model, const Policy& candidate, const Policy& base,
                       double tol = kImproveTol);

/// Membership in the set of strict improvements of `base` obtainable from
/// its improvable states: the candidate differs on a nonempty subset of
/// improvable states and picks switchable actions there.
bool in_better_set(const MdpModel& model, const Policy& candidate, const Policy& base,
                   double tol = kImproveTol);

struct MultiImprovementReport {
    bool hypothesis_met = false;   // some member strictly-improving wrt base
    int better_member = -1;        // witness index, -1 if none
    bool strict_improvement = false;  // switched policy strictly improves base
    bool dominates_members = false;   // V^switched >= V^member for every member
    int violating_member = -1;        // witness for a dominance failure
    Policy switched;
    ValueVector switched_values;
};

/// Diagnostic check of the multi-policy improvement guarantee: switching
/// over delta (plus the base as incumbent) dominates every member, and
/// strictly improves the base whenever delta intersects its better-set.
MultiImprovementReport verify_multi_policy_improvement(const MdpModel& model,
                                                       const PolicySet& delta,
                                                       const Policy& base);

}  // namespace mdpkit
