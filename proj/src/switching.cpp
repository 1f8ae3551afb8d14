#include "mdpkit/switching.hpp"

#include <stdexcept>

namespace mdpkit {

namespace {

void require_members(const MdpModel& model, const PolicySet& delta) {
    if (delta.members.empty()) throw std::invalid_argument("empty policy set");
    for (const auto& member : delta.members) require_admissible(model, member);
    if (delta.incumbent &&
        (*delta.incumbent < 0 || *delta.incumbent >= static_cast<int>(delta.members.size())))
        throw std::invalid_argument("incumbent index out of range");
}

int pick_member(const std::vector<double>& values, const std::optional<int>& incumbent,
                double tol) {
    double best = values[0];
    for (double v : values) best = std::max(best, v);
    if (incumbent && values[static_cast<size_t>(*incumbent)] >= best - tol) return *incumbent;
    for (size_t i = 0; i < values.size(); ++i)
        if (values[i] >= best - tol) return static_cast<int>(i);
    return 0;  // unreachable
}

}  // namespace

SwitchOutcome policy_switch(const MdpModel& model, const PolicySet& delta,
                            const MemberEvaluator& evaluator, double tol) {
    require_members(model, delta);
    SwitchOutcome outcome;
    outcome.member_values.reserve(delta.members.size());
    for (size_t i = 0; i < delta.members.size(); ++i) {
        outcome.member_values.push_back(
            evaluator ? evaluator(delta.members[i], static_cast<int>(i))
                      : evaluate_exact(model, delta.members[i]));
        if (outcome.member_values.back().size() != model.num_states)
            throw std::invalid_argument("member evaluation dimension mismatch");
    }
    outcome.policy.resize(static_cast<size_t>(model.num_states));
    outcome.source_index.resize(static_cast<size_t>(model.num_states));
    std::vector<double> at_state(delta.members.size());
    for (int x = 0; x < model.num_states; ++x) {
        for (size_t i = 0; i < delta.members.size(); ++i)
            at_state[i] = outcome.member_values[i](x);
        const int chosen = pick_member(at_state, delta.incumbent, tol);
        outcome.source_index[x] = chosen;
        outcome.policy[x] = delta.members[static_cast<size_t>(chosen)][x];
    }
    return outcome;
}

std::pair<int, std::vector<double>> switch_at_state(const PolicySet& delta, int x,
                                                    const StateEvaluator& evaluator, double tol) {
    if (delta.members.empty()) throw std::invalid_argument("empty policy set");
    std::vector<double> values(delta.members.size());
    for (size_t i = 0; i < delta.members.size(); ++i)
        values[i] = evaluator(delta.members[i], static_cast<int>(i), x);
    return {pick_member(values, delta.incumbent, tol), values};
}

PolicySet local_neighborhood(const MdpModel& model, const Policy& policy, int x) {
    require_admissible(model, policy);
    if (x < 0 || x >= model.num_states) throw std::invalid_argument("state out of range");
    PolicySet set;
    for (int a = 0; a < model.num_actions(x); ++a) {
        Policy member = policy;
        member[x] = a;
        set.members.push_back(std::move(member));
    }
    set.incumbent = policy[x];
    return set;
}

bool strictly_improves(const MdpModel& model, const Policy& candidate, const Policy& base,
                       double tol) {
    const ValueVector vc = evaluate_exact(model, candidate);
    const ValueVector vb = evaluate_exact(model, base);
    if (((vc - vb).array() < -kImproveTol).any()) return false;
    return ((vc - vb).array() > tol).any();
}

bool in_better_set(const MdpModel& model, const Policy& candidate, const Policy& base,
                   double tol) {
    require_admissible(model, candidate);
    require_admissible(model, base);
    const ValueVector vb = evaluate_exact(model, base);
    const AnalysisReport report = analyze(model, base, vb, tol);
    bool differs = false;
    for (int x = 0; x < model.num_states; ++x) {
        if (candidate[x] == base[x]) continue;
        differs = true;
        const auto& sw = report.switchable[static_cast<size_t>(x)];
        if (std::find(sw.begin(), sw.end(), candidate[x]) == sw.end()) return false;
    }
    return differs;
}

MultiImprovementReport verify_multi_policy_improvement(const MdpModel& model,
                                                       const PolicySet& delta,
                                                       const Policy& base) {
    require_members(model, delta);
    require_admissible(model, base);
    MultiImprovementReport report;
    for (size_t i = 0; i < delta.members.size(); ++i)
        if (in_better_set(model, delta.members[i], base)) {
            report.hypothesis_met = true;
            report.better_member = static_cast<int>(i);
            break;
        }

    const SwitchOutcome outcome = policy_switch(model, delta);
    report.switched = outcome.policy;
    report.switched_values = evaluate_exact(model, outcome.policy);
    report.strict_improvement = strictly_improves(model, outcome.policy, base);
    report.dominates_members = true;
    for (size_t i = 0; i < delta.members.size(); ++i) {
        if (((report.switched_values - outcome.member_values[i]).array() < -1e-7).any()) {
            report.dominates_members = false;
            report.violating_member = static_cast<int>(i);
            break;
        }
    }
    return report;
}

}  // namespace mdpkit
