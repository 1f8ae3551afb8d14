#include "mdpkit/online.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdpkit {

namespace {

// Distinguishes the environment-noise stream from rollout candidate streams.
constexpr std::uint64_t kEnvStreamTag = 0xE57A7E5711111111ULL;

Policy adopt_at(const Policy& pi, int x, int action) {
    Policy next = pi;
    next[x] = action;
    return next;
}

}  // namespace

int env_step(const MdpModel& model, int x, int a, const RngStreamKey& stream,
             std::uint64_t step) {
    if (x < 0 || x >= model.num_states) throw std::invalid_argument("state out of range");
    if (a < 0 || a >= model.num_actions(x))
        throw std::invalid_argument("inadmissible action for env_step");
    return sample_transition(model, x, a, stream.uniform(step));
}

Policy opi_step(const MdpModel& model, const Policy& pi, int x, double tol) {
    require_admissible(model, pi);
    const ValueVector values = evaluate_exact(model, pi);
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int a = 0; a < model.num_actions(x); ++a) {
        const double q = q_value(model, values, x, a);
        if (q > best) {
            best = q;
            arg = a;
        }
    }
    if (q_value(model, values, x, pi[x]) >= best - tol) return pi;
    return adopt_at(pi, x, arg);
}

Policy pspi_step(const MdpModel& model, const Policy& pi, int x, const StateEvaluator& evaluator,
                 double tol) {
    const PolicySet neighborhood = local_neighborhood(model, pi, x);
    const int chosen = switch_at_state(neighborhood, x, evaluator, tol).first;
    return adopt_at(pi, x, neighborhood.members[static_cast<size_t>(chosen)][x]);
}

Policy pspi_step_extended(const MdpModel& model, const Policy& pi, int x, const PolicySet& extra,
                          const StateEvaluator& evaluator, double tol) {
    PolicySet candidates = local_neighborhood(model, pi, x);
    for (const auto& member : extra.members) {
        require_admissible(model, member);
        candidates.members.push_back(member);
    }
    const int chosen = switch_at_state(candidates, x, evaluator, tol).first;
    return adopt_at(pi, x, candidates.members[static_cast<size_t>(chosen)][x]);
}

OnlineResult run_online(const MdpModel& model, const Policy& pi0, int x0, OnlineAlgo algo,
                        int steps, EvalMode mode, const OnlineConfig& config,
                        std::uint64_t seed) {
    require_valid(model);
    require_admissible(model, pi0);
    if (x0 < 0 || x0 >= model.num_states) throw std::invalid_argument("x0 out of range");
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (algo == OnlineAlgo::Opi && mode == EvalMode::Rollout)
        throw std::invalid_argument("rollout mode is only available for the pspi update");

    const RngStreamKey env_stream{seed, kEnvStreamTag, 0};
    RolloutConfig rollout = config.rollout;
    rollout.seed = seed;

    OnlineResult result;
    result.trajectory.seed = seed;
    result.trajectory.mode = mode;

    Policy pi = pi0;
    ValueVector values;
    if (mode == EvalMode::Exact) values = evaluate_exact(model, pi);
    int x = x0;

    for (int k = 0; k < steps; ++k) {
        Policy next;
        if (algo == OnlineAlgo::Opi) {
            next = opi_step(model, pi, x, config.improve_tol);
        } else if (mode == EvalMode::Exact) {
            const StateEvaluator exact = [&](const Policy& member, int, int state) {
                return evaluate_exact(model, member)(state);
            };
            next = config.extra_candidates.members.empty()
                       ? pspi_step(model, pi, x, exact, config.improve_tol)
                       : pspi_step_extended(model, pi, x, config.extra_candidates, exact,
                                            config.improve_tol);
        } else {
            PolicySet candidates = local_neighborhood(model, pi, x);
            for (const auto& member : config.extra_candidates.members)
                candidates.members.push_back(member);
            const auto [action, report] =
                rollout.selector == Selector::Racing
                    ? racing_select(model, candidates, x, rollout)
                    : saa_select(model, candidates, x, rollout);
            next = adopt_at(pi, x, action);
        }

        TrajectoryStep step;
        step.k = k;
        step.state = x;
        step.changed = next != pi;
        step.policy = next;
        step.action = next[x];
        if (mode == EvalMode::Exact) {
            ValueVector next_values = step.changed ? evaluate_exact(model, next) : values;
            if (((next_values - values).array() < -kImproveTol).any())
                throw std::logic_error("online update violated value monotonicity");
            values = std::move(next_values);
            step.values = values;
        }
        result.trajectory.steps.push_back(step);

        pi = std::move(next);
        x = env_step(model, x, pi[x], env_stream, static_cast<std::uint64_t>(k));
    }
    result.trajectory.final_policy = pi;

    result.stabilization =
        detect_stabilization(result.trajectory, model.num_states, config.settle_window);
    std::vector<int> chi(result.stabilization.chi.begin(), result.stabilization.chi.end());
    // A change at the very last step leaves no visited states after it; fall
    // back to the post-run current state so the local report stays defined.
    if (chi.empty()) chi.push_back(x);
    result.local_report = verify_local_optimality(model, pi, chi);
    return result;
}

StabilizationResult detect_stabilization(const Trajectory& trajectory, int num_states,
                                         int settle_window) {
    if (trajectory.steps.empty()) throw std::invalid_argument("empty trajectory");
    if (settle_window < 0) settle_window = 10 * num_states;

    StabilizationResult result;
    int last_change = -1;
    for (const auto& step : trajectory.steps)
        if (step.changed) last_change = step.k;
    if (last_change >= 0) result.k_prime = last_change;

    for (const auto& step : trajectory.steps)
        if (step.k > last_change) result.chi.insert(step.state);
    const int tail = static_cast<int>(trajectory.steps.size()) - (last_change + 1);
    result.unsettled = tail < settle_window;
    return result;
}

LocalMdpReport verify_local_optimality(const MdpModel& model, const Policy& final_policy,
                                       const std::vector<int>& chi) {
    require_valid(model);
    require_admissible(model, final_policy);
    if (chi.empty()) throw std::invalid_argument("chi must be nonempty");

    LocalMdpReport report;
    report.chi = chi;
    report.final_policy = final_policy;

    std::vector<char> in_chi(static_cast<size_t>(model.num_states), 0);
    for (int x : chi) {
        if (x < 0 || x >= model.num_states) throw std::invalid_argument("chi state out of range");
        in_chi[static_cast<size_t>(x)] = 1;
    }

    report.closed = true;
    for (int x : chi) {
        const auto row = model.transition_row(x, final_policy[x]);
        for (int y = 0; y < model.num_states; ++y)
            if (!in_chi[static_cast<size_t>(y)] && row(y) > 0.0) {
                report.closed = false;
                break;
            }
        if (!report.closed) break;
    }
    if (!report.closed) return report;

    // Local restriction: actions free on chi, pinned to final_policy off chi.
    MdpModel local;
    local.num_states = model.num_states;
    local.gamma = model.gamma;
    local.rewards.resize(static_cast<size_t>(model.num_states));
    local.transitions.resize(static_cast<size_t>(model.num_states));
    Policy start(static_cast<size_t>(model.num_states), 0);
    for (int x = 0; x < model.num_states; ++x) {
        if (in_chi[static_cast<size_t>(x)]) {
            local.rewards[x] = model.rewards[x];
            local.transitions[x] = model.transitions[x];
            start[x] = final_policy[x];
        } else {
            local.rewards[x] = model.rewards[x].segment(final_policy[x], 1);
            local.transitions[x] = model.transitions[x].row(final_policy[x]);
            start[x] = 0;
        }
    }
    SolverConfig config;
    const IterationTrace trace = howard_pi(local, start, config);
    report.locally_optimal = trace.steps.size() == 1;  // zero improvement iterations
    return report;
}

}  // namespace mdpkit
