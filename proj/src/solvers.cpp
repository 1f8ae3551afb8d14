#include "mdpkit/solvers.hpp"

#include <chrono>
#include <random>
#include <stdexcept>

namespace mdpkit {

std::string to_string(DeltaStrategy s) {
    switch (s) {
        case DeltaStrategy::HowardGreedy: return "howard-greedy";
        case DeltaStrategy::ParallelPi: return "parallel-pi";
        case DeltaStrategy::RandomK: return "random-k";
    }
    return "?";
}

DeltaStrategy delta_strategy_from_string(const std::string& name) {
    if (name == "howard-greedy") return DeltaStrategy::HowardGreedy;
    if (name == "parallel-pi") return DeltaStrategy::ParallelPi;
    if (name == "random-k") return DeltaStrategy::RandomK;
    throw std::invalid_argument("unknown delta strategy: " + name);
}

namespace {

/// Greedy action at x against `values`, keeping `current` when it attains
/// the max within tol (consistent selection).
int greedy_action(const MdpModel& model, const ValueVector& values, int x, int current,
                  double tol) {
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int a = 0; a < model.num_actions(x); ++a) {
        const double q = q_value(model, values, x, a);
        if (q > best) {
            best = q;
            arg = a;
        }
    }
    if (q_value(model, values, x, current) >= best - tol) return current;
    return arg;
}

Policy howard_improvement(const MdpModel& model, const Policy& pi, const ValueVector& values,
                          const AnalysisReport& analysis, double tol) {
    Policy next = pi;
    for (int x : analysis.improvable) next[x] = greedy_action(model, values, x, pi[x], tol);
    return next;
}

/// Draws one improvable state per call according to the configured rule.
class StateSelector {
  public:
    StateSelector(const SolverConfig& config, int num_states)
        : config_(config), rng_(config.seed), num_states_(num_states) {}

    int pick(const std::vector<int>& improvable) {
        switch (config_.state_selection) {
            case StateSelection::Random:
                return improvable[static_cast<size_t>(rng_() % improvable.size())];
            case StateSelection::RoundRobin: {
                for (int probe = 0; probe < num_states_; ++probe) {
                    const int x = (cursor_ + probe) % num_states_;
                    if (std::find(improvable.begin(), improvable.end(), x) != improvable.end()) {
                        cursor_ = x + 1;
                        return x;
                    }
                }
                return improvable.front();
            }
            case StateSelection::GivenSequence: {
                while (sequence_pos_ < config_.state_sequence.size()) {
                    const int x = config_.state_sequence[sequence_pos_++];
                    if (std::find(improvable.begin(), improvable.end(), x) != improvable.end())
                        return x;
                }
                return improvable.front();
            }
        }
        return improvable.front();
    }

  private:
    const SolverConfig& config_;
    std::mt19937_64 rng_;
    int num_states_;
    int cursor_ = 0;
    size_t sequence_pos_ = 0;
};

std::vector<int> diff_states(const Policy& a, const Policy& b) {
    std::vector<int> out;
    for (size_t x = 0; x < a.size(); ++x)
        if (a[x] != b[x]) out.push_back(static_cast<int>(x));
    return out;
}

/// Shared solver loop: `improve` maps (pi, values, analysis) to the next
/// policy; iteration stops when the improvable set is empty.
template <typename Improve>
IterationTrace run_solver(const std::string& name, const MdpModel& model, const Policy& pi0,
                          const SolverConfig& config, Improve&& improve) {
    require_valid(model);
    require_admissible(model, pi0);
    if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");

    IterationTrace trace;
    trace.algorithm = name;
    Policy pi = pi0;
    for (int n = 0; n <= config.max_iterations; ++n) {
        const auto start = std::chrono::steady_clock::now();
        const ValueVector values = evaluate_exact(model, pi);
        const AnalysisReport analysis = analyze(model, pi, values, config.improve_tol);

        TraceStep step;
        step.iteration = n;
        step.policy = pi;
        step.values = values;
        step.improvable = analysis.improvable;

        if (analysis.improvable.empty()) {
            step.wall_seconds = std::chrono::duration<double>(
                std::chrono::steady_clock::now() - start).count();
            trace.steps.push_back(std::move(step));
            trace.final_policy = pi;
            trace.optimal = true;
            return trace;
        }
        if (n == config.max_iterations) break;

        Policy next = improve(pi, values, analysis);
        step.switched = diff_states(pi, next);
        step.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        trace.steps.push_back(std::move(step));
        pi = std::move(next);
    }
    trace.final_policy = pi;
    trace.optimal = false;
    throw std::runtime_error("solver '" + name + "' exceeded max_iterations");
}

}  // namespace

IterationTrace howard_pi(const MdpModel& model, const Policy& pi0, const SolverConfig& config) {
    return run_solver("howard", model, pi0, config,
                      [&](const Policy& pi, const ValueVector& values,
                          const AnalysisReport& analysis) {
                          return howard_improvement(model, pi, values, analysis,
                                                    config.improve_tol);
                      });
}

IterationTrace simplex_pi(const MdpModel& model, const Policy& pi0, const SolverConfig& config) {
    return run_solver("simplex", model, pi0, config,
                      [&](const Policy& pi, const ValueVector& values,
                          const AnalysisReport& analysis) {
                          int best_state = analysis.improvable.front();
                          for (int x : analysis.improvable)
                              if (analysis.advantages(x) > analysis.advantages(best_state))
                                  best_state = x;
                          Policy next = pi;
                          next[best_state] =
                              greedy_action(model, values, best_state, pi[best_state],
                                            config.improve_tol);
                          return next;
                      });
}

IterationTrace newton_pi(const MdpModel& model, const Policy& pi0, const SolverConfig& config) {
    StateSelector selector(config, model.num_states);
    return run_solver("newton", model, pi0, config,
                      [&](const Policy& pi, const ValueVector& values,
                          const AnalysisReport& analysis) {
                          const int x = selector.pick(analysis.improvable);
                          Policy next = pi;
                          next[x] = greedy_action(model, values, x, pi[x], config.improve_tol);
                          return next;
                      });
}

IterationTrace pspi_sync(const MdpModel& model, const Policy& pi0, const SolverConfig& config) {
    return run_solver(
        "pspi-sync", model, pi0, config,
        [&](const Policy& pi, const ValueVector&, const AnalysisReport&) {
            const DeltaResult delta =
                build_delta(model, pi, config.delta_strategy, config.seed, config.random_k,
                            config.improve_tol);
            bool intersects = false;
            for (const auto& member : delta.set.members)
                if (in_better_set(model, member, pi, config.improve_tol)) {
                    intersects = true;
                    break;
                }
            if (!intersects)
                throw std::runtime_error("delta strategy produced no strict improvement");

            PolicySet with_base = delta.set;
            with_base.members.push_back(pi);
            with_base.incumbent = static_cast<int>(with_base.members.size()) - 1;
            return policy_switch(model, with_base, {}, config.improve_tol).policy;
        });
}

IterationTrace pspi_async(const MdpModel& model, const Policy& pi0, const SolverConfig& config) {
    StateSelector selector(config, model.num_states);
    return run_solver(
        "pspi-async", model, pi0, config,
        [&](const Policy& pi, const ValueVector&, const AnalysisReport& analysis) {
            const int x = selector.pick(analysis.improvable);
            const PolicySet neighborhood = local_neighborhood(model, pi, x);
            const SwitchOutcome outcome =
                policy_switch(model, neighborhood, {}, config.improve_tol);
            Policy next = pi;
            next[x] = outcome.policy[x];
            return next;
        });
}

DeltaResult build_delta(const MdpModel& model, const Policy& pi, DeltaStrategy strategy,
                        std::uint64_t seed, int random_k, double improve_tol) {
    require_valid(model);
    require_admissible(model, pi);
    const ValueVector values = evaluate_exact(model, pi);
    const AnalysisReport analysis = analyze(model, pi, values, improve_tol);

    DeltaResult result;
    if (analysis.improvable.empty()) {
        result.base_optimal = true;
        return result;
    }

    switch (strategy) {
        case DeltaStrategy::HowardGreedy:
            result.set.members.push_back(
                howard_improvement(model, pi, values, analysis, improve_tol));
            break;
        case DeltaStrategy::ParallelPi: {
            result.set.members.push_back(
                howard_improvement(model, pi, values, analysis, improve_tol));
            int best_state = analysis.improvable.front();
            for (int x : analysis.improvable)
                if (analysis.advantages(x) > analysis.advantages(best_state)) best_state = x;
            Policy simplex_next = pi;
            simplex_next[best_state] =
                greedy_action(model, values, best_state, pi[best_state], improve_tol);
            result.set.members.push_back(std::move(simplex_next));
            std::mt19937_64 rng(seed);
            const int x =
                analysis.improvable[static_cast<size_t>(rng() % analysis.improvable.size())];
            Policy newton_next = pi;
            newton_next[x] = greedy_action(model, values, x, pi[x], improve_tol);
            result.set.members.push_back(std::move(newton_next));
            break;
        }
        case DeltaStrategy::RandomK: {
            std::mt19937_64 rng(seed);
            for (int i = 0; i < random_k; ++i) {
                const int x =
                    analysis.improvable[static_cast<size_t>(rng() % analysis.improvable.size())];
                const auto& switchable = analysis.switchable[static_cast<size_t>(x)];
                Policy next = pi;
                next[x] = switchable[static_cast<size_t>(rng() % switchable.size())];
                result.set.members.push_back(std::move(next));
            }
            break;
        }
    }
    return result;
}

}  // namespace mdpkit
