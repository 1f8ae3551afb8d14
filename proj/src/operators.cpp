#include "mdpkit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mdpkit {

namespace {

void require_dimension(const MdpModel& model, const ValueVector& u) {
    if (u.size() != model.num_states)
        throw std::invalid_argument("value vector dimension mismatch");
}

}  // namespace

ValueVector policy_backup(const MdpModel& model, const Policy& policy, const ValueVector& u) {
    require_admissible(model, policy);
    require_dimension(model, u);
    ValueVector out(model.num_states);
    for (int x = 0; x < model.num_states; ++x) {
        const int a = policy[x];
        out(x) = model.reward(x, a) + model.gamma * model.transition_row(x, a).dot(u);
    }
    return out;
}

std::pair<ValueVector, Policy> bellman_backup(const MdpModel& model, const ValueVector& u) {
    require_dimension(model, u);
    ValueVector out(model.num_states);
    Policy greedy(static_cast<size_t>(model.num_states), 0);
    for (int x = 0; x < model.num_states; ++x) {
        double best = -std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int a = 0; a < model.num_actions(x); ++a) {
            const double q = model.reward(x, a) + model.gamma * model.transition_row(x, a).dot(u);
            if (q > best) {
                best = q;
                arg = a;
            }
        }
        out(x) = best;
        greedy[x] = arg;
    }
    return {out, greedy};
}

double q_value(const MdpModel& model, const ValueVector& u, int x, int a) {
    require_dimension(model, u);
    if (x < 0 || x >= model.num_states) throw std::invalid_argument("state out of range");
    if (a < 0 || a >= model.num_actions(x))
        throw std::invalid_argument("inadmissible action for q_value");
    return model.reward(x, a) + model.gamma * model.transition_row(x, a).dot(u);
}

ValueVector evaluate_exact(const MdpModel& model, const Policy& policy) {
    require_admissible(model, policy);
    const int n = model.num_states;
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    ValueVector rhs(n);
    for (int x = 0; x < n; ++x) {
        system.row(x) -= model.gamma * model.transition_row(x, policy[x]);
        rhs(x) = model.reward(x, policy[x]);
    }
    ValueVector values = system.partialPivLu().solve(rhs);
    if (!values.allFinite())
        throw std::runtime_error("policy evaluation solve produced non-finite values");
    return values;
}

IterativeResult evaluate_iterative(const MdpModel& model, const Policy& policy, double tol,
                                   int max_iters) {
    require_admissible(model, policy);
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const double stop = tol * (1.0 - model.gamma) / model.gamma;
    IterativeResult result;
    result.values = ValueVector::Zero(model.num_states);
    for (int k = 0; k < max_iters; ++k) {
        ValueVector next = policy_backup(model, policy, result.values);
        result.residual = (next - result.values).lpNorm<Eigen::Infinity>();
        result.values = std::move(next);
        result.iterations = k + 1;
        if (result.residual <= stop) {
            result.converged = true;
            return result;
        }
    }
    return result;
}

AnalysisReport analyze(const MdpModel& model, const Policy& policy, const ValueVector& values,
                       double improve_tol) {
    require_admissible(model, policy);
    AnalysisReport report;
    report.switchable.resize(static_cast<size_t>(model.num_states));
    report.advantages = ValueVector::Zero(model.num_states);
    for (int x = 0; x < model.num_states; ++x) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < model.num_actions(x); ++a) {
            const double q = q_value(model, values, x, a);
            best = std::max(best, q);
            if (q > values(x) + improve_tol) report.switchable[x].push_back(a);
        }
        report.advantages(x) = best - values(x);
        if (!report.switchable[x].empty()) report.improvable.push_back(x);
    }
    return report;
}

bool is_optimal(const MdpModel& model, const Policy& policy, double improve_tol) {
    const ValueVector values = evaluate_exact(model, policy);
    return analyze(model, policy, values, improve_tol).improvable.empty();
}

BruteForceResult brute_force_optimal(const MdpModel& model, long long cap) {
    require_valid(model);
    if (model.policy_count(cap) > cap)
        throw std::runtime_error("policy enumeration cap exceeded");

    const auto for_each_policy = [&](auto&& body) {
        Policy pi = lex_first_policy(model);
        while (true) {
            body(pi);
            int x = model.num_states - 1;
            while (x >= 0) {
                if (++pi[x] < model.num_actions(x)) break;
                pi[x] = 0;
                --x;
            }
            if (x < 0) return;
        }
    };

    ValueVector best = ValueVector::Constant(model.num_states,
                                             -std::numeric_limits<double>::infinity());
    for_each_policy([&](const Policy& pi) {
        best = best.cwiseMax(evaluate_exact(model, pi));
    });

    // Second pass: lexicographically first policy attaining V* everywhere.
    BruteForceResult result;
    result.values = best;
    bool found = false;
    for_each_policy([&](const Policy& pi) {
        if (found) return;
        const ValueVector v = evaluate_exact(model, pi);
        if (((best - v).array() <= kImproveTol).all()) {
            result.policy = pi;
            found = true;
        }
    });
    if (!found) throw std::runtime_error("no policy attains the componentwise optimum");
    return result;
}

bool is_communicating(const MdpModel& model) {
    const int n = model.num_states;
    std::vector<std::vector<int>> fwd(n), bwd(n);
    for (int x = 0; x < n; ++x)
        for (int a = 0; a < model.num_actions(x); ++a)
            for (int y = 0; y < n; ++y)
                if (model.transitions[x](a, y) > 0.0) {
                    fwd[x].push_back(y);
                    bwd[y].push_back(x);
                }

    const auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(static_cast<size_t>(n), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int y : adj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    ++count;
                    stack.push_back(y);
                }
        }
        return count == n;
    };
    return reaches_all(fwd) && reaches_all(bwd);
}

}  // namespace mdpkit
