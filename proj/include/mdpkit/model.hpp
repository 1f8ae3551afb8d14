#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mdpkit {

using ValueVector = Eigen::VectorXd;

/// Deterministic stationary policy: actions[x] indexes the admissible
/// action list of state x.
using Policy = std::vector<int>;

/// Finite discounted MDP. Actions are identified by their index in each
/// state's admissible list; transitions[x].row(a) is the probability
/// distribution over next states for (x, a).
struct MdpModel {
    int num_states = 0;
    double gamma = 0.0;
    std::vector<std::vector<std::string>> action_names;  // per state, size = |A(x)|
    std::vector<Eigen::VectorXd> rewards;                // per state, size = |A(x)|
    std::vector<Eigen::MatrixXd> transitions;            // per state, |A(x)| x |X|

    int num_actions(int x) const { return static_cast<int>(rewards[x].size()); }
    double reward(int x, int a) const { return rewards[x](a); }
    auto transition_row(int x, int a) const { return transitions[x].row(a); }

    /// max |R(x,a)| over admissible pairs.
    double reward_bound() const;

    /// Number of deterministic policies, saturating at `cap + 1`.
    long long policy_count(long long cap) const;
};

inline constexpr double kRowSumTol = 1e-9;
inline constexpr double kImproveTol = 1e-9;

/// Checks every model invariant. Empty result means the model is valid;
/// each finding names the offending state/action/row.
std::vector<std::string> validate_model(const MdpModel& model);

/// Throws std::invalid_argument listing the findings if the model is invalid.
void require_valid(const MdpModel& model);

bool is_admissible(const MdpModel& model, const Policy& policy);

/// Throws if the policy length or any entry is out of range for the model.
void require_admissible(const MdpModel& model, const Policy& policy);

/// Lexicographically-first policy (action 0 everywhere).
Policy lex_first_policy(const MdpModel& model);

/// Dash-joined per-state action indices, e.g. "1-0".
std::string encode_policy(const Policy& policy);
Policy decode_policy(const std::string& text);

}  // namespace mdpkit
