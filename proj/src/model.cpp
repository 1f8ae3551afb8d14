#include "mdpkit/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mdpkit {

double MdpModel::reward_bound() const {
    double rmax = 0.0;
    for (int x = 0; x < num_states; ++x)
        for (int a = 0; a < num_actions(x); ++a)
            rmax = std::max(rmax, std::abs(rewards[x](a)));
    return rmax;
}

long long MdpModel::policy_count(long long cap) const {
    long long count = 1;
    for (int x = 0; x < num_states; ++x) {
        count *= num_actions(x);
        if (count > cap) return cap + 1;
    }
    return count;
}

std::vector<std::string> validate_model(const MdpModel& model) {
    std::vector<std::string> findings;
    auto add = [&](const std::string& msg) { findings.push_back(msg); };

    if (model.num_states < 1) add("num_states must be positive");
    if (!(model.gamma > 0.0 && model.gamma < 1.0)) {
        std::ostringstream os;
        os << "gamma " << model.gamma << " not in (0,1)";
        add(os.str());
    }
    const auto n = static_cast<size_t>(std::max(model.num_states, 0));
    if (model.rewards.size() != n) add("rewards not defined for every state");
    if (model.transitions.size() != n) add("transitions not defined for every state");
    if (!model.action_names.empty() && model.action_names.size() != n)
        add("action_names size mismatch");
    if (model.rewards.size() != n || model.transitions.size() != n) return findings;

    for (int x = 0; x < model.num_states; ++x) {
        const int na = static_cast<int>(model.rewards[x].size());
        if (na < 1) {
            std::ostringstream os;
            os << "state " << x << " has no admissible action";
            add(os.str());
            continue;
        }
        if (model.transitions[x].rows() != na || model.transitions[x].cols() != model.num_states) {
            std::ostringstream os;
            os << "state " << x << " transition block is " << model.transitions[x].rows() << "x"
               << model.transitions[x].cols() << ", expected " << na << "x" << model.num_states;
            add(os.str());
            continue;
        }
        if (!model.action_names.empty() &&
            static_cast<int>(model.action_names[x].size()) != na) {
            std::ostringstream os;
            os << "state " << x << " action name count mismatch";
            add(os.str());
        }
        for (int a = 0; a < na; ++a) {
            if (!std::isfinite(model.rewards[x](a))) {
                std::ostringstream os;
                os << "reward(" << x << "," << a << ") not finite";
                add(os.str());
            }
            const auto row = model.transitions[x].row(a);
            if ((row.array() < 0.0).any()) {
                std::ostringstream os;
                os << "transition row (" << x << "," << a << ") has a negative entry";
                add(os.str());
            }
            const double sum = row.sum();
            if (std::abs(sum - 1.0) > kRowSumTol) {
                std::ostringstream os;
                os << "transition row (" << x << "," << a << ") sum " << sum << " != 1";
                add(os.str());
            }
        }
    }
    return findings;
}

void require_valid(const MdpModel& model) {
    const auto findings = validate_model(model);
    if (findings.empty()) return;
    std::ostringstream os;
    os << "invalid model:";
    for (const auto& f : findings) os << "\n  " << f;
    throw std::invalid_argument(os.str());
}

bool is_admissible(const MdpModel& model, const Policy& policy) {
    if (static_cast<int>(policy.size()) != model.num_states) return false;
    for (int x = 0; x < model.num_states; ++x)
        if (policy[x] < 0 || policy[x] >= model.num_actions(x)) return false;
    return true;
}

void require_admissible(const MdpModel& model, const Policy& policy) {
    if (!is_admissible(model, policy))
        throw std::invalid_argument("policy is not admissible for the model");
}

Policy lex_first_policy(const MdpModel& model) {
    return Policy(static_cast<size_t>(model.num_states), 0);
}

std::string encode_policy(const Policy& policy) {
    std::ostringstream os;
    for (size_t i = 0; i < policy.size(); ++i) {
        if (i) os << '-';
        os << policy[i];
    }
    return os.str();
}

Policy decode_policy(const std::string& text) {
    Policy policy;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, '-')) {
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad policy encoding: " + text);
        policy.push_back(v);
    }
    if (policy.empty()) throw std::invalid_argument("empty policy encoding");
    return policy;
}

}  // namespace mdpkit
