#include "mdpkit/generators.hpp"

#include <numeric>
#include <random>
#include <stdexcept>

namespace mdpkit {

namespace {

// Distribution helpers on raw engine output, so generated models do not
// depend on the standard library's distribution implementations.
double uniform01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;  // in (0,1)
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::vector<int> distinct_successors(std::mt19937_64& rng, int num_states, int branching) {
    std::vector<int> pool(static_cast<size_t>(num_states));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < branching; ++i) {
        const auto j = i + static_cast<int>(bounded(rng, static_cast<std::uint64_t>(num_states - i)));
        std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
    }
    pool.resize(static_cast<size_t>(branching));
    return pool;
}

}  // namespace

MdpModel generate_random_mdp(int num_states, int num_actions, int branching, double reward_lo,
                             double reward_hi, double gamma, std::uint64_t seed) {
    if (num_states < 1 || num_actions < 1) throw std::invalid_argument("need states and actions");
    if (branching < 1 || branching > num_states)
        throw std::invalid_argument("branching must be in [1, num_states]");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma not in (0,1)");
    if (!(reward_lo <= reward_hi)) throw std::invalid_argument("empty reward range");

    std::mt19937_64 rng(seed);
    MdpModel model;
    model.num_states = num_states;
    model.gamma = gamma;
    model.rewards.resize(static_cast<size_t>(num_states));
    model.transitions.resize(static_cast<size_t>(num_states));
    model.action_names.resize(static_cast<size_t>(num_states));
    for (int x = 0; x < num_states; ++x) {
        model.rewards[x] = Eigen::VectorXd(num_actions);
        model.transitions[x] = Eigen::MatrixXd::Zero(num_actions, num_states);
        for (int a = 0; a < num_actions; ++a) {
            model.action_names[x].push_back("a" + std::to_string(a));
            model.rewards[x](a) = uniform_in(rng, reward_lo, reward_hi);
            const auto successors = distinct_successors(rng, num_states, branching);
            Eigen::VectorXd weights(branching);
            for (int i = 0; i < branching; ++i) weights(i) = uniform01(rng);
            weights /= weights.sum();
            for (int i = 0; i < branching; ++i)
                model.transitions[x](a, successors[static_cast<size_t>(i)]) = weights(i);
        }
    }
    return model;
}

MdpModel generate_communicating_mdp(int num_states, int num_actions, int branching,
                                    double reward_lo, double reward_hi, double gamma,
                                    std::uint64_t seed) {
    MdpModel model = generate_random_mdp(num_states, num_actions, branching, reward_lo,
                                         reward_hi, gamma, seed);
    for (int x = 0; x < num_states; ++x) {
        Eigen::RowVectorXd cycle = Eigen::RowVectorXd::Zero(num_states);
        cycle((x + 1) % num_states) = 1.0;
        model.transitions[x].row(0) = 0.9 * model.transitions[x].row(0) + 0.1 * cycle;
    }
    return model;
}

MdpModel make_det2() {
    // Two states, two actions each; action 0 ("a") self-loops, action 1
    // ("b") crosses. Rewards: R(0,a)=1, R(1,a)=2, both "b" rewards zero.
    MdpModel model;
    model.num_states = 2;
    model.gamma = 0.9;
    model.action_names = {{"a", "b"}, {"a", "b"}};
    model.rewards = {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(2.0, 0.0)};
    Eigen::MatrixXd t0(2, 2), t1(2, 2);
    t0 << 1, 0,  // a: stay
          0, 1;  // b: cross
    t1 << 0, 1,  // a: stay
          1, 0;  // b: cross
    model.transitions = {t0, t1};
    return model;
}

MdpModel make_absorb2() {
    // State 1 self-loops under every action, so the model is not
    // communicating. Left to its own devices, a run trapped at state 1
    // never revisits state 0's action choice.
    MdpModel model;
    model.num_states = 2;
    model.gamma = 0.9;
    model.action_names = {{"a", "b"}, {"a", "b"}};
    model.rewards = {Eigen::Vector2d(0.0, 5.0), Eigen::Vector2d(1.0, 0.0)};
    Eigen::MatrixXd t0(2, 2), t1(2, 2);
    t0 << 0, 1,  // a: to the absorbing state
          0, 1;  // b: to the absorbing state
    t1 << 0, 1,  // a: self-loop
          0, 1;  // b: self-loop
    model.transitions = {t0, t1};
    return model;
}

bool is_builtin_fixture(const std::string& name) { return name == "det2" || name == "absorb2"; }

MdpModel builtin_fixture(const std::string& name) {
    if (name == "det2") return make_det2();
    if (name == "absorb2") return make_absorb2();
    throw std::invalid_argument("unknown fixture: " + name);
}

}  // namespace mdpkit
