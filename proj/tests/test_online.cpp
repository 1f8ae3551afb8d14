#include "mdpkit/generators.hpp"
#include "mdpkit/online.hpp"

#include <doctest.h>

#include <random>

using namespace mdpkit;

namespace {

StateEvaluator exact_evaluator(const MdpModel& model) {
    return [&model](const Policy& member, int, int state) {
        return evaluate_exact(model, member)(state);
    };
}

}  // namespace

TEST_CASE("env_step follows the transition row") {
    const MdpModel model = make_det2();
    const RngStreamKey stream{123, 0, 0};
    CHECK(env_step(model, 0, 1, stream, 0) == 1);  // deterministic cross
    CHECK(env_step(model, 1, 0, stream, 0) == 1);  // deterministic stay
    CHECK_THROWS_AS(env_step(model, 0, 5, stream, 0), std::invalid_argument);

    // inverse CDF on a fifty-fifty row
    MdpModel coin = make_det2();
    coin.transitions[0].row(0) << 0.5, 0.5;
    CHECK(sample_transition(coin, 0, 0, 0.25) == 0);
    CHECK(sample_transition(coin, 0, 0, 0.75) == 1);
}

TEST_CASE("opi_step on det2") {
    const MdpModel model = make_det2();
    CHECK(opi_step(model, {0, 0}, 0) == Policy{1, 0});
    CHECK(opi_step(model, {0, 0}, 1) == Policy{0, 0});  // state 1 not improvable
    CHECK(opi_step(model, {1, 0}, 0) == Policy{1, 0});  // already optimal
}

TEST_CASE("pspi_step on det2") {
    const MdpModel model = make_det2();
    const auto evaluator = exact_evaluator(model);
    CHECK(pspi_step(model, {0, 0}, 0, evaluator) == Policy{1, 0});
    CHECK(pspi_step(model, {1, 0}, 1, evaluator) == Policy{1, 0});  // incumbent wins 20 vs 0

    MdpModel singleton = make_det2();
    singleton.rewards[0] = Eigen::VectorXd::Constant(1, 1.0);
    singleton.transitions[0] = singleton.transitions[0].topRows(1).eval();
    singleton.action_names[0] = {"a"};
    CHECK(pspi_step(singleton, {0, 0}, 0, exact_evaluator(singleton)) == Policy{0, 0});
}

TEST_CASE("pspi_step_extended on det2") {
    const MdpModel model = make_det2();
    const auto evaluator = exact_evaluator(model);
    CHECK(pspi_step_extended(model, {0, 0}, 0, PolicySet{}, evaluator) ==
          pspi_step(model, {0, 0}, 0, evaluator));

    // both (a,a) and (b,a) are worth 20 at state 1: incumbent consistency keeps a
    PolicySet extra{{{1, 0}}, std::nullopt};
    CHECK(pspi_step_extended(model, {0, 0}, 1, extra, evaluator) == Policy{0, 0});

    // an optimal extra member forces an optimal action at the queried state
    PolicySet optimal_extra{{{1, 0}}, std::nullopt};
    const Policy updated = pspi_step_extended(model, {0, 0}, 0, optimal_extra, evaluator);
    CHECK(updated[0] == 1);
}

TEST_CASE("online pspi run on det2 stabilizes after one change") {
    const MdpModel model = make_det2();
    const auto result =
        run_online(model, {0, 0}, 0, OnlineAlgo::Pspi, 5, EvalMode::Exact, OnlineConfig{}, 7);
    REQUIRE(result.trajectory.steps.size() == 5);
    CHECK(result.trajectory.steps[0].changed);
    CHECK(result.trajectory.steps[0].policy == Policy{1, 0});
    for (size_t i = 1; i < 5; ++i) CHECK(!result.trajectory.steps[i].changed);
    CHECK(result.stabilization.k_prime == 0);
    CHECK(result.stabilization.chi == std::set<int>{1});
    CHECK(result.stabilization.unsettled);  // 4 trailing steps < 10*|X|

    const auto opi_result =
        run_online(model, {0, 0}, 0, OnlineAlgo::Opi, 5, EvalMode::Exact, OnlineConfig{}, 7);
    for (size_t i = 0; i < 5; ++i)
        CHECK(opi_result.trajectory.steps[i].policy == result.trajectory.steps[i].policy);
}

TEST_CASE("trajectories only change the current state's action") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const MdpModel model =
            generate_random_mdp(4, 3, 2, 0, 1, 0.9, rng());
        const auto result = run_online(model, lex_first_policy(model), 0, OnlineAlgo::Pspi, 60,
                                       EvalMode::Exact, OnlineConfig{}, rng());
        Policy prev = lex_first_policy(model);
        for (const auto& step : result.trajectory.steps) {
            for (int x = 0; x < model.num_states; ++x)
                if (x != step.state) CHECK(step.policy[x] == prev[x]);
            prev = step.policy;
        }
    }
}

TEST_CASE("detect_stabilization handles edge cases") {
    Trajectory traj;
    traj.steps.push_back({0, 0, 0, {0, 0}, std::nullopt, false});
    const auto none = detect_stabilization(traj, 2);
    CHECK(!none.k_prime.has_value());
    CHECK(none.chi == std::set<int>{0});
    CHECK(none.unsettled);  // single step < window

    CHECK_THROWS_AS(detect_stabilization(Trajectory{}, 2), std::invalid_argument);
}

TEST_CASE("local optimality on det2") {
    const MdpModel model = make_det2();
    {
        const auto report = verify_local_optimality(model, {1, 0}, {1});
        CHECK(report.closed);
        CHECK(report.locally_optimal);
    }
    {
        const auto report = verify_local_optimality(model, {1, 0}, {0, 1});
        CHECK(report.closed);
        CHECK(report.locally_optimal);  // full restriction: globally optimal policy
    }
    {
        // state 0 under action b exits chi = {0}
        const auto report = verify_local_optimality(model, {1, 0}, {0});
        CHECK(!report.closed);
    }
}

TEST_CASE("trapped absorb2 run is locally but not globally optimal") {
    const MdpModel model = make_absorb2();
    const auto result =
        run_online(model, {0, 0}, 1, OnlineAlgo::Pspi, 40, EvalMode::Exact, OnlineConfig{}, 3);
    CHECK(!result.stabilization.k_prime.has_value());  // nothing ever changes at state 1
    CHECK(result.local_report.chi == std::vector<int>{1});
    CHECK(result.local_report.closed);
    CHECK(result.local_report.locally_optimal);
    CHECK(!is_optimal(model, result.trajectory.final_policy));
    CHECK(!result.stabilization.unsettled);
}

TEST_CASE("exact mode records monotone value snapshots") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const MdpModel model = generate_random_mdp(4, 2, 2, -1, 1, 0.9, rng());
        for (const OnlineAlgo algo : {OnlineAlgo::Opi, OnlineAlgo::Pspi}) {
            const auto result = run_online(model, lex_first_policy(model), 0, algo, 50,
                                           EvalMode::Exact, OnlineConfig{}, rng());
            const ValueVector* prev = nullptr;
            for (const auto& step : result.trajectory.steps) {
                REQUIRE(step.values.has_value());
                if (prev) CHECK(((*step.values - *prev).array() >= -1e-9).all());
                prev = &*step.values;
            }
        }
    }
}

TEST_CASE("rollout mode is rejected for opi") {
    const MdpModel model = make_det2();
    CHECK_THROWS_AS(run_online(model, {0, 0}, 0, OnlineAlgo::Opi, 5, EvalMode::Rollout,
                               OnlineConfig{}, 1),
                    std::invalid_argument);
}

TEST_CASE("rollout-mode pspi run finds the det2 optimum") {
    const MdpModel model = make_det2();
    OnlineConfig config;
    config.rollout.horizon = 40;
    config.rollout.replications = 8;
    const auto result =
        run_online(model, {0, 0}, 0, OnlineAlgo::Pspi, 10, EvalMode::Rollout, config, 5);
    CHECK(result.trajectory.final_policy == Policy{1, 0});
    // one-state discipline holds in rollout mode too
    Policy prev{0, 0};
    for (const auto& step : result.trajectory.steps) {
        for (int x = 0; x < model.num_states; ++x)
            if (x != step.state) CHECK(step.policy[x] == prev[x]);
        prev = step.policy;
    }
}
