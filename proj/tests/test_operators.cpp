#include "mdpkit/generators.hpp"
#include "mdpkit/operators.hpp"

#include <doctest.h>

#include <random>

using namespace mdpkit;

namespace {

ValueVector vec2(double a, double b) {
    ValueVector v(2);
    v << a, b;
    return v;
}

MdpModel single_self_loop(double reward, double gamma) {
    MdpModel model;
    model.num_states = 1;
    model.gamma = gamma;
    model.rewards = {Eigen::VectorXd::Constant(1, reward)};
    model.transitions = {Eigen::MatrixXd::Constant(1, 1, 1.0)};
    return model;
}

}  // namespace

TEST_CASE("policy backup on det2") {
    const MdpModel model = make_det2();
    CHECK(policy_backup(model, {0, 0}, vec2(0, 0)).isApprox(vec2(1, 2), 1e-15));
    CHECK(policy_backup(model, {0, 0}, vec2(10, 20)).isApprox(vec2(10, 20), 1e-15));
    CHECK(policy_backup(model, {1, 0}, vec2(10, 20)).isApprox(vec2(18, 20), 1e-15));
    CHECK_THROWS_AS(policy_backup(model, {0, 0}, ValueVector::Zero(3)), std::invalid_argument);
}

TEST_CASE("bellman backup on det2") {
    const MdpModel model = make_det2();
    auto [values, greedy] = bellman_backup(model, vec2(10, 20));
    CHECK(values.isApprox(vec2(18, 20), 1e-15));
    CHECK(greedy == Policy{1, 0});
    auto [v0, g0] = bellman_backup(model, vec2(0, 0));
    CHECK(v0.isApprox(vec2(1, 2), 1e-15));
    CHECK(g0 == Policy{0, 0});
}

TEST_CASE("bellman backup equals policy backup on a single-action model") {
    const MdpModel model = single_self_loop(1.0, 0.5);
    const ValueVector u = ValueVector::Constant(1, 3.0);
    CHECK(bellman_backup(model, u).first.isApprox(policy_backup(model, {0}, u), 1e-15));
}

TEST_CASE("q values on det2") {
    const MdpModel model = make_det2();
    CHECK(q_value(model, vec2(10, 20), 0, 1) == doctest::Approx(18).epsilon(1e-15));
    CHECK(q_value(model, vec2(10, 20), 1, 1) == doctest::Approx(9).epsilon(1e-15));
    CHECK(q_value(model, vec2(0, 0), 0, 0) == doctest::Approx(1).epsilon(1e-15));
    CHECK_THROWS_AS(q_value(model, vec2(0, 0), 0, 2), std::invalid_argument);
}

TEST_CASE("exact evaluation on det2") {
    const MdpModel model = make_det2();
    CHECK(evaluate_exact(model, {0, 0}).isApprox(vec2(10, 20), 1e-12));
    CHECK(evaluate_exact(model, {1, 1}).norm() == doctest::Approx(0).epsilon(1e-12));

    MdpModel zero = make_det2();
    zero.rewards[0].setZero();
    zero.rewards[1].setZero();
    CHECK(evaluate_exact(zero, {0, 0}).norm() == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("iterative evaluation matches exact") {
    const MdpModel model = make_det2();
    const auto result = evaluate_iterative(model, {0, 0}, 1e-6, 100000);
    CHECK(result.converged);
    CHECK((result.values - vec2(10, 20)).lpNorm<Eigen::Infinity>() <= 1e-6);

    const auto geo = evaluate_iterative(single_self_loop(1.0, 0.5), {0}, 1e-9, 1000);
    CHECK(geo.converged);
    CHECK(geo.values(0) == doctest::Approx(2.0).epsilon(1e-8));

    const auto truncated = evaluate_iterative(model, {0, 0}, 1e-6, 1);
    CHECK(!truncated.converged);
    CHECK(truncated.values.isApprox(vec2(1, 2), 1e-15));
}

TEST_CASE("analysis of det2 policies") {
    const MdpModel model = make_det2();
    {
        const auto report = analyze(model, {0, 0}, evaluate_exact(model, {0, 0}));
        CHECK(report.switchable[0] == std::vector<int>{1});
        CHECK(report.switchable[1].empty());
        CHECK(report.improvable == std::vector<int>{0});
        CHECK(report.advantages(0) == doctest::Approx(8).epsilon(1e-12));
    }
    {
        const auto report = analyze(model, {1, 0}, evaluate_exact(model, {1, 0}));
        CHECK(report.improvable.empty());
    }
    {
        const auto report = analyze(model, {1, 1}, evaluate_exact(model, {1, 1}));
        CHECK(report.improvable == std::vector<int>{0, 1});
        CHECK(report.advantages.isApprox(vec2(1, 2), 1e-12));
    }
}

TEST_CASE("optimality checks") {
    const MdpModel model = make_det2();
    CHECK(is_optimal(model, {1, 0}));
    CHECK(!is_optimal(model, {0, 0}));
    CHECK(is_optimal(single_self_loop(1.0, 0.5), {0}));
}

TEST_CASE("brute force optimum") {
    const MdpModel model = make_det2();
    const auto result = brute_force_optimal(model);
    CHECK(result.policy == Policy{1, 0});
    CHECK(result.values.isApprox(vec2(18, 20), 1e-12));
}

TEST_CASE("brute force ties pick the lexicographically first policy") {
    MdpModel zero = make_det2();
    zero.rewards[0].setZero();
    zero.rewards[1].setZero();
    const auto result = brute_force_optimal(zero);
    CHECK(result.policy == Policy{0, 0});
    CHECK(result.values.norm() == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("brute force on a one-state two-action model") {
    MdpModel model;
    model.num_states = 1;
    model.gamma = 0.5;
    model.rewards = {vec2(1, 2)};
    model.transitions = {Eigen::MatrixXd::Constant(2, 1, 1.0)};
    const auto result = brute_force_optimal(model);
    CHECK(result.policy == Policy{1});
    CHECK(result.values(0) == doctest::Approx(4).epsilon(1e-12));
}

TEST_CASE("brute force respects the enumeration cap") {
    const MdpModel model = generate_random_mdp(6, 3, 2, 0, 1, 0.9, 1);
    CHECK_THROWS_AS(brute_force_optimal(model, 100), std::runtime_error);
}

TEST_CASE("communicating check") {
    CHECK(is_communicating(make_det2()));
    CHECK(!is_communicating(make_absorb2()));
    MdpModel single;
    single.num_states = 1;
    single.gamma = 0.5;
    single.rewards = {Eigen::VectorXd::Constant(1, 1.0)};
    single.transitions = {Eigen::MatrixXd::Constant(1, 1, 1.0)};
    CHECK(is_communicating(single));
}

TEST_CASE("fixed point, monotonicity and contraction properties") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const int na = 2 + static_cast<int>(rng() % 2);
        const MdpModel model =
            generate_random_mdp(n, na, 1 + static_cast<int>(rng() % n), -1, 1,
                                trial % 2 ? 0.9 : 0.5, rng());

        Policy pi(static_cast<size_t>(n));
        for (int x = 0; x < n; ++x) pi[x] = static_cast<int>(rng() % static_cast<size_t>(na));
        const ValueVector v = evaluate_exact(model, pi);
        CHECK((v - policy_backup(model, pi, v)).lpNorm<Eigen::Infinity>() <= 1e-9);

        ValueVector u = ValueVector::Random(n) * 5.0;
        ValueVector w = u + ValueVector::Random(n).cwiseAbs();
        CHECK(((policy_backup(model, pi, w) - policy_backup(model, pi, u)).array() >= -1e-12)
                  .all());
        CHECK(((bellman_backup(model, w).first - bellman_backup(model, u).first).array() >=
               -1e-12)
                  .all());

        const ValueVector r = ValueVector::Random(n) * 5.0;
        CHECK((bellman_backup(model, u).first - bellman_backup(model, r).first)
                  .lpNorm<Eigen::Infinity>() <=
              model.gamma * (u - r).lpNorm<Eigen::Infinity>() + 1e-12);
    }
}

TEST_CASE("is_optimal agrees with the brute-force oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const MdpModel model = generate_random_mdp(n, 2, 1 + static_cast<int>(rng() % n), 0, 1,
                                                   0.9, rng());
        const auto oracle = brute_force_optimal(model, 1024);
        Policy pi(static_cast<size_t>(n));
        for (int x = 0; x < n; ++x) pi[x] = static_cast<int>(rng() % 2);
        const bool matches_oracle =
            (evaluate_exact(model, pi) - oracle.values).lpNorm<Eigen::Infinity>() <= 1e-7;
        CHECK(is_optimal(model, pi) == matches_oracle);
    }
}
