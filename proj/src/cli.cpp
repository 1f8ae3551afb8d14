#include "mdpkit/cli.hpp"

#include "mdpkit/generators.hpp"
#include "mdpkit/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

namespace mdpkit {

namespace {

MdpModel resolve_model(const std::string& spec) {
    if (is_builtin_fixture(spec)) return builtin_fixture(spec);
    return load_model(spec);
}

Policy resolve_pi0(const MdpModel& model, const std::string& spec) {
    if (spec == "lex") return lex_first_policy(model);
    if (spec.rfind("random:", 0) == 0) {
        std::mt19937_64 rng(std::stoull(spec.substr(7)));
        Policy pi(static_cast<size_t>(model.num_states));
        for (int x = 0; x < model.num_states; ++x)
            pi[x] = static_cast<int>(rng() % static_cast<std::uint64_t>(model.num_actions(x)));
        return pi;
    }
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open policy file: " + spec);
    std::string text;
    in >> text;
    Policy pi = decode_policy(text);
    require_admissible(model, pi);
    return pi;
}

long long enumeration_cap() {
    if (const char* env = std::getenv("MDPKIT_ENUM_CAP")) return std::stoll(env);
    return 1000000;
}

std::string value_line(const ValueVector& v) {
    std::string out;
    for (int i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_double(v(i));
    }
    return out;
}

TraceFormat parse_format(const std::string& name) {
    if (name == "csv") return TraceFormat::Csv;
    if (name == "jsonl") return TraceFormat::JsonLines;
    throw std::invalid_argument("unknown trace format: " + name);
}

int cmd_gen(int states, int actions, int branching, double gamma, std::uint64_t seed,
            bool communicating, double reward_lo, double reward_hi, const std::string& out) {
    const MdpModel model =
        communicating
            ? generate_communicating_mdp(states, actions, branching, reward_lo, reward_hi, gamma,
                                         seed)
            : generate_random_mdp(states, actions, branching, reward_lo, reward_hi, gamma, seed);
    save_model(model, out);
    std::cout << "wrote " << out << " (" << states << " states, " << actions << " actions)\n";
    return 0;
}

int cmd_solve(const std::string& model_spec, const std::string& algo, const std::string& pi0_spec,
              std::uint64_t seed, const std::string& strategy, int max_iters,
              const std::string& out, const std::string& format, bool full_values) {
    const MdpModel model = resolve_model(model_spec);
    require_valid(model);
    const Policy pi0 = resolve_pi0(model, pi0_spec);

    SolverConfig config;
    config.seed = seed;
    config.max_iterations = max_iters;
    config.delta_strategy = delta_strategy_from_string(strategy);

    IterationTrace trace;
    if (algo == "howard") trace = howard_pi(model, pi0, config);
    else if (algo == "simplex") trace = simplex_pi(model, pi0, config);
    else if (algo == "newton") trace = newton_pi(model, pi0, config);
    else if (algo == "pspi-sync") trace = pspi_sync(model, pi0, config);
    else if (algo == "pspi-async") trace = pspi_async(model, pi0, config);
    else throw std::invalid_argument("unknown solver: " + algo);

    if (!out.empty())
        emit_trace(trace_rows(trace, algo + "-" + std::to_string(seed), full_values), out,
                   parse_format(format));
    std::cout << "policy: " << encode_policy(trace.final_policy) << "\n"
              << "value: " << value_line(trace.steps.back().values) << "\n"
              << "iterations: " << trace.steps.size() - 1 << "\n";
    return 0;
}

int cmd_online(const std::string& model_spec, const std::string& algo, const std::string& mode,
               int steps, int x0, std::uint64_t seed, const std::string& pi0_spec, int horizon,
               int reps, bool crn, const std::string& selector, double eps,
               const std::string& out, const std::string& format, bool full_values) {
    const MdpModel model = resolve_model(model_spec);
    require_valid(model);
    const Policy pi0 = resolve_pi0(model, pi0_spec);

    OnlineConfig config;
    config.rollout.replications = reps;
    config.rollout.crn = crn;
    config.rollout.selector = selector == "racing" ? Selector::Racing : Selector::Saa;
    config.rollout.horizon =
        horizon > 0 ? horizon : truncation_horizon(model.gamma, std::max(model.reward_bound(), 1e-12), eps);

    const EvalMode eval_mode = mode == "rollout" ? EvalMode::Rollout : EvalMode::Exact;
    const OnlineAlgo online_algo = algo == "opi" ? OnlineAlgo::Opi : OnlineAlgo::Pspi;
    const OnlineResult result =
        run_online(model, pi0, x0, online_algo, steps, eval_mode, config, seed);

    if (!out.empty())
        emit_trace(trajectory_rows(result.trajectory, algo + "-" + std::to_string(seed),
                                   full_values && eval_mode == EvalMode::Exact),
                   out, parse_format(format));

    std::cout << "final policy: " << encode_policy(result.trajectory.final_policy) << "\n";
    std::cout << "last change k': "
              << (result.stabilization.k_prime ? std::to_string(*result.stabilization.k_prime)
                                               : std::string("none"))
              << (result.stabilization.unsettled ? " (unsettled)" : " (settled)") << "\n";
    std::cout << "chi:";
    for (int x : result.local_report.chi) std::cout << ' ' << x;
    std::cout << "\nclosed: " << (result.local_report.closed ? "true" : "false")
              << "\nlocally optimal: " << (result.local_report.locally_optimal ? "true" : "false")
              << "\n";
    return 0;
}

int cmd_verify(const std::string& model_spec) {
    const MdpModel model = resolve_model(model_spec);
    const auto findings = validate_model(model);
    if (!findings.empty()) {
        for (const auto& f : findings) std::cerr << "violation: " << f << "\n";
        return 1;
    }
    std::cout << "valid: true\n";
    std::cout << "communicating: " << (is_communicating(model) ? "true" : "false") << "\n";
    const long long cap = enumeration_cap();
    if (model.policy_count(cap) <= cap) {
        const BruteForceResult opt = brute_force_optimal(model, cap);
        std::cout << "optimal policy: " << encode_policy(opt.policy) << "\n"
                  << "optimal value: " << value_line(opt.values) << "\n";
    } else {
        std::cout << "optimal policy: skipped (policy count exceeds cap " << cap << ")\n";
    }
    return 0;
}

int cmd_compare(const std::string& model_spec, int steps, int num_seeds, std::uint64_t seed_base,
                int x0, const std::string& out) {
    const MdpModel model = resolve_model(model_spec);
    require_valid(model);
    const long long cap = enumeration_cap();
    std::optional<ValueVector> optimum;
    if (model.policy_count(cap) <= cap) optimum = brute_force_optimal(model, cap).values;

    std::ostringstream table;
    table << "seed,algo,k_prime,settled,value_gap\n";
    for (int i = 0; i < num_seeds; ++i) {
        const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(i);
        for (const OnlineAlgo algo : {OnlineAlgo::Opi, OnlineAlgo::Pspi}) {
            OnlineConfig config;
            const OnlineResult result = run_online(model, lex_first_policy(model), x0, algo,
                                                   steps, EvalMode::Exact, config, seed);
            table << seed << ',' << (algo == OnlineAlgo::Opi ? "opi" : "pspi") << ','
                  << (result.stabilization.k_prime
                          ? std::to_string(*result.stabilization.k_prime)
                          : std::string("none"))
                  << ',' << (result.stabilization.unsettled ? "false" : "true") << ',';
            if (optimum) {
                const ValueVector v = evaluate_exact(model, result.trajectory.final_policy);
                table << format_double((*optimum - v).lpNorm<Eigen::Infinity>());
            }
            table << "\n";
        }
    }
    std::cout << table.str();
    if (!out.empty()) {
        std::ofstream file(out, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot write " + out);
        file << table.str();
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Finite-MDP policy iteration toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random model document");
    int g_states = 4, g_actions = 2, g_branching = 2;
    double g_gamma = 0.9, g_lo = 0.0, g_hi = 1.0;
    std::uint64_t g_seed = 0;
    bool g_comm = false;
    std::string g_out;
    gen->add_option("--states", g_states);
    gen->add_option("--actions", g_actions);
    gen->add_option("--branching", g_branching);
    gen->add_option("--gamma", g_gamma);
    gen->add_option("--seed", g_seed);
    gen->add_flag("--communicating", g_comm);
    gen->add_option("--reward-lo", g_lo);
    gen->add_option("--reward-hi", g_hi);
    gen->add_option("--out", g_out)->required();

    // solve
    auto* solve = app.add_subcommand("solve", "Run an off-line solver");
    std::string s_model, s_algo, s_pi0 = "lex", s_strategy = "howard-greedy", s_out,
                s_format = "csv";
    std::uint64_t s_seed = 0;
    int s_max_iters = 100000;
    bool s_full = false;
    solve->add_option("--model", s_model)->required();
    solve->add_option("--algo", s_algo)->required();
    solve->add_option("--pi0", s_pi0);
    solve->add_option("--seed", s_seed);
    solve->add_option("--delta-strategy", s_strategy);
    solve->add_option("--max-iters", s_max_iters);
    solve->add_option("--out", s_out);
    solve->add_option("--format", s_format);
    solve->add_flag("--full-values", s_full);

    // online
    auto* online = app.add_subcommand("online", "Run the on-line engine");
    std::string o_model, o_algo = "pspi", o_mode = "exact", o_pi0 = "lex", o_selector = "saa",
                o_out, o_format = "csv";
    int o_steps = 100, o_x0 = 0, o_horizon = 0, o_reps = 16;
    std::uint64_t o_seed = 0;
    bool o_crn = true, o_full = false;
    double o_eps = 1e-3;
    online->add_option("--model", o_model)->required();
    online->add_option("--algo", o_algo)->check(CLI::IsMember({"opi", "pspi"}));
    online->add_option("--mode", o_mode)->check(CLI::IsMember({"exact", "rollout"}));
    online->add_option("--steps", o_steps);
    online->add_option("--x0", o_x0);
    online->add_option("--seed", o_seed);
    online->add_option("--pi0", o_pi0);
    online->add_option("--horizon", o_horizon);
    online->add_option("--reps", o_reps);
    online->add_flag("--crn,!--no-crn", o_crn);
    online->add_option("--selector", o_selector)->check(CLI::IsMember({"saa", "racing"}));
    online->add_option("--eps", o_eps);
    online->add_option("--out", o_out);
    online->add_option("--format", o_format);
    online->add_flag("--full-values", o_full);

    // verify
    auto* verify = app.add_subcommand("verify", "Validate a model and print its optimum");
    std::string v_model;
    verify->add_option("--model", v_model)->required();

    // compare
    auto* compare = app.add_subcommand("compare", "Compare opi and pspi over shared seeds");
    std::string c_model, c_out;
    int c_steps = 200, c_seeds = 10, c_x0 = 0;
    std::uint64_t c_seed = 0;
    compare->add_option("--model", c_model)->required();
    compare->add_option("--steps", c_steps);
    compare->add_option("--seeds", c_seeds);
    compare->add_option("--seed", c_seed);
    compare->add_option("--x0", c_x0);
    compare->add_option("--out", c_out);

    try {
        app.parse(argc, argv);
        if (gen->parsed())
            return cmd_gen(g_states, g_actions, g_branching, g_gamma, g_seed, g_comm, g_lo, g_hi,
                           g_out);
        if (solve->parsed())
            return cmd_solve(s_model, s_algo, s_pi0, s_seed, s_strategy, s_max_iters, s_out,
                             s_format, s_full);
        if (online->parsed())
            return cmd_online(o_model, o_algo, o_mode, o_steps, o_x0, o_seed, o_pi0, o_horizon,
                              o_reps, o_crn, o_selector, o_eps, o_out, o_format, o_full);
        if (verify->parsed()) return cmd_verify(v_model);
        if (compare->parsed()) return cmd_compare(c_model, c_steps, c_seeds, c_seed, c_x0, c_out);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal invariant breach: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace mdpkit
