#include "mdpkit/rollout.hpp"

#include <cmath>
#include <stdexcept>

namespace mdpkit {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double sample_std(const std::vector<double>& samples, double mean) {
    if (samples.size() < 2) return 0.0;
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    return std::sqrt(ss / static_cast<double>(samples.size() - 1));
}

double mean_of(const std::vector<double>& samples) {
    double sum = 0.0;
    for (double s : samples) sum += s;
    return sum / static_cast<double>(samples.size());
}

int pick_with_incumbent(const std::vector<double>& means, const std::vector<char>& alive,
                        const std::optional<int>& incumbent, double tol) {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < means.size(); ++i)
        if (alive[i]) best = std::max(best, means[i]);
    if (incumbent && alive[static_cast<size_t>(*incumbent)] &&
        means[static_cast<size_t>(*incumbent)] >= best - tol)
        return *incumbent;
    for (size_t i = 0; i < means.size(); ++i)
        if (alive[i] && means[i] >= best - tol) return static_cast<int>(i);
    return 0;
}

}  // namespace

int sample_transition(const MdpModel& model, int x, int a, double u) {
    const auto row = model.transition_row(x, a);
    double cum = 0.0;
    int last_positive = 0;
    for (int y = 0; y < model.num_states; ++y) {
        const double p = row(y);
        if (p <= 0.0) continue;
        cum += p;
        last_positive = y;
        if (u < cum) return y;
    }
    return last_positive;  // guards rounding when cum < 1 by ~1e-9
}

double RngStreamKey::uniform(std::uint64_t step) const {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ (candidate * 0xc2b2ae3d27d4eb4fULL + 1));
    h = mix64(h ^ (replication * 0x165667b19e3779f9ULL + 2));
    h = mix64(h ^ (step * 0x27d4eb2f165667c5ULL + 3));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

int truncation_horizon(double gamma, double rmax, double eps) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma not in (0,1)");
    if (!(rmax > 0.0) || !(eps > 0.0)) throw std::invalid_argument("rmax and eps must be positive");
    if (eps >= rmax / (1.0 - gamma)) return 1;
    const double h = std::log(eps * (1.0 - gamma) / rmax) / std::log(gamma);
    return std::max(1, static_cast<int>(std::ceil(h - 1e-12)));
}

double rollout_return(const MdpModel& model, const Policy& pi, int x, int horizon,
                      const RngStreamKey& stream) {
    require_admissible(model, pi);
    if (x < 0 || x >= model.num_states) throw std::invalid_argument("state out of range");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    double total = 0.0;
    double discount = 1.0;
    int state = x;
    for (int t = 0; t < horizon; ++t) {
        const int a = pi[state];
        total += discount * model.reward(state, a);
        discount *= model.gamma;
        // one uniform per step, even on deterministic rows, for CRN alignment
        state = sample_transition(model, state, a, stream.uniform(static_cast<std::uint64_t>(t)));
    }
    return total;
}

CandidateEstimate estimate_value(const MdpModel& model, const Policy& pi, int x,
                                 const RolloutConfig& config, int candidate_index) {
    if (config.horizon < 1 || config.replications < 1)
        throw std::invalid_argument("horizon and replications must be >= 1");
    const std::uint64_t noise_candidate =
        config.crn ? 0 : static_cast<std::uint64_t>(candidate_index);
    std::vector<double> samples;
    samples.reserve(static_cast<size_t>(config.replications));
    for (int r = 0; r < config.replications; ++r) {
        const RngStreamKey key{config.seed, noise_candidate, static_cast<std::uint64_t>(r)};
        samples.push_back(rollout_return(model, pi, x, config.horizon, key));
    }
    CandidateEstimate estimate;
    estimate.replications = config.replications;
    estimate.mean = mean_of(samples);
    estimate.stddev = sample_std(samples, estimate.mean);
    return estimate;
}

std::pair<int, EstimateReport> saa_select(const MdpModel& model, const PolicySet& neighborhood,
                                          int x, const RolloutConfig& config) {
    if (neighborhood.members.empty()) throw std::invalid_argument("empty candidate set");
    EstimateReport report;
    report.truncation_bound = std::pow(model.gamma, config.horizon) * model.reward_bound() /
                              (1.0 - model.gamma);
    std::vector<double> means;
    for (size_t i = 0; i < neighborhood.members.size(); ++i) {
        report.candidates.push_back(
            estimate_value(model, neighborhood.members[i], x, config, static_cast<int>(i)));
        means.push_back(report.candidates.back().mean);
    }
    const std::vector<char> alive(neighborhood.members.size(), 1);
    report.chosen_index = pick_with_incumbent(means, alive, neighborhood.incumbent,
                                              config.tie_tol);
    report.chosen_action = neighborhood.members[static_cast<size_t>(report.chosen_index)][x];
    return {report.chosen_action, report};
}

std::pair<int, EstimateReport> racing_select(const MdpModel& model, const PolicySet& neighborhood,
                                             int x, const RolloutConfig& config) {
    const size_t count = neighborhood.members.size();
    if (count == 0) throw std::invalid_argument("empty candidate set");
    EstimateReport report;
    report.truncation_bound = std::pow(model.gamma, config.horizon) * model.reward_bound() /
                              (1.0 - model.gamma);
    report.candidates.resize(count);
    if (count == 1) {
        report.candidates[0] = estimate_value(model, neighborhood.members[0], x, config, 0);
        report.chosen_index = 0;
        report.chosen_action = neighborhood.members[0][x];
        return {report.chosen_action, report};
    }

    const double vmax = model.reward_bound() / (1.0 - model.gamma);
    const int per_round = std::max(std::min(2, config.replications), config.replications / 8);
    std::vector<std::vector<double>> samples(count);
    std::vector<char> alive(count, 1);

    int used = 0;
    int round = 0;
    while (used < config.replications) {
        ++round;
        const int batch = std::min(per_round, config.replications - used);
        for (size_t i = 0; i < count; ++i) {
            if (!alive[i]) continue;
            for (int r = 0; r < batch; ++r) {
                const RngStreamKey key{config.seed,
                                       config.crn ? 0 : static_cast<std::uint64_t>(i),
                                       static_cast<std::uint64_t>(used + r)};
                samples[i].push_back(
                    rollout_return(model, neighborhood.members[i], x, config.horizon, key));
            }
        }
        used += batch;

        // Hoeffding radius over range Vmax; collapses to zero width for
        // candidates whose observed returns are all identical.
        const double log_term =
            std::log(4.0 * static_cast<double>(count) * round * round / config.racing_delta);
        double best_lower = -std::numeric_limits<double>::infinity();
        std::vector<double> means(count, 0.0), radii(count, 0.0);
        for (size_t i = 0; i < count; ++i) {
            if (!alive[i]) continue;
            means[i] = mean_of(samples[i]);
            const double hoeffding =
                vmax * std::sqrt(log_term / (2.0 * static_cast<double>(samples[i].size())));
            const double spread = sample_std(samples[i], means[i]);
            radii[i] = (samples[i].size() >= 2 && spread == 0.0) ? 0.0 : hoeffding;
            best_lower = std::max(best_lower, means[i] - radii[i]);
        }
        size_t survivors = 0;
        for (size_t i = 0; i < count; ++i) {
            if (!alive[i]) continue;
            if (means[i] + radii[i] < best_lower)
                alive[i] = 0;
            else
                ++survivors;
        }
        if (survivors <= 1) break;
    }

    std::vector<double> means(count, -std::numeric_limits<double>::infinity());
    for (size_t i = 0; i < count; ++i) {
        if (samples[i].empty()) continue;
        report.candidates[i].replications = static_cast<int>(samples[i].size());
        report.candidates[i].mean = mean_of(samples[i]);
        report.candidates[i].stddev = sample_std(samples[i], report.candidates[i].mean);
        if (alive[i]) means[i] = report.candidates[i].mean;
    }
    report.chosen_index = pick_with_incumbent(means, alive, neighborhood.incumbent,
                                              config.tie_tol);
    report.chosen_action = neighborhood.members[static_cast<size_t>(report.chosen_index)][x];
    return {report.chosen_action, report};
}

}  // namespace mdpkit
