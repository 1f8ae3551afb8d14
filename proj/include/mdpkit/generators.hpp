#pragma once

#include "mdpkit/model.hpp"

#include <cstdint>

namespace mdpkit {

/// Garnet-style random model: every (x, a) row has `branching` distinct
/// successors with normalized uniform probabilities; rewards uniform in
/// [reward_lo, reward_hi]. Fully deterministic in the seed.
MdpModel generate_random_mdp(int num_states, int num_actions, int branching, double reward_lo,
                             double reward_hi, double gamma, std::uint64_t seed);

/// As generate_random_mdp, then blends action 0 of every state with a
/// deterministic edge to (x+1 mod n) at weight 0.1, which puts a
/// positive-probability cycle through all states.
MdpModel generate_communicating_mdp(int num_states, int num_actions, int branching,
                                    double reward_lo, double reward_hi, double gamma,
                                    std::uint64_t seed);

/// Canonical 2-state fixtures used throughout the test suite and shipped
/// with the CLI under the names "det2" and "absorb2".
MdpModel make_det2();
MdpModel make_absorb2();

/// Resolves "det2"/"absorb2" to the builtin fixture; returns false when
/// the name is not a builtin.
bool is_builtin_fixture(const std::string& name);
MdpModel builtin_fixture(const std::string& name);

}  // namespace mdpkit
