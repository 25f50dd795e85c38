#pragma once

#include <string>

#include "couponrl/mdp.hpp"

namespace couponrl {

/// JSON schema: {S, A, gamma, reward_noise, start: [..], P: [s][a][s'], R: [s][a]}.
std::string mdp_to_json(const FiniteMdp& mdp);

/// Parses and validates; throws std::invalid_argument on schema or invariant
/// violations (the validate() report is embedded in the message).
FiniteMdp mdp_from_json(const std::string& text);

void save_mdp(const FiniteMdp& mdp, const std::string& path);
FiniteMdp load_mdp(const std::string& path);

}  // namespace couponrl
