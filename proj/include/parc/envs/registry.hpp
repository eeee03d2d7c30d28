#pragma once
#include <memory>
#include <string>
#include <vector>

#include "parc/envs/catching_point.hpp"
#include "parc/envs/chase_attack.hpp"
#include "parc/envs/football.hpp"
#include "parc/envs/moving.hpp"

namespace parc {

inline std::vector<std::string> env_names() {
    return {"catching_point", "moving", "chase_attack", "football"};
}

inline std::unique_ptr<Env> make_env(const std::string& name) {
    if (name == "catching_point" || name == "catching") return std::make_unique<CatchingPointEnv>();
    if (name == "moving") return std::make_unique<MovingEnv>();
    if (name == "chase_attack" || name == "chase") return std::make_unique<ChaseAttackEnv>();
    if (name == "football" || name == "half_field_football") return std::make_unique<FootballEnv>();
    std::string valid;
    for (const auto& n : env_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw DomainError("unknown environment '" + name + "'; valid names: " + valid);
}

/// Default discretization for the DQN baseline: 16 atomic actions for
/// catching_point, 23 for moving, 30 for chase_attack, and 104 for football
/// (8 bins per direction, 6 per power).
inline std::vector<std::vector<int>> default_bins(const std::string& env_name) {
    if (env_name == "catching_point" || env_name == "catching") return {{15}, {}};
    if (env_name == "moving") return {{10}, {12}, {}};
    if (env_name == "chase_attack" || env_name == "chase") return {{15}, {15}};
    if (env_name == "football" || env_name == "half_field_football") return {{6, 8}, {8}, {6, 8}};
    throw DomainError("no default bins for environment '" + env_name + "'");
}

} // namespace parc
