#pragma once
#include <cmath>
#include <vector>

#include "parc/envs/env.hpp"

namespace parc {

/// Hand-coded controllers that win their environment from any start state.
/// They act on raw simulator observations and exist to pin down the win
/// conditions in tests.
namespace scripted {

struct Decision {
    int a = 0;
    std::vector<double> x;
};

/// obs: [ax, ay, tx, ty] scaled, deltas at [4], [5].
inline Decision catching_point(const std::vector<double>& obs) {
    double dx = obs[4], dy = obs[5];
    double d = std::hypot(dx, dy);
    if (d <= 0.1) return {1, {}};
    return {0, {std::atan2(dy, dx)}};
}

/// Brakes inside the disc, otherwise steers toward the target at low speed.
inline Decision moving(const std::vector<double>& obs) {
    using envdetail::kPi;
    double dx = obs[7], dy = obs[8];
    double d = std::hypot(dx, dy);
    double v = (obs[4] + 1.0) / 2.0 * MovingEnv::kMaxSpeed;
    double rel = std::atan2(obs[9], obs[10]); // bearing - heading
    if (d <= 0.09) return {2, {}};            // BRAKE wins here
    if (std::fabs(rel) > kPi / 12.0) {
        if (v > 0.0) return {2, {}}; // stop to rotate in place
        return {1, {std::max(-1.0, std::min(1.0, rel / MovingEnv::kTurnRate))}};
    }
    if (v <= 1e-9) return {0, {1.0}}; // v -> 0.02
    return {1, {std::max(-1.0, std::min(1.0, rel / MovingEnv::kTurnRate))}}; // coast + steer
}

/// Rushes at the runner, attacks when inside range.
inline Decision chase_attack(const std::vector<double>& obs) {
    double dx = obs[4], dy = obs[5];
    double d = std::hypot(dx, dy);
    double bearing = std::atan2(dy, dx);
    if (d <= ChaseAttackEnv::kAttackRange) return {1, {bearing}};
    return {0, {bearing}};
}

/// Dashes to the ball, then kicks at the goal center from the ball's
/// position.
inline Decision football(const std::vector<double>& obs) {
    double dxb = obs[8], dyb = obs[9];
    double d = std::hypot(dxb, dyb);
    if (d <= FootballEnv::kKickMargin) {
        double dir = std::atan2(obs[13], obs[12]); // ball -> goal center
        return {2, {1.0, dir}};
    }
    return {0, {1.0, std::atan2(dyb, dxb)}};
}

inline Decision act(const std::string& env_name, const std::vector<double>& obs) {
    if (env_name == "catching_point") return catching_point(obs);
    if (env_name == "moving") return moving(obs);
    if (env_name == "chase_attack") return chase_attack(obs);
    if (env_name == "football") return football(obs);
    throw DomainError("no scripted controller for '" + env_name + "'");
}

/// Plays one episode with the scripted controller; returns the final outcome.
inline EnvOutcome play_episode(Env& env, Rng& rng, double* total_reward = nullptr, int* steps = nullptr) {
    std::vector<double> obs = env.reset(rng);
    EnvOutcome out;
    double total = 0.0;
    int n = 0;
    do {
        Decision d = act(env.name(), obs);
        out = env.step(d.a, d.x, rng);
        obs = out.obs;
        total += out.reward;
        n += 1;
    } while (!out.done);
    if (total_reward) *total_reward = total;
    if (steps) *steps = n;
    return out;
}

} // namespace scripted
} // namespace parc
