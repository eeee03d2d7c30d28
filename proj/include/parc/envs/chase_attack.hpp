#pragma once
#include "parc/envs/env.hpp"

namespace parc {

/// Chase a fleeing rule-based runner and land three attacks. RUSH(direction)
/// moves the agent 0.05; ATTACK(direction) hits iff the runner is within
/// 0.15 and within +-30 degrees of the attack direction. A hit pays +1.5 and
/// respawns the runner at least 0.3 away; taking the third life wins (+5
/// plus a +1 bonus). The runner flees 0.03 per step directly away from the
/// agent, sliding along walls inside a 0.05 margin. Shaping rewards closing
/// the agent-runner distance.
class ChaseAttackEnv final : public Env {
public:
    static constexpr int kTimeLimit = 250;
    static constexpr double kRushStep = 0.05;
    static constexpr double kRunnerStep = 0.03;
    static constexpr double kAttackRange = 0.15;
    static constexpr double kAttackCone = envdetail::kPi / 6.0; // +-30 degrees
    static constexpr double kWallMargin = 0.05;
    static constexpr double kRespawnDist = 0.3;
    static constexpr int kLives = 3;

    ChaseAttackEnv() {
        schema_.actions = {
            {"RUSH", {{-envdetail::kPi, envdetail::kPi}}},
            {"ATTACK", {{-envdetail::kPi, envdetail::kPi}}},
        };
    }

    const ActionSchema& schema() const override { return schema_; }
    int time_limit() const override { return kTimeLimit; }
    std::string name() const override { return "chase_attack"; }
    std::size_t obs_dim() const override { return 10; }

    int runner_lives() const { return lives_; }

protected:
    std::vector<double> do_reset(Rng& rng) override {
        ax_ = rng.uniform(0.1, 0.9);
        ay_ = rng.uniform(0.1, 0.9);
        spawn_runner(rng);
        lives_ = kLives;
        return obs();
    }

    EnvOutcome do_step(int a, const std::vector<double>& x, Rng& rng) override {
        using namespace envdetail;
        EnvOutcome out;
        out.reward = -0.01;
        double prev_dist = dist(ax_, ay_, rx_, ry_);
        bool hit = false;
        if (a == 0) { // RUSH
            ax_ = clamp01(ax_ + kRushStep * std::cos(x[0]));
            ay_ = clamp01(ay_ + kRushStep * std::sin(x[0]));
        } else { // ATTACK
            double to_runner = std::atan2(ry_ - ay_, rx_ - ax_);
            if (prev_dist <= kAttackRange && std::fabs(wrap_angle(x[0] - to_runner)) <= kAttackCone) {
                hit = true;
                lives_ -= 1;
                out.reward += 1.5;
                if (lives_ <= 0) {
                    out.win = true;
                    out.done = true;
                    out.reward += 5.0 + 1.0;
                }
            }
        }
        if (!out.done) {
            if (hit)
                spawn_runner(rng);
            else
                flee();
        }
        if (!hit) out.reward += prev_dist - dist(ax_, ay_, rx_, ry_);
        out.obs = obs();
        return out;
    }

private:
    void spawn_runner(Rng& rng) {
        do {
            rx_ = rng.uniform(0.05, 0.95);
            ry_ = rng.uniform(0.05, 0.95);
        } while (envdetail::dist(ax_, ay_, rx_, ry_) < kRespawnDist);
    }

    void flee() {
        using namespace envdetail;
        double dx = rx_ - ax_;
        double dy = ry_ - ay_;
        double n = std::hypot(dx, dy);
        if (n < 1e-12) return;
        dx /= n;
        dy /= n;
        if ((rx_ < kWallMargin && dx < 0.0) || (rx_ > 1.0 - kWallMargin && dx > 0.0)) dx = 0.0;
        if ((ry_ < kWallMargin && dy < 0.0) || (ry_ > 1.0 - kWallMargin && dy > 0.0)) dy = 0.0;
        double m = std::hypot(dx, dy);
        if (m < 1e-12) return; // cornered
        rx_ = clamp01(rx_ + kRunnerStep * dx / m);
        ry_ = clamp01(ry_ + kRunnerStep * dy / m);
    }

    std::vector<double> obs() const {
        using namespace envdetail;
        double bearing = std::atan2(ry_ - ay_, rx_ - ax_);
        return {scale01(ax_), scale01(ay_), scale01(rx_), scale01(ry_),
                rx_ - ax_,    ry_ - ay_,    std::sin(bearing), std::cos(bearing),
                scale01(dist(ax_, ay_, rx_, ry_) / std::numbers::sqrt2),
                scale01(static_cast<double>(lives_) / kLives)};
    }

    ActionSchema schema_;
    double ax_ = 0, ay_ = 0, rx_ = 0, ry_ = 0;
    int lives_ = kLives;
};

} // namespace parc
