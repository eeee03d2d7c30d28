#pragma once
#include "parc/envs/env.hpp"

namespace parc {

/// Catch a random-walking target point within 10 CATCH attempts.
/// Actions: MOVE(direction in [-pi, pi]) steps 0.05; CATCH wins iff the
/// target is within 0.1. A failed CATCH costs -0.2 and one chance; the
/// episode force-ends when all 10 chances are gone. Reward shaping is the
/// per-step decrease of the agent-target distance, on top of a -0.01 step
/// penalty; winning pays +5.
class CatchingPointEnv final : public Env {
public:
    static constexpr int kTimeLimit = 200;
    static constexpr double kMoveStep = 0.05;
    static constexpr double kTargetStep = 0.02;
    static constexpr double kCatchRadius = 0.1;
    static constexpr int kCatches = 10;

    CatchingPointEnv() {
        schema_.actions = {
            {"MOVE", {{-envdetail::kPi, envdetail::kPi}}},
            {"CATCH", {}},
        };
    }

    const ActionSchema& schema() const override { return schema_; }
    int time_limit() const override { return kTimeLimit; }
    std::string name() const override { return "catching_point"; }
    std::size_t obs_dim() const override { return 7; }

    int catches_left() const { return catches_left_; }

protected:
    std::vector<double> do_reset(Rng& rng) override {
        ax_ = rng.uniform(0.1, 0.9);
        ay_ = rng.uniform(0.1, 0.9);
        tx_ = rng.uniform(0.1, 0.9);
        ty_ = rng.uniform(0.1, 0.9);
        catches_left_ = kCatches;
        return obs();
    }

    EnvOutcome do_step(int a, const std::vector<double>& x, Rng& rng) override {
        using namespace envdetail;
        EnvOutcome out;
        double prev_dist = dist(ax_, ay_, tx_, ty_);
        out.reward = -0.01;
        if (a == 0) { // MOVE
            ax_ = clamp01(ax_ + kMoveStep * std::cos(x[0]));
            ay_ = clamp01(ay_ + kMoveStep * std::sin(x[0]));
        } else { // CATCH
            if (prev_dist <= kCatchRadius) {
                out.win = true;
                out.done = true;
                out.reward += 5.0;
            } else {
                out.reward += -0.2;
                catches_left_ -= 1;
                if (catches_left_ <= 0) out.done = true;
            }
        }
        if (!out.done) {
            double dir = rng.uniform(-kPi, kPi);
            tx_ = clamp01(tx_ + kTargetStep * std::cos(dir));
            ty_ = clamp01(ty_ + kTargetStep * std::sin(dir));
        }
        out.reward += prev_dist - dist(ax_, ay_, tx_, ty_);
        out.obs = obs();
        return out;
    }

private:
    std::vector<double> obs() const {
        using namespace envdetail;
        return {scale01(ax_), scale01(ay_), scale01(tx_), scale01(ty_),
                tx_ - ax_,    ty_ - ay_,    scale01(static_cast<double>(catches_left_) / kCatches)};
    }

    ActionSchema schema_;
    double ax_ = 0, ay_ = 0, tx_ = 0, ty_ = 0;
    int catches_left_ = kCatches;
};

} // namespace parc
