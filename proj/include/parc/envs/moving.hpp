#pragma once
#include "parc/envs/env.hpp"

namespace parc {

/// Drive to a target disc and stop inside it. Actions: ACCEL(power in [0,1])
/// adds 0.02*power of speed (capped at 0.1), TURN(u in [-1,1]) rotates the
/// heading by u*pi/6, BRAKE zeroes the speed. The agent then translates by
/// speed along its heading every step. Winning state: BRAKE executed while
/// inside the disc. Leaving the field loses (-1) and ends the episode.
class MovingEnv final : public Env {
public:
    static constexpr int kTimeLimit = 200;
    static constexpr double kAccel = 0.02;
    static constexpr double kMaxSpeed = 0.1;
    static constexpr double kTurnRate = envdetail::kPi / 6.0;
    static constexpr double kTargetRadius = 0.1;

    MovingEnv() {
        schema_.actions = {
            {"ACCEL", {{0.0, 1.0}}},
            {"TURN", {{-1.0, 1.0}}},
            {"BRAKE", {}},
        };
    }

    const ActionSchema& schema() const override { return schema_; }
    int time_limit() const override { return kTimeLimit; }
    std::string name() const override { return "moving"; }
    std::size_t obs_dim() const override { return 11; }

    double speed() const { return v_; }
    double heading() const { return phi_; }

protected:
    std::vector<double> do_reset(Rng& rng) override {
        ax_ = rng.uniform(0.1, 0.4);
        ay_ = rng.uniform(0.1, 0.4);
        phi_ = rng.uniform(-envdetail::kPi, envdetail::kPi);
        v_ = 0.0;
        cx_ = rng.uniform(0.6, 0.9);
        cy_ = rng.uniform(0.6, 0.9);
        return obs();
    }

    EnvOutcome do_step(int a, const std::vector<double>& x, Rng&) override {
        using namespace envdetail;
        EnvOutcome out;
        out.reward = -0.01;
        double prev_dist = dist(ax_, ay_, cx_, cy_);
        if (a == 0) { // ACCEL
            v_ = std::min(v_ + kAccel * x[0], kMaxSpeed);
        } else if (a == 1) { // TURN
            phi_ = wrap_angle(phi_ + x[0] * kTurnRate);
        } else { // BRAKE
            v_ = 0.0;
            if (prev_dist <= kTargetRadius) {
                out.win = true;
                out.done = true;
                out.reward += 5.0;
            }
        }
        ax_ += v_ * std::cos(phi_);
        ay_ += v_ * std::sin(phi_);
        if (!out.done && (ax_ < 0.0 || ax_ > 1.0 || ay_ < 0.0 || ay_ > 1.0)) {
            out.done = true;
            out.reward += -1.0;
        }
        out.reward += prev_dist - dist(ax_, ay_, cx_, cy_);
        out.obs = obs();
        return out;
    }

private:
    std::vector<double> obs() const {
        using namespace envdetail;
        double bearing = std::atan2(cy_ - ay_, cx_ - ax_);
        double rel = wrap_angle(bearing - phi_);
        return {scale01(ax_), scale01(ay_), std::sin(phi_),      std::cos(phi_),
                scale01(v_ / kMaxSpeed), scale01(cx_), scale01(cy_),
                cx_ - ax_,    cy_ - ay_,    std::sin(rel),       std::cos(rel)};
    }

    ActionSchema schema_;
    double ax_ = 0, ay_ = 0, phi_ = 0, v_ = 0;
    double cx_ = 0, cy_ = 0;
};

} // namespace parc
