#pragma once
#include "parc/envs/env.hpp"

namespace parc {

/// Score into the open goal on the half field. DASH(power, direction) moves
/// the agent 0.03*power in the absolute direction without changing heading;
/// TURN(direction) sets the heading; KICK(power, direction) launches the
/// ball at 0.08*power iff the agent is within the 0.06 kickable margin
/// (+0.5 on the first touch, a small penalty when out of reach). Ball
/// velocity decays by 0.97 per step. Crossing the goal segment x = 1,
/// y in [0.4, 0.6] wins; the ball leaving the field anywhere else loses
/// (-1). Shaping: 0.5 * (agent-ball closing) + 0.5 * (ball-goal closing).
class FootballEnv final : public Env {
public:
    static constexpr int kTimeLimit = 250;
    static constexpr double kDashStep = 0.03;
    static constexpr double kKickSpeed = 0.08;
    static constexpr double kKickMargin = 0.06;
    static constexpr double kBallDecay = 0.97;
    static constexpr double kGoalLo = 0.4;
    static constexpr double kGoalHi = 0.6;
    static constexpr double kMissPenalty = -0.05;

    FootballEnv() {
        using envdetail::kPi;
        schema_.actions = {
            {"DASH", {{0.0, 1.0}, {-kPi, kPi}}},
            {"TURN", {{-kPi, kPi}}},
            {"KICK", {{0.0, 1.0}, {-kPi, kPi}}},
        };
    }

    const ActionSchema& schema() const override { return schema_; }
    int time_limit() const override { return kTimeLimit; }
    std::string name() const override { return "football"; }
    std::size_t obs_dim() const override { return 16; }

    double ball_x() const { return bx_; }
    double ball_y() const { return by_; }

protected:
    std::vector<double> do_reset(Rng& rng) override {
        ax_ = rng.uniform(0.05, 0.2);
        ay_ = rng.uniform(0.3, 0.7);
        heading_ = rng.uniform(-envdetail::kPi, envdetail::kPi);
        bx_ = rng.uniform(0.3, 0.5);
        by_ = rng.uniform(0.4, 0.6);
        bvx_ = bvy_ = 0.0;
        touched_ = false;
        return obs();
    }

    EnvOutcome do_step(int a, const std::vector<double>& x, Rng&) override {
        using namespace envdetail;
        EnvOutcome out;
        out.reward = -0.01;
        double prev_agent_ball = dist(ax_, ay_, bx_, by_);
        double prev_ball_goal = dist(bx_, by_, 1.0, 0.5);

        if (a == 0) { // DASH
            ax_ = clamp01(ax_ + kDashStep * x[0] * std::cos(x[1]));
            ay_ = clamp01(ay_ + kDashStep * x[0] * std::sin(x[1]));
        } else if (a == 1) { // TURN
            heading_ = x[0];
        } else { // KICK
            if (prev_agent_ball <= kKickMargin) {
                bvx_ = kKickSpeed * x[0] * std::cos(x[1]);
                bvy_ = kKickSpeed * x[0] * std::sin(x[1]);
                if (!touched_) {
                    out.reward += 0.5;
                    touched_ = true;
                }
            } else {
                out.reward += kMissPenalty;
            }
        }

        // ball physics with goal-line crossing check on the swept segment
        double obx = bx_, oby = by_;
        bx_ += bvx_;
        by_ += bvy_;
        bvx_ *= kBallDecay;
        bvy_ *= kBallDecay;
        if (bx_ >= 1.0 && bx_ > obx) {
            double t = (1.0 - obx) / (bx_ - obx);
            double ycross = oby + t * (by_ - oby);
            if (ycross >= kGoalLo && ycross <= kGoalHi) {
                out.win = true;
                out.done = true;
                out.reward += 5.0;
            }
        }
        if (!out.done && (bx_ < 0.0 || bx_ > 1.0 || by_ < 0.0 || by_ > 1.0)) {
            out.done = true;
            out.reward += -1.0;
        }

        out.reward += 0.5 * (prev_agent_ball - dist(ax_, ay_, bx_, by_));
        out.reward += 0.5 * (prev_ball_goal - dist(bx_, by_, 1.0, 0.5));
        out.obs = obs();
        return out;
    }

private:
    std::vector<double> obs() const {
        using namespace envdetail;
        double to_ball = std::atan2(by_ - ay_, bx_ - ax_);
        double ball_goal = std::atan2(0.5 - by_, 1.0 - bx_);
        return {scale01(ax_), scale01(ay_), std::sin(heading_), std::cos(heading_),
                scale01(clamp01(bx_)), scale01(clamp01(by_)), bvx_ / kKickSpeed, bvy_ / kKickSpeed,
                bx_ - ax_,    by_ - ay_,    std::sin(to_ball),  std::cos(to_ball),
                1.0 - bx_,    0.5 - by_,    std::sin(ball_goal), std::cos(ball_goal)};
    }

    ActionSchema schema_;
    double ax_ = 0, ay_ = 0, heading_ = 0;
    double bx_ = 0, by_ = 0, bvx_ = 0, bvy_ = 0;
    bool touched_ = false;
};

} // namespace parc
