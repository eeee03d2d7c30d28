#pragma once
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "parc/action_space.hpp"
#include "parc/errors.hpp"
#include "parc/rng.hpp"

namespace parc {

struct EnvOutcome {
    std::vector<double> obs;
    double reward = 0.0;
    bool done = false;
    bool truncated = false; // time limit; implies done
    bool win = false;       // winning state; implies done
};

/// A seedable simulator over a parameterized action space. Instances are
/// single-owner and stateful; all randomness flows through the Rng handle
/// passed to reset/step. Parameters are clamped to schema bounds internally,
/// so callers may hand over raw policy samples.
class Env {
public:
    virtual ~Env() = default;

    virtual const ActionSchema& schema() const = 0;
    virtual int time_limit() const = 0;
    virtual std::string name() const = 0;
    virtual std::size_t obs_dim() const = 0;

    std::vector<double> reset(Rng& rng) {
        needs_reset_ = false;
        steps_ = 0;
        return do_reset(rng);
    }

    EnvOutcome step(int a, const std::vector<double>& x, Rng& rng) {
        if (needs_reset_) throw ContractError(name() + ": step after episode end; call reset");
        if (a < 0 || static_cast<std::size_t>(a) >= schema().k())
            throw DomainError(name() + ": action index " + std::to_string(a) + " out of range");
        std::vector<double> xc = clamp_to_bounds(schema(), a, x);
        if (xc.size() != schema().param_dim(static_cast<std::size_t>(a)))
            throw DomainError(name() + ": wrong parameter count for action " + std::to_string(a));
        EnvOutcome out = do_step(a, xc, rng);
        steps_ += 1;
        if (!out.done && steps_ >= time_limit()) {
            out.done = true;
            out.truncated = true;
        }
        if (out.win) out.done = true;
        if (out.done) needs_reset_ = true;
        return out;
    }

    /// Executes only the selected (a, x_a) of a hybrid action; parameters of
    /// non-selected actions cannot reach the dynamics.
    EnvOutcome step(const HybridAction& action, Rng& rng) { return step(action.a, action.x, rng); }

    int steps_taken() const { return steps_; }

protected:
    virtual std::vector<double> do_reset(Rng& rng) = 0;
    virtual EnvOutcome do_step(int a, const std::vector<double>& x, Rng& rng) = 0;

private:
    bool needs_reset_ = true;
    int steps_ = 0;
};

namespace envdetail {

inline constexpr double kPi = std::numbers::pi;

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

inline double wrap_angle(double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a <= -kPi) a += 2.0 * kPi;
    return a;
}

inline double dist(double ax, double ay, double bx, double by) {
    return std::hypot(bx - ax, by - ay);
}

/// [0,1] coordinate to [-1,1] observation component.
inline double scale01(double v) { return 2.0 * v - 1.0; }

} // namespace envdetail

} // namespace parc
