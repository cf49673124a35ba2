#pragma once

#include "adr/types.hpp"

namespace adr {

/// d_t u - mu lap(u) + div(b u) + sigma u = f on the unit square, u = u_D on
/// the whole boundary, u = u_0 at t = 0. Coefficients are constant.
struct ADRProblem {
    double mu = 1.0;
    Vec2 b{0.0, 0.0};
    double sigma = 0.0;
    SpaceTimeFunction forcing;   ///< f(x, y, t); zero when empty
    SpaceTimeFunction dirichlet; ///< u_D(x, y, t); zero when empty
    SpatialFunction initial;     ///< u_0(x, y); zero when empty
    double final_time = 1.0;

    void validate() const;
};

struct TimeConfig {
    double dt = 1e-3;
    int n_steps = 0;

    /// n_steps = round(T / dt); rejects T that is not a whole number of steps (1e-12).
    static TimeConfig for_interval(double final_time, double dt);
    [[nodiscard]] double time(int step) const noexcept { return step * dt; }
};

} // namespace adr
