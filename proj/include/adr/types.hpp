#pragma once

#include <array>
#include <functional>
#include <vector>

namespace adr {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;
using Vector = std::vector<double>;

/// f(x, y)
using SpatialFunction = std::function<double(double, double)>;
/// f(x, y, t)
using SpaceTimeFunction = std::function<double(double, double, double)>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

} // namespace adr
