#pragma once

#include "adr/types.hpp"

#include <vector>

namespace adr {

/// Symmetric rule on the reference triangle {(x, y) : x, y >= 0, x + y <= 1}.
/// Weights sum to the reference area 1/2.
struct QuadratureRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
    int degree = 0; ///< exactness degree actually provided (>= the one requested)

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/// Smallest tabulated symmetric Gauss rule exact for polynomials of the given
/// degree. Supported degrees 1..8; returns a reference to a static table.
const QuadratureRule& quadrature_rule(int exactness_degree);

} // namespace adr
