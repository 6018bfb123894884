#pragma once

#include <vector>

namespace triples::geometry {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n points on (0, 1); exact for polynomials of degree 2n - 1.
QuadratureRule gauss_legendre_unit(int n);

}  // namespace triples::geometry
