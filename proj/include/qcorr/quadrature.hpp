#pragma once

#include <cstddef>
#include <vector>

namespace qcorr {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule mapped onto [a, b]. Nodes come out ascending.
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

}  // namespace qcorr
