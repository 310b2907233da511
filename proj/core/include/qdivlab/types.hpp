#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace qdivlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct Tolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double psd = 1e-10;
  double reconstruction = 1e-10;
  // Multiplier on dim * eps * lambda_max. Values <= 0 select the default of 1.
  double support_scale = 1.0;
  std::size_t dimension_cap = 4096;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace qdivlab
