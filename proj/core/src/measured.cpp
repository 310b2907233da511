#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "qdivlab/divergences.hpp"

namespace qdivlab {

namespace {

double js2_of(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> mix(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) mix[i] = 0.5 * (p[i] + q[i]);
  const double v = shannon_entropy_bits(mix) - 0.5 * (shannon_entropy_bits(p) + shannon_entropy_bits(q));
  return std::max(v, 0.0);
}

std::vector<double> outcome_probabilities(const Matrix& rho, const Matrix& basis) {
  std::vector<double> p(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index x = 0; x < basis.cols(); ++x) {
    p[static_cast<std::size_t>(x)] = std::max((basis.col(x).adjoint() * rho * basis.col(x))(0, 0).real(), 0.0);
  }
  return p;
}

// Cayley transform of a small Hermitian step; exactly unitary up to rounding.
Matrix cayley(const Matrix& h, double eps) {
  const auto n = h.rows();
  const Complex ie(0.0, 0.5 * eps);
  const Matrix id = Matrix::Identity(n, n);
  return (id - ie * h).partialPivLu().solve(id + ie * h);
}

}  // namespace

MeasurementEnsemble projective_measurement(const Matrix& basis) {
  MeasurementEnsemble m;
  const auto n = basis.rows();
  Matrix total = Matrix::Zero(n, n);
  for (Eigen::Index x = 0; x < basis.cols(); ++x) {
    m.elements.push_back(basis.col(x) * basis.col(x).adjoint());
    total += m.elements.back();
  }
  m.completeness_residual = (total - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  return m;
}

std::vector<double> induced_distribution(const DensityMatrix& rho, const MeasurementEnsemble& m) {
  std::vector<double> p;
  p.reserve(m.elements.size());
  for (const auto& e : m.elements) p.push_back(std::max((e * rho.matrix()).trace().real(), 0.0));
  return p;
}

double basis_js2(const StatePair& pair, const Matrix& basis) {
  return js2_of(outcome_probabilities(pair.rho0().matrix(), basis),
                outcome_probabilities(pair.rho1().matrix(), basis));
}

double measured_qjs2_lower_bound(const StatePair& pair, const SearchConfig& search, const Tolerances& tol) {
  const std::size_t d = pair.dim();
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Matrix> starts;
  starts.push_back(Matrix::Identity(n, n));
  starts.push_back(spectrum(pair.rho0().matrix() - pair.rho1().matrix(), tol).eigenvectors);
  starts.push_back(spectrum((pair.rho0().matrix() + pair.rho1().matrix()) * 0.5, tol).eigenvectors);
  for (std::size_t r = 0; r < search.restarts; ++r) {
    starts.push_back(random_unitary(d, derive_seed(search.seed, {0x6d656173ULL, r})));
  }

  double best = 0.0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    Matrix basis = starts[s];
    double value = basis_js2(pair, basis);
    double eps = search.step;
    for (std::size_t step = 0; step < search.refine_steps && d > 1; ++step) {
      const Matrix h = random_hermitian(d, derive_seed(search.seed, {0x73746570ULL, s, step}));
      const Matrix trial = basis * cayley(h, eps);
      const double v = basis_js2(pair, trial);
      if (v > value) {
        value = v;
        basis = trial;
      } else {
        eps *= 0.6;
      }
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace qdivlab
