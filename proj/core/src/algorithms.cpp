#include "qdivlab/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qdivlab/divergences.hpp"
#include "qdivlab/errors.hpp"

namespace qdivlab {

namespace {

std::size_t idx(Eigen::Index i) { return static_cast<std::size_t>(i); }

// Amplitudes of H, CSWAP, H applied to |0> (x) pur0 (x) pur1. Index layout is
// (control, s0, e0, s1, e1) with the control most significant.
Vector swap_test_state(const Purification& a, const Purification& b, const Tolerances& tol) {
  if (a.system_dim != b.system_dim) fail(ErrorCode::MismatchedBlocks, "purifications have different system dims");
  const std::size_t d = a.system_dim, ea = a.env_dim, eb = b.env_dim;
  const std::size_t ra = d * ea, rb = d * eb;
  if (rb != 0 && ra > tol.dimension_cap / rb) {
    fail(ErrorCode::DimensionOverflow, "swap test register " + std::to_string(ra) + "x" + std::to_string(rb) +
                                           " exceeds cap " + std::to_string(tol.dimension_cap));
  }
  const std::size_t half = ra * rb;

  Vector input(static_cast<Eigen::Index>(half));
  for (std::size_t i = 0; i < ra; ++i) {
    for (std::size_t j = 0; j < rb; ++j) {
      input(static_cast<Eigen::Index>(i * rb + j)) =
          a.vector(static_cast<Eigen::Index>(i)) * b.vector(static_cast<Eigen::Index>(j));
    }
  }
  Vector swapped(static_cast<Eigen::Index>(half));
  for (std::size_t s0 = 0; s0 < d; ++s0) {
    for (std::size_t e0 = 0; e0 < ea; ++e0) {
      for (std::size_t s1 = 0; s1 < d; ++s1) {
        for (std::size_t e1 = 0; e1 < eb; ++e1) {
          const std::size_t from = (s0 * ea + e0) * rb + s1 * eb + e1;
          const std::size_t to = (s1 * ea + e0) * rb + s0 * eb + e1;
          swapped(static_cast<Eigen::Index>(to)) = input(static_cast<Eigen::Index>(from));
        }
      }
    }
  }
  // After H, CSWAP, H the control-0 branch is (psi + SWAP psi)/2 and the
  // control-1 branch is (psi - SWAP psi)/2.
  Vector out(static_cast<Eigen::Index>(2 * half));
  out.head(static_cast<Eigen::Index>(half)) = 0.5 * (input + swapped);
  out.tail(static_cast<Eigen::Index>(half)) = 0.5 * (input - swapped);
  return out;
}

}  // namespace

SwapTestResult swap_test_prob(const StatePair& pair) {
  SwapTestResult r;
  r.overlap = (pair.rho0().matrix() * pair.rho1().matrix()).trace().real();
  r.p0_outcome = 0.5 * (1.0 + r.overlap);
  return r;
}

Purification purify(const DensityMatrix& rho, const Tolerances& tol) {
  const Spectrum s = spectrum(rho.matrix(), tol);
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.support_mask[idx(i)] && s.eigenvalues(i) > 0.0) support.push_back(i);
  }
  Purification p;
  p.system_dim = rho.dim();
  p.env_dim = support.size();
  p.vector = Vector::Zero(static_cast<Eigen::Index>(p.system_dim * p.env_dim));
  for (std::size_t k = 0; k < support.size(); ++k) {
    const Eigen::Index i = support[k];
    const double w = std::sqrt(s.eigenvalues(i));
    for (std::size_t r = 0; r < p.system_dim; ++r) {
      p.vector(static_cast<Eigen::Index>(r * p.env_dim + k)) = w * s.eigenvectors(static_cast<Eigen::Index>(r), i);
    }
  }
  p.vector.normalize();
  return p;
}

DensityMatrix reduced_state(const Purification& pur) {
  const auto d = static_cast<Eigen::Index>(pur.system_dim);
  const auto e = static_cast<Eigen::Index>(pur.env_dim);
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> block(
      pur.vector.data(), d, e);
  const Matrix m = block;
  return detail::adopt(hermitize(m * m.adjoint()));
}

double swap_test_statevector(const Purification& pur0, const Purification& pur1, const Tolerances& tol) {
  const Vector out = swap_test_state(pur0, pur1, tol);
  return out.head(out.size() / 2).squaredNorm();
}

AmplificationState grover_single_iteration(double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::OutOfRange, "p must lie in [0, 1]");
  AmplificationState a;
  a.p = p;
  a.theta = std::asin(std::sqrt(p / 2.0));
  a.success_poly = 2.0 * p * p * p - 6.0 * p * p + 4.5 * p;
  const double s = std::sin(3.0 * a.theta);
  a.success_trig = s * s;
  a.p_acc = 1.0 - a.success_poly;
  return a;
}

double grover_statevector_success(const Purification& pur0, const Purification& pur1, const Tolerances& tol) {
  const Vector inner = swap_test_state(pur0, pur1, tol);
  const Eigen::Index n = inner.size();
  // Flag qubit in |+>, most significant.
  Vector phi(2 * n);
  phi.head(n) = inner / std::sqrt(2.0);
  phi.tail(n) = inner / std::sqrt(2.0);
  // Good subspace: flag 0 and control 0, i.e. the first n/2 entries.
  const Eigen::Index good = n / 2;
  Vector v = phi;
  v.head(good) *= -1.0;                        // I - 2 Pi_0
  v -= 2.0 * phi * phi.dot(v);                  // I - 2 |phi><phi|
  v *= -1.0;
  return v.head(good).squaredNorm();
}

NqpDecision nqp_decide(const StatePair& pair) {
  NqpDecision d;
  d.p = swap_test_prob(pair).p0_outcome;
  d.p_acc = grover_single_iteration(std::clamp(d.p, 0.0, 1.0)).p_acc;
  d.lower_bound_yes = (d.p - 0.5) * (d.p - 0.5);
  d.accept = d.p_acc > kAcceptThreshold;
  d.verdict = d.accept ? "close" : "far";
  return d;
}

PpThresholds pp_thresholds(int n) {
  if (n < 1) fail(ErrorCode::OutOfRange, "qubit count must be positive");
  const double nd = static_cast<double>(n);
  PpThresholds t;
  t.n = n;
  t.yes_floor = 0.5 - std::exp2(-nd - 4.0);
  const double c = 1.0 - std::exp2(-nd / 2.0 - 1.0);
  t.no_ceiling = 0.5 - std::exp2(-nd - 2.0) * c * c;
  t.gap_floor = std::exp2(-2.0 * nd - 4.0);
  return t;
}

PpDecision pp_hybrid_accept(const StatePair& pair) {
  const auto n = pair.rho0().qubits();
  if (!n || *n < 1) fail(ErrorCode::OutOfRange, "dimension " + std::to_string(pair.dim()) + " is not 2^n with n >= 1");
  PpDecision d;
  d.thresholds = pp_thresholds(*n);
  d.acceptance = 0.5 - hs_distance_sq(pair) / 8.0;
  const double pur0 = pair.rho0().matrix().squaredNorm();
  const double pur1 = pair.rho1().matrix().squaredNorm();
  d.acceptance_mixture = 0.5 * swap_test_prob(pair).p0_outcome + 0.25 * ((1.0 - pur0) / 2.0 + (1.0 - pur1) / 2.0);
  return d;
}

bool HsTdBounds::holds(double slack) const {
  return lower <= td + slack && td <= rank_aware_upper + slack && rank_aware_upper <= upper + slack;
}

HsTdBounds hs_td_bounds(const StatePair& pair, const Tolerances& tol) {
  HsTdBounds b;
  b.hs = std::sqrt(hs_distance_sq(pair));
  b.td = trace_distance(pair, tol);
  b.rank0 = spectrum(pair.rho0().matrix(), tol).rank();
  b.rank1 = spectrum(pair.rho1().matrix(), tol).rank();
  const double r0 = static_cast<double>(b.rank0), r1 = static_cast<double>(b.rank1);
  b.lower = b.hs / std::sqrt(2.0);
  b.rank_aware_upper = std::sqrt(r0 * r1 / (r0 + r1)) * b.hs;
  b.upper = std::sqrt(static_cast<double>(pair.dim()) / 2.0) * b.hs;
  return b;
}

}  // namespace qdivlab
