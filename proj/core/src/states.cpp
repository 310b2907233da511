#include "qdivlab/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qdivlab/errors.hpp"

namespace qdivlab {

namespace detail {
DensityMatrix adopt(Matrix m) { return DensityMatrix(std::move(m)); }
}  // namespace detail

namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Complex gaussian(std::mt19937_64& rng, std::normal_distribution<double>& n) {
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace

std::optional<int> DensityMatrix::qubits() const {
  const std::size_t d = dim();
  if (d == 0 || (d & (d - 1)) != 0) return std::nullopt;
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  return n;
}

StatePair::StatePair(DensityMatrix rho0, DensityMatrix rho1)
    : rho0_(std::move(rho0)), rho1_(std::move(rho1)) {
  if (rho0_.dim() != rho1_.dim()) {
    fail(ErrorCode::MismatchedBlocks, "state pair dimensions differ: " +
                                          std::to_string(rho0_.dim()) + " vs " +
                                          std::to_string(rho1_.dim()));
  }
}

std::size_t Spectrum::rank() const {
  return static_cast<std::size_t>(std::count(support_mask.begin(), support_mask.end(), true));
}

double support_threshold(std::size_t dim, double max_abs_eigenvalue, const Tolerances& tol) {
  const double scale = tol.support_scale > 0.0 ? tol.support_scale : 1.0;
  return scale * static_cast<double>(dim) * std::numeric_limits<double>::epsilon() *
         max_abs_eigenvalue;
}

Matrix hermitize(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Spectrum spectrum(const Matrix& hermitian, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(hermitian));
  const Eigen::Index n = hermitian.rows();
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  // Eigen sorts ascending; flip to descending.
  for (Eigen::Index i = 0; i < n; ++i) {
    s.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    s.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  const double lmax = n == 0 ? 0.0 : s.eigenvalues.cwiseAbs().maxCoeff();
  s.threshold = support_threshold(static_cast<std::size_t>(n), lmax, tol);
  s.support_mask.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    s.support_mask[static_cast<std::size_t>(i)] = std::abs(s.eigenvalues(i)) > s.threshold;
  }
  return s;
}

Matrix spectral_fn(const Spectrum& s, const std::function<double(double)>& f, bool support_only) {
  const Eigen::Index n = s.eigenvalues.size();
  RealVector fv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool on_support = s.support_mask[static_cast<std::size_t>(i)];
    if (!on_support) {
      if (support_only) {
        fv(i) = 0.0;
        continue;
      }
    }
    const double v = f(s.eigenvalues(i));
    if (!std::isfinite(v)) {
      fail(ErrorCode::SingularOnSupport,
           "function is not finite at eigenvalue " + describe(s.eigenvalues(i)));
    }
    fv(i) = v;
  }
  return hermitize(s.eigenvectors * fv.asDiagonal() * s.eigenvectors.adjoint());
}

Matrix spectral_fn(const Matrix& hermitian, const std::function<double(double)>& f,
                   bool support_only, const Tolerances& tol) {
  return spectral_fn(spectrum(hermitian, tol), f, support_only);
}

DensityMatrix make_density(const Matrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail(ErrorCode::NotSquare, "matrix is " + std::to_string(m.rows()) + "x" +
                                   std::to_string(m.cols()));
  }
  if (static_cast<std::size_t>(m.rows()) > tol.dimension_cap) {
    fail(ErrorCode::DimensionOverflow, "dimension " + std::to_string(m.rows()) +
                                           " exceeds cap " + std::to_string(tol.dimension_cap));
  }
  if (!m.allFinite()) fail(ErrorCode::NotHermitian, "matrix has non-finite entries");
  const double asym = max_abs(m - m.adjoint());
  if (asym > tol.hermiticity) {
    fail(ErrorCode::NotHermitian, "max |A - A^dagger| = " + describe(asym));
  }
  Matrix h = hermitize(m);
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    fail(ErrorCode::BadTrace, "trace = " + describe(tr));
  }
  h /= tr;
  const Spectrum s = spectrum(h, tol);
  const double lmin = s.eigenvalues.size() ? s.eigenvalues(s.eigenvalues.size() - 1) : 0.0;
  if (lmin < -tol.psd) {
    fail(ErrorCode::NotPSD, "min eigenvalue = " + describe(lmin));
  }
  return detail::adopt(std::move(h));
}

DensityMatrix from_bloch(const Eigen::Vector3d& a, const Tolerances& tol) {
  const double r = a.norm();
  if (!std::isfinite(r) || r > 1.0 + tol.psd) {
    fail(ErrorCode::BlochOutOfBall, "|a| = " + describe(r));
  }
  const Complex i(0.0, 1.0);
  Matrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + a.z());
  m(1, 1) = 0.5 * (1.0 - a.z());
  m(0, 1) = 0.5 * (a.x() - i * a.y());
  m(1, 0) = 0.5 * (a.x() + i * a.y());
  return detail::adopt(std::move(m));
}

DensityMatrix from_distribution(const std::vector<double>& p, const Tolerances& tol) {
  if (p.empty()) fail(ErrorCode::BadNormalization, "empty distribution");
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) {
      fail(ErrorCode::NegativeProbability, "entry " + describe(x));
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol.trace) {
    fail(ErrorCode::BadNormalization, "sum = " + describe(sum));
  }
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = p[i] / sum;
  }
  return detail::adopt(std::move(m));
}

DensityMatrix from_pure(const Vector& psi, const Tolerances& tol) {
  const double n = psi.norm();
  if (!(n > 0.0) || std::abs(n - 1.0) > tol.trace) {
    fail(ErrorCode::BadNormalization, "|psi| = " + describe(n));
  }
  const Vector v = psi / n;
  return detail::adopt(hermitize(v * v.adjoint()));
}

DensityMatrix basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) fail(ErrorCode::OutOfRange, "basis index out of range");
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return detail::adopt(std::move(m));
}

DensityMatrix maximally_mixed(std::size_t dim) {
  if (dim == 0) fail(ErrorCode::OutOfRange, "dimension must be positive");
  const auto n = static_cast<Eigen::Index>(dim);
  return detail::adopt(Matrix::Identity(n, n) / static_cast<double>(dim));
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  for (std::uint64_t c : coords) h = mix(h ^ mix(c));
  return h;
}

DensityMatrix random_mixed(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  if (dim == 0 || rank == 0 || rank > dim) {
    fail(ErrorCode::BadRank, "rank " + std::to_string(rank) + " for dimension " +
                                 std::to_string(dim));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = gaussian(rng, normal);
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return detail::adopt(hermitize(rho));
}

Matrix random_unitary(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gaussian(rng, normal);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Matrix random_hermitian(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gaussian(rng, normal);
  }
  return hermitize(g);
}

Eigen::Vector3d random_bloch(std::uint64_t seed, bool on_sphere) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
  } while (v.norm() == 0.0);
  v.normalize();
  if (!on_sphere) v *= std::cbrt(uniform(rng));
  return v;
}

DensityMatrix conjugate(const DensityMatrix& rho, const Matrix& unitary) {
  return detail::adopt(hermitize(unitary * rho.matrix() * unitary.adjoint()));
}

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && out > cap / base) {
      fail(ErrorCode::DimensionOverflow, std::to_string(base) + "^" + std::to_string(exponent) +
                                             " exceeds cap " + std::to_string(cap));
    }
    out *= base;
  }
  if (out > cap) {
    fail(ErrorCode::DimensionOverflow,
         "dimension " + std::to_string(out) + " exceeds cap " + std::to_string(cap));
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b, const Tolerances& tol) {
  if (b.dim() != 0 && a.dim() > tol.dimension_cap / b.dim()) {
    fail(ErrorCode::DimensionOverflow, std::to_string(a.dim()) + "*" + std::to_string(b.dim()) +
                                           " exceeds cap " + std::to_string(tol.dimension_cap));
  }
  return detail::adopt(kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor_power(const DensityMatrix& a, std::size_t l, const Tolerances& tol) {
  if (l == 0) fail(ErrorCode::OutOfRange, "tensor power must be positive");
  checked_power(a.dim(), l, tol.dimension_cap);
  Matrix out = a.matrix();
  for (std::size_t i = 1; i < l; ++i) out = kron(out, a.matrix());
  return detail::adopt(std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& factor_dims,
                            const std::vector<std::size_t>& keep) {
  std::size_t total = 1;
  for (std::size_t d : factor_dims) {
    if (d == 0) fail(ErrorCode::BadFactorization, "zero factor dimension");
    total *= d;
  }
  if (factor_dims.empty() || total != rho.dim()) {
    fail(ErrorCode::BadFactorization, "factor dimensions multiply to " + std::to_string(total) +
                                          ", state dimension is " + std::to_string(rho.dim()));
  }
  const std::size_t nf = factor_dims.size();
  std::vector<bool> kept(nf, false);
  for (std::size_t k : keep) {
    if (k >= nf || kept[k]) fail(ErrorCode::BadIndexSet, "bad or repeated factor index " + std::to_string(k));
    kept[k] = true;
  }
  // Row-major strides: factor 0 is the most significant digit.
  std::vector<std::size_t> stride(nf, 1);
  for (std::size_t f = nf - 1; f-- > 0;) stride[f] = stride[f + 1] * factor_dims[f + 1];

  std::vector<std::size_t> kept_f, traced_f;
  for (std::size_t f = 0; f < nf; ++f) (kept[f] ? kept_f : traced_f).push_back(f);
  auto offsets = [&](const std::vector<std::size_t>& fs) {
    std::size_t count = 1;
    for (std::size_t f : fs) count *= factor_dims[f];
    std::vector<std::size_t> out(count, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::size_t rem = idx, off = 0;
      for (std::size_t j = fs.size(); j-- > 0;) {
        const std::size_t f = fs[j];
        off += (rem % factor_dims[f]) * stride[f];
        rem /= factor_dims[f];
      }
      out[idx] = off;
    }
    return out;
  };
  const auto ko = offsets(kept_f);
  const auto to = offsets(traced_f);
  const auto n = static_cast<Eigen::Index>(ko.size());
  Matrix out = Matrix::Zero(n, n);
  const Matrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t t : to) {
        acc += m(static_cast<Eigen::Index>(ko[static_cast<std::size_t>(i)] + t),
                 static_cast<Eigen::Index>(ko[static_cast<std::size_t>(j)] + t));
      }
      out(i, j) = acc;
    }
  }
  return detail::adopt(hermitize(out));
}

DensityMatrix cq_state(const std::vector<double>& weights, const std::vector<DensityMatrix>& blocks,
                       const Tolerances& tol) {
  if (weights.size() != blocks.size() || blocks.empty()) {
    fail(ErrorCode::MismatchedBlocks, std::to_string(weights.size()) + " weights for " +
                                          std::to_string(blocks.size()) + " blocks");
  }
  const std::size_t d = blocks.front().dim();
  for (const auto& b : blocks) {
    if (b.dim() != d) fail(ErrorCode::MismatchedBlocks, "block dimensions differ");
  }
  const DensityMatrix w = from_distribution(weights, tol);
  const std::size_t k = blocks.size();
  if (d > tol.dimension_cap / k) {
    fail(ErrorCode::DimensionOverflow, "cq state dimension exceeds cap");
  }
  const auto dd = static_cast<Eigen::Index>(d);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(k) * dd, static_cast<Eigen::Index>(k) * dd);
  for (std::size_t i = 0; i < k; ++i) {
    const auto off = static_cast<Eigen::Index>(i) * dd;
    out.block(off, off, dd, dd) = w.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() *
                                  blocks[i].matrix();
  }
  return detail::adopt(std::move(out));
}

}  // namespace qdivlab
