#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qdivlab/types.hpp"

namespace qdivlab {

class DensityMatrix;

namespace detail {
// Wraps a matrix that is Hermitian, PSD and unit-trace by construction.
DensityMatrix adopt(Matrix m);
}  // namespace detail

class DensityMatrix {
 public:
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  // n with 2^n == dim, if any.
  std::optional<int> qubits() const;

 private:
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
  friend DensityMatrix detail::adopt(Matrix m);

  Matrix m_;
};

class StatePair {
 public:
  StatePair(DensityMatrix rho0, DensityMatrix rho1);

  const DensityMatrix& rho0() const { return rho0_; }
  const DensityMatrix& rho1() const { return rho1_; }
  std::size_t dim() const { return rho0_.dim(); }
  StatePair swapped() const { return StatePair(rho1_, rho0_); }

 private:
  DensityMatrix rho0_;
  DensityMatrix rho1_;
};

struct Spectrum {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // columns
  std::vector<bool> support_mask;
  double threshold = 0.0;

  std::size_t rank() const;
};

double support_threshold(std::size_t dim, double max_abs_eigenvalue,
                         const Tolerances& tol = default_tolerances());

Matrix hermitize(const Matrix& a);
Matrix kron(const Matrix& a, const Matrix& b);

// Symmetrizes before decomposing.
Spectrum spectrum(const Matrix& hermitian, const Tolerances& tol = default_tolerances());

Matrix spectral_fn(const Spectrum& s, const std::function<double(double)>& f,
                   bool support_only);
Matrix spectral_fn(const Matrix& hermitian, const std::function<double(double)>& f,
                   bool support_only, const Tolerances& tol = default_tolerances());

DensityMatrix make_density(const Matrix& m, const Tolerances& tol = default_tolerances());
DensityMatrix from_bloch(const Eigen::Vector3d& a, const Tolerances& tol = default_tolerances());
DensityMatrix from_distribution(const std::vector<double>& p,
                                const Tolerances& tol = default_tolerances());
DensityMatrix from_pure(const Vector& psi, const Tolerances& tol = default_tolerances());
DensityMatrix basis_state(std::size_t dim, std::size_t index);
DensityMatrix maximally_mixed(std::size_t dim);

// splitmix64-style mixing of a seed with any number of coordinates.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coords);

DensityMatrix random_mixed(std::size_t dim, std::size_t rank, std::uint64_t seed);
Matrix random_unitary(std::size_t dim, std::uint64_t seed);
Matrix random_hermitian(std::size_t dim, std::uint64_t seed);
// Uniform in the unit ball, or on its surface when on_sphere is set.
Eigen::Vector3d random_bloch(std::uint64_t seed, bool on_sphere);

DensityMatrix conjugate(const DensityMatrix& rho, const Matrix& unitary);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b,
                     const Tolerances& tol = default_tolerances());
DensityMatrix tensor_power(const DensityMatrix& a, std::size_t l,
                           const Tolerances& tol = default_tolerances());
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& factor_dims,
                            const std::vector<std::size_t>& keep);
// Sum_i w_i |i><i| (x) rho_i with the classical register as the first factor.
DensityMatrix cq_state(const std::vector<double>& weights, const std::vector<DensityMatrix>& blocks,
                       const Tolerances& tol = default_tolerances());

// Throws DimensionOverflow when base^exponent exceeds cap.
std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap);

}  // namespace qdivlab
