#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdivlab/states.hpp"

namespace qdivlab {

struct ClassicalDivergences {
  double sd = 0.0;
  double tdc = 0.0;
  double js2_bits = 0.0;
  double hellinger_sq = 0.0;
};

// Binary entropy in bits.
double binary_entropy(double p);
double shannon_entropy_bits(const std::vector<double>& p);
ClassicalDivergences classical_divergences(const std::vector<double>& p0, const std::vector<double>& p1);
// Diagonal of rho in the computational basis, clipped at zero.
std::vector<double> diagonal_distribution(const DensityMatrix& rho);

struct Entropy {
  double nats = 0.0;
  double bits = 0.0;
};

struct FidelityBures {
  double fidelity = 0.0;
  double bures_sq = 0.0;
};

struct QuantumHellinger {
  double q_half_affinity = 0.0;
  double qh_sq = 0.0;
};

struct QjsValue {
  double nats = 0.0;
  double bits = 0.0;
  // |entropy form - relative-entropy form| in nats.
  double cross_check_residual = 0.0;
};

double trace_distance(const StatePair& pair, const Tolerances& tol = default_tolerances());
FidelityBures fidelity_bures(const StatePair& pair, const Tolerances& tol = default_tolerances());
QuantumHellinger quantum_hellinger(const StatePair& pair, const Tolerances& tol = default_tolerances());
Entropy von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol = default_tolerances());
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const Tolerances& tol = default_tolerances());
QjsValue qjs(const StatePair& pair, const Tolerances& tol = default_tolerances());

// Tr(D mu^-alpha D mu^(alpha-1)) with D = (rho0-rho1)/2, mu = (rho0+rho1)/2.
double qtd_alpha(const StatePair& pair, double alpha, const Tolerances& tol = default_tolerances());
double qtd(const StatePair& pair, const Tolerances& tol = default_tolerances());
// 1/2 Tr(D S^-1/2 D S^-1/2) with D = rho0-rho1, S = rho0+rho1, built from matrix products.
double qtd_product_form(const StatePair& pair, const Tolerances& tol = default_tolerances());
double qtd_meas(const StatePair& pair, const Tolerances& tol = default_tolerances());

double hs_distance_sq(const StatePair& pair);

struct BinaryEntropyBound {
  double h2_bound = 0.0;
  double series_bound = 0.0;
  std::size_t terms = 0;
};
BinaryEntropyBound binary_entropy_bound(double td_value, std::size_t terms = 200);

struct MeasurementEnsemble {
  std::vector<Matrix> elements;
  double completeness_residual = 0.0;
};
// Rank-one projectors onto the columns of a unitary.
MeasurementEnsemble projective_measurement(const Matrix& basis);
std::vector<double> induced_distribution(const DensityMatrix& rho, const MeasurementEnsemble& m);

struct SearchConfig {
  std::size_t restarts = 4;
  std::size_t refine_steps = 12;
  double step = 0.25;
  std::uint64_t seed = 0;
};

// Best JS2 over the computational, Helstrom and midpoint eigenbases plus random
// bases, each refined by accept-if-better unitary perturbations.
double measured_qjs2_lower_bound(const StatePair& pair, const SearchConfig& search = {},
                                 const Tolerances& tol = default_tolerances());
// JS2 of the outcome distributions of a projective measurement in `basis`.
double basis_js2(const StatePair& pair, const Matrix& basis);

struct EqualityConditionReport {
  double cond1_residual = 0.0;
  double cond2_residual = 0.0;
  bool cond1_ok = false;
  bool cond2_ok = false;
  bool cond3_ok = false;
  bool overall = false;
};
EqualityConditionReport qtd_equality_conditions(const StatePair& pair, double tol = 1e-9,
                                                const Tolerances& tols = default_tolerances());

struct JordanParts {
  Matrix common;    // (rho0 + rho1 - |rho0 - rho1|) / 2
  Matrix positive;  // (rho0 - rho1 + |rho0 - rho1|) / 2
  Matrix negative;  // (rho1 - rho0 + |rho0 - rho1|) / 2
  double common_min_eigenvalue = 0.0;
};
JordanParts jordan_parts(const StatePair& pair, const Tolerances& tol = default_tolerances());
// Throws NotPSD when the common part has a negative eigenvalue, which happens
// for some non-commuting pairs.
StatePair qutrit_flag_embedding(const StatePair& pair, const Tolerances& tol = default_tolerances());

struct DivergenceReport {
  double td = 0.0;
  double fidelity = 0.0;
  double bures_sq = 0.0;
  double q_half_affinity = 0.0;
  double qh_sq = 0.0;
  double hs_sq = 0.0;
  double qjs_nats = 0.0;
  double qjs2_bits = 0.0;
  double qtd = 0.0;
  double qtd_meas = 0.0;
  double measured_qjs2_lower_bound = 0.0;
  double alpha = 0.5;
  double qtd_alpha = 0.0;
  double qjs_cross_check_residual = 0.0;
  Tolerances tolerances;
};

DivergenceReport compute_report(const StatePair& pair, double alpha = 0.5, const SearchConfig& search = {},
                                const Tolerances& tol = default_tolerances());
// Throws OutOfRange naming the first field outside its admissible interval.
void check_report_ranges(const DivergenceReport& r, double tol = 1e-9);

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;

  double margin() const { return rhs - lhs; }
  bool holds(double slack) const { return lhs - rhs <= slack; }
};

inline constexpr double kAlphaProbes[] = {0.6, 0.75, 0.9};

// Proven relations lhs <= rhs for one pair, in a fixed order.
std::vector<InequalityCheck> proven_inequalities(const StatePair& pair, const DivergenceReport& r,
                                                 const Tolerances& tol = default_tolerances());
std::vector<std::string> proven_inequality_names();

}  // namespace qdivlab
