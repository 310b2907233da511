#pragma once

#include <cstddef>
#include <string>

#include "qdivlab/states.hpp"

namespace qdivlab {

struct SwapTestResult {
  double p0_outcome = 0.0;
  double overlap = 0.0;
};
SwapTestResult swap_test_prob(const StatePair& pair);

struct Purification {
  Vector vector;  // system (x) environment, system index most significant
  std::size_t system_dim = 0;
  std::size_t env_dim = 0;
};
Purification purify(const DensityMatrix& rho, const Tolerances& tol = default_tolerances());
DensityMatrix reduced_state(const Purification& pur);

// H on the control, controlled swap of the two system registers, H again.
// Returns the probability of control outcome 0.
double swap_test_statevector(const Purification& pur0, const Purification& pur1,
                             const Tolerances& tol = default_tolerances());

struct AmplificationState {
  double p = 0.0;
  double theta = 0.0;
  double success_poly = 0.0;  // 2p^3 - 6p^2 + 9p/2
  double success_trig = 0.0;  // sin^2(3 theta)
  double p_acc = 0.0;
};
AmplificationState grover_single_iteration(double p);

// Applies one Grover iterate with explicit reflections to the flagged
// SWAP-test state and returns the probability that flag and control are 0.
double grover_statevector_success(const Purification& pur0, const Purification& pur1,
                                  const Tolerances& tol = default_tolerances());

inline constexpr double kAcceptThreshold = 1e-12;

struct NqpDecision {
  double p = 0.0;
  double p_acc = 0.0;
  double lower_bound_yes = 0.0;
  bool accept = false;
  std::string verdict;  // "close" on accept, "far" on reject
};
NqpDecision nqp_decide(const StatePair& pair);

struct PpThresholds {
  int n = 0;
  double yes_floor = 0.0;
  double no_ceiling = 0.0;
  double gap_floor = 0.0;
};
PpThresholds pp_thresholds(int n);

struct PpDecision {
  PpThresholds thresholds;
  double acceptance = 0.0;
  double acceptance_mixture = 0.0;
};
// Requires a power-of-two dimension.
PpDecision pp_hybrid_accept(const StatePair& pair);

struct HsTdBounds {
  double hs = 0.0;
  double td = 0.0;
  double lower = 0.0;
  double rank_aware_upper = 0.0;
  double upper = 0.0;
  std::size_t rank0 = 0;
  std::size_t rank1 = 0;

  bool holds(double slack) const;
};
HsTdBounds hs_td_bounds(const StatePair& pair, const Tolerances& tol = default_tolerances());

}  // namespace qdivlab
