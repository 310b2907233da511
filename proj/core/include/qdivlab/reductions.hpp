#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qdivlab/states.hpp"

namespace qdivlab {

enum class ReductionKind { qsdp, qjsp, meas_qtdp, qtdp, qedp };
std::string to_string(ReductionKind kind);

struct ReductionInstance {
  ReductionKind kind = ReductionKind::qjsp;
  StatePair pair;
  double alpha = 0.0;
  double beta = 0.0;
  double g = 0.0;  // qedp only, nats
  std::optional<int> n;
};

// Root of H2(p) = target on [0, 1/2] by bisection.
double solve_binary_entropy(double target, double tolerance = 1e-12);

struct QjspToQedp {
  ReductionInstance instance;  // kind qedp, carries the output pair and g
  double p = 0.0;
  double qjs2_bits = 0.0;
  double entropy_difference_bits = 0.0;  // S2(out0) - S2(out1)
  double identity_residual = 0.0;
};

QjspToQedp qjsp_to_qedp(const StatePair& pair, double alpha, double beta,
                        const Tolerances& tol = default_tolerances());

struct GapAmplification {
  std::size_t p_replications = 1;
  double analytic_gap = 0.0;  // nats
  std::optional<double> materialized_gap;
};

GapAmplification qedp_gap_amplify(const StatePair& pair, double g, double target,
                                  const Tolerances& tol = default_tolerances());

enum class HardnessTarget { qjsp, meas_qtdp, qedp };
std::string to_string(HardnessTarget t);

struct ChainStep {
  std::string description;
  double lhs = 0.0;
  std::string relation;  // ">=", "<=" or "=="
  double rhs = 0.0;
  bool holds = false;
};

struct HardnessParams {
  HardnessTarget target = HardnessTarget::qjsp;
  int n = 0;
  double epsilon = 0.0;
  double source_regime = 0.0;  // 2^-(n'^(1/2 - eps/2)), n' = n or n - 3
  double alpha_threshold = 0.0;
  double beta_threshold = 0.0;
  std::optional<double> g_threshold;
  bool vacuous = false;
  std::vector<ChainStep> derivation_chain;

  bool chain_holds() const;
};

HardnessParams hardness_param_map(int n, double epsilon, HardnessTarget target);

struct ImplicationVerdict {
  bool triggered = false;
  bool satisfied = true;
  double premise_value = 0.0;
  double premise_threshold = 0.0;
  double conclusion_value = 0.0;
  double conclusion_threshold = 0.0;

  std::string label() const;  // "not-triggered", "satisfied" or "violated"
};

struct QsdpQjspVerdict {
  ImplicationVerdict forward;
  // As stated: QJS2 <= 2 ln2 beta^2 implies td <= sqrt(2 ln2) beta.
  ImplicationVerdict backward;
  // Same premise with the constant the series bound supports: td <= 2 ln2 beta.
  ImplicationVerdict backward_series;
  bool forward_ok() const { return forward.satisfied; }
  bool backward_ok() const { return backward.satisfied; }
};

QsdpQjspVerdict qsdp_to_qjsp_verdict(const StatePair& pair, double alpha, double beta,
                                     const Tolerances& tol = default_tolerances());

}  // namespace qdivlab
