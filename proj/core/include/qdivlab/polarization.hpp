#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qdivlab/states.hpp"

namespace qdivlab {

enum class PolarizationKind { meas_qtd, qtd };
enum class EvaluationMode { materialized, analytic };

std::string to_string(PolarizationKind kind);
std::string to_string(EvaluationMode mode);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct PairEvaluation {
  EvaluationMode mode = EvaluationMode::analytic;
  std::optional<StatePair> pair;
  double log2_dim = 0.0;
  Interval fidelity;
  Interval bures_sq;
  Interval qtd;
  Interval qtd_meas;
  std::optional<double> td;  // materialized only
};

// l-fold XOR construction. qtd is exactly multiplicative under it; qtd_meas is
// super-multiplicative, with equality when the pair commutes.
StatePair xor_reduce(const StatePair& pair, std::size_t l, const Tolerances& tol = default_tolerances());

PairEvaluation evaluate_materialized(const StatePair& pair, const Tolerances& tol = default_tolerances());
PairEvaluation tensor_power_reduce(const StatePair& pair, std::size_t l, EvaluationMode mode,
                                   const Tolerances& tol = default_tolerances());

struct StageBound {
  int stage = 0;
  // Values stated by the schedule's lemma chain.
  double nominal_yes = 0.0;
  double nominal_no = 0.0;
  // Values implied by the integer l and m actually chosen; at least as strong
  // as the nominal ones except possibly the stage-3 yes side for small k.
  double yes = 0.0;
  double no = 0.0;
};

struct PolarizationSchedule {
  PolarizationKind kind = PolarizationKind::meas_qtd;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t k = 1;
  double lambda = 2.0;
  std::size_t l = 1;
  std::size_t m = 1;
  // "paper" when m is the rounded-up closed form, "yes-minimum" when the
  // smallest m meeting the stage-2 yes bound was needed to keep the no bound.
  std::string m_rule = "paper";
  std::size_t l_bumps = 0;
  bool stage3_nominal_certified = false;
  std::array<StageBound, 3> stage_bounds{};
};

PolarizationSchedule make_schedule(double alpha, double beta, std::size_t k, PolarizationKind kind);

struct StageCertificate {
  int stage = 0;
  EvaluationMode mode = EvaluationMode::analytic;
  double log2_dim = 0.0;
  Interval value;
  double yes_bound = 0.0;
  double no_bound = 0.0;
  std::string verdict;  // "pass", "fail" or "not-applicable"
  double seconds = 0.0;
};

struct PolarizationRun {
  PolarizationSchedule schedule;
  double input_value = 0.0;
  std::string instance;  // "yes", "no" or "neither"
  std::vector<StageCertificate> stages;
  PairEvaluation result;

  bool all_pass() const;
};

PolarizationRun polarize(const StatePair& pair, const PolarizationSchedule& schedule, std::size_t budget,
                         const Tolerances& tol = default_tolerances());

}  // namespace qdivlab
