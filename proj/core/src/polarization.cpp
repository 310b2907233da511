#include "qdivlab/polarization.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "qdivlab/divergences.hpp"
#include "qdivlab/errors.hpp"

namespace qdivlab {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

Interval exact(double v) { return {v, v}; }

Interval power(const Interval& v, std::size_t n) {
  const double e = static_cast<double>(n);
  return {std::pow(std::max(v.lo, 0.0), e), std::pow(std::max(v.hi, 0.0), e)};
}

// Fidelity range compatible with given qtd and qtd_meas ranges through
// 1/2 B^2 <= qtd_meas <= B^2 and 1/2 B^2 <= qtd <= B.
Interval fidelity_from(const Interval& qtd_v, const Interval& meas_v) {
  const double lo = std::max(1.0 - meas_v.hi, 1.0 - qtd_v.hi);
  const double hi = std::min(1.0 - meas_v.lo / 2.0, 1.0 - qtd_v.lo * qtd_v.lo / 2.0);
  return {std::clamp(lo, 0.0, 1.0), std::clamp(std::max(hi, lo), 0.0, 1.0)};
}

// Range of both divergences after an XOR of n copies. qtd is exactly
// multiplicative; qtd_meas is only bounded below by product measurements and
// above by qtd through data processing.
void xor_power(PairEvaluation& out, const PairEvaluation& in, std::size_t n) {
  out.qtd = power(in.qtd, n);
  const Interval product = power(in.qtd_meas, n);
  out.qtd_meas = {product.lo, std::max(product.lo, std::min(1.0, out.qtd.hi))};
}

void fill_from_fidelity(PairEvaluation& e) {
  e.bures_sq = {2.0 * (1.0 - e.fidelity.hi), 2.0 * (1.0 - e.fidelity.lo)};
  e.qtd_meas = {0.5 * e.bures_sq.lo, std::min(1.0, e.bures_sq.hi)};
  e.qtd = {0.5 * e.bures_sq.lo, std::min(1.0, std::sqrt(std::max(e.bures_sq.hi, 0.0)))};
}

bool fits(std::size_t base, std::size_t exponent, std::size_t cap) {
  try {
    checked_power(base, exponent, cap);
    return true;
  } catch (const Error&) {
    return false;
  }
}

const Interval& tracked(const PairEvaluation& e, PolarizationKind kind) {
  return kind == PolarizationKind::meas_qtd ? e.qtd_meas : e.qtd;
}

}  // namespace

std::string to_string(PolarizationKind kind) { return kind == PolarizationKind::meas_qtd ? "meas_qtd" : "qtd"; }
std::string to_string(EvaluationMode mode) { return mode == EvaluationMode::materialized ? "materialized" : "analytic"; }

StatePair xor_reduce(const StatePair& pair, std::size_t l, const Tolerances& tol) {
  if (l == 0) fail(ErrorCode::OutOfRange, "xor length must be positive");
  checked_power(pair.dim(), l, tol.dimension_cap);
  const Matrix& r0 = pair.rho0().matrix();
  const Matrix& r1 = pair.rho1().matrix();
  Matrix a = r0, b = r1;
  for (std::size_t i = 1; i < l; ++i) {
    Matrix na = 0.5 * (kron(a, r0) + kron(b, r1));
    Matrix nb = 0.5 * (kron(a, r1) + kron(b, r0));
    a = std::move(na);
    b = std::move(nb);
  }
  return StatePair(detail::adopt(std::move(a)), detail::adopt(std::move(b)));
}

PairEvaluation evaluate_materialized(const StatePair& pair, const Tolerances& tol) {
  PairEvaluation e;
  e.mode = EvaluationMode::materialized;
  e.pair = pair;
  e.log2_dim = std::log2(static_cast<double>(pair.dim()));
  const FidelityBures fb = fidelity_bures(pair, tol);
  e.fidelity = exact(fb.fidelity);
  e.bures_sq = exact(fb.bures_sq);
  e.qtd = exact(qtd(pair, tol));
  e.qtd_meas = exact(qtd_meas(pair, tol));
  e.td = trace_distance(pair, tol);
  return e;
}

PairEvaluation tensor_power_reduce(const StatePair& pair, std::size_t l, EvaluationMode mode,
                                   const Tolerances& tol) {
  if (l == 0) fail(ErrorCode::OutOfRange, "tensor power must be positive");
  if (mode == EvaluationMode::materialized) {
    return evaluate_materialized(
        StatePair(tensor_power(pair.rho0(), l, tol), tensor_power(pair.rho1(), l, tol)), tol);
  }
  PairEvaluation e;
  e.mode = EvaluationMode::analytic;
  e.log2_dim = static_cast<double>(l) * std::log2(static_cast<double>(pair.dim()));
  const double f = std::pow(fidelity_bures(pair, tol).fidelity, static_cast<double>(l));
  e.fidelity = exact(f);
  fill_from_fidelity(e);
  return e;
}

PolarizationSchedule make_schedule(double alpha, double beta, std::size_t k, PolarizationKind kind) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha <= 0.0 || alpha > 1.0 || beta < 0.0 || beta >= 1.0) {
    fail(ErrorCode::RegimeViolation, "need 0 < alpha <= 1 and 0 <= beta < 1, got alpha=" + num(alpha) +
                                         ", beta=" + num(beta));
  }
  if (k == 0) fail(ErrorCode::RegimeViolation, "k >= 1 fails: k=0");
  const bool meas = kind == PolarizationKind::meas_qtd;
  const double ratio = meas ? alpha : alpha * alpha;
  if (!(ratio > beta)) {
    fail(ErrorCode::RegimeViolation, std::string(meas ? "alpha > beta" : "alpha^2 > beta") + " fails: " +
                                         (meas ? "alpha" : "alpha^2") + "=" + num(ratio) + ", beta=" + num(beta));
  }
  PolarizationSchedule s;
  s.kind = kind;
  s.alpha = alpha;
  s.beta = beta;
  s.k = k;
  s.lambda = beta == 0.0 ? 2.0 : std::min(ratio / beta, 2.0);
  const double kd = static_cast<double>(k);
  const double target = (meas ? 8.0 : 16.0) * kd;
  const double divisor = meas ? 4.0 : 8.0;
  s.l = static_cast<std::size_t>(std::max(1.0, std::ceil(std::log(target) / std::log(s.lambda) - 1e-9)));

  auto yes2 = [&](std::size_t l, std::size_t m) {
    return 1.0 - std::exp(-static_cast<double>(m) * std::pow(ratio, static_cast<double>(l)) / 2.0);
  };
  auto no2 = [&](std::size_t l, std::size_t m) {
    const double bl = std::pow(beta, static_cast<double>(l));
    return meas ? 2.0 * static_cast<double>(m) * bl : std::sqrt(2.0 * static_cast<double>(m) * bl);
  };
  for (;; ++s.l, ++s.l_bumps) {
    if (s.l_bumps > 64) fail(ErrorCode::RegimeViolation, "no (l, m) keeps the stage-2 no bound at 1/2");
    const double al = std::pow(ratio, static_cast<double>(s.l));
    const double paper_m = std::pow(s.lambda, static_cast<double>(s.l)) / (divisor * al);
    const double min_m = 2.0 * kd / al;
    if (paper_m > 1e15) fail(ErrorCode::RegimeViolation, "m = " + num(paper_m) + " is not representable");
    s.m = static_cast<std::size_t>(std::max(1.0, std::ceil(paper_m - 1e-9)));
    s.m_rule = "paper";
    if (no2(s.l, s.m) <= 0.5) break;
    s.m = static_cast<std::size_t>(std::max(1.0, std::ceil(min_m - 1e-9)));
    s.m_rule = "yes-minimum";
    if (no2(s.l, s.m) <= 0.5) break;
  }

  const double l = static_cast<double>(s.l);
  const double y2 = yes2(s.l, s.m), n2 = no2(s.l, s.m);
  s.stage_bounds[0] = {1, std::pow(alpha, l), std::pow(beta, l), std::pow(alpha, l), std::pow(beta, l)};
  s.stage_bounds[1] = {2, 1.0 - std::exp(-kd), 0.5, y2, n2};
  s.stage_bounds[2] = {3, 1.0 - std::pow(2.0, -kd), std::pow(2.0, -kd), std::pow(y2, kd), std::pow(n2, kd)};
  s.stage3_nominal_certified = s.stage_bounds[2].yes >= s.stage_bounds[2].nominal_yes &&
                               s.stage_bounds[2].no <= s.stage_bounds[2].nominal_no;
  return s;
}

bool PolarizationRun::all_pass() const {
  return std::all_of(stages.begin(), stages.end(), [](const StageCertificate& c) { return c.verdict != "fail"; });
}

PolarizationRun polarize(const StatePair& pair, const PolarizationSchedule& schedule, std::size_t budget,
                         const Tolerances& tol) {
  constexpr double kSlack = 1e-9;
  using Clock = std::chrono::steady_clock;
  const PolarizationKind kind = schedule.kind;
  PolarizationRun run;
  run.schedule = schedule;
  const PairEvaluation input = evaluate_materialized(pair, tol);
  run.input_value = tracked(input, kind).lo;
  if (run.input_value >= schedule.alpha - 1e-12) {
    run.instance = "yes";
  } else if (run.input_value <= schedule.beta + 1e-12) {
    run.instance = "no";
  } else {
    run.instance = "neither";
  }

  Tolerances work = tol;
  work.dimension_cap = std::max<std::size_t>(budget, 1);
  const double log2_d = std::log2(static_cast<double>(pair.dim()));

  auto certify = [&](int stage, const PairEvaluation& e, double seconds) {
    const StageBound& b = schedule.stage_bounds[static_cast<std::size_t>(stage - 1)];
    StageCertificate c;
    c.stage = stage;
    c.mode = e.mode;
    c.log2_dim = e.log2_dim;
    c.value = tracked(e, kind);
    c.yes_bound = b.yes;
    c.no_bound = b.no;
    c.seconds = seconds;
    if (run.instance == "yes") {
      c.verdict = c.value.lo >= b.yes - kSlack ? "pass" : "fail";
    } else if (run.instance == "no") {
      c.verdict = c.value.hi <= b.no + kSlack ? "pass" : "fail";
    } else {
      c.verdict = "not-applicable";
    }
    run.stages.push_back(c);
  };

  // Stage 1: XOR with l copies.
  auto t0 = Clock::now();
  PairEvaluation s1;
  if (fits(pair.dim(), schedule.l, work.dimension_cap)) {
    s1 = evaluate_materialized(xor_reduce(pair, schedule.l, work), tol);
  } else {
    s1.mode = EvaluationMode::analytic;
    s1.log2_dim = static_cast<double>(schedule.l) * log2_d;
    xor_power(s1, input, schedule.l);
    s1.fidelity = fidelity_from(s1.qtd, s1.qtd_meas);
    s1.bures_sq = {2.0 * (1.0 - s1.fidelity.hi), 2.0 * (1.0 - s1.fidelity.lo)};
  }
  certify(1, s1, std::chrono::duration<double>(Clock::now() - t0).count());

  // Stage 2: m-fold tensor power.
  t0 = Clock::now();
  PairEvaluation s2;
  if (s1.pair && fits(s1.pair->dim(), schedule.m, work.dimension_cap)) {
    s2 = tensor_power_reduce(*s1.pair, schedule.m, EvaluationMode::materialized, work);
  } else {
    s2.mode = EvaluationMode::analytic;
    s2.log2_dim = static_cast<double>(schedule.m) * s1.log2_dim;
    s2.fidelity = power(s1.fidelity, schedule.m);
    fill_from_fidelity(s2);
  }
  certify(2, s2, std::chrono::duration<double>(Clock::now() - t0).count());

  // Stage 3: XOR with k copies.
  t0 = Clock::now();
  PairEvaluation s3;
  if (schedule.k == 1) {
    s3 = s2;
  } else if (s2.pair && fits(s2.pair->dim(), schedule.k, work.dimension_cap)) {
    s3 = evaluate_materialized(xor_reduce(*s2.pair, schedule.k, work), tol);
  } else {
    s3.mode = EvaluationMode::analytic;
    s3.log2_dim = static_cast<double>(schedule.k) * s2.log2_dim;
    xor_power(s3, s2, schedule.k);
    s3.fidelity = fidelity_from(s3.qtd, s3.qtd_meas);
    s3.bures_sq = {2.0 * (1.0 - s3.fidelity.hi), 2.0 * (1.0 - s3.fidelity.lo)};
  }
  certify(3, s3, std::chrono::duration<double>(Clock::now() - t0).count());

  run.result = s3;
  return run;
}

}  // namespace qdivlab
