#include "qdivlab/reductions.hpp"

#include <cmath>
#include <sstream>

#include "qdivlab/divergences.hpp"
#include "qdivlab/errors.hpp"

namespace qdivlab {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

ChainStep step(std::string what, double lhs, const char* rel, double rhs) {
  ChainStep s{std::move(what), lhs, rel, rhs, false};
  const std::string r = rel;
  if (r == ">=") s.holds = lhs >= rhs;
  else if (r == "<=") s.holds = lhs <= rhs;
  else s.holds = std::abs(lhs - rhs) <= 1e-12;
  return s;
}

double exp2_neg(double x) { return std::exp2(-x); }

// Steps are stated on complements (1 - value) so they stay resolvable once
// the values themselves round to 1.
void qjsp_chain(std::vector<ChainStep>& out, double n, double eps, double beta_thr) {
  const double x = std::pow(n, 0.5 - eps / 2.0);
  const double s = exp2_neg(x);
  const double mid = 2.0 * exp2_neg((x + 1.0) / 2.0);
  out.push_back(step("H2(s/2) <= 2*2^(-(x+1)/2), x = n^(1/2-eps/2)", binary_entropy(s / 2.0), "<=", mid));
  out.push_back(step("2*2^(-(x+1)/2) <= 1 - alpha_threshold", mid, "<=", beta_thr));
  out.push_back(step("s <= beta_threshold", s, "<=", beta_thr));
}

}  // namespace

std::string to_string(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::qsdp: return "qsdp";
    case ReductionKind::qjsp: return "qjsp";
    case ReductionKind::meas_qtdp: return "meas_qtdp";
    case ReductionKind::qtdp: return "qtdp";
    case ReductionKind::qedp: return "qedp";
  }
  return "unknown";
}

std::string to_string(HardnessTarget t) {
  switch (t) {
    case HardnessTarget::qjsp: return "qjsp";
    case HardnessTarget::meas_qtdp: return "meas_qtdp";
    case HardnessTarget::qedp: return "qedp";
  }
  return "unknown";
}

double solve_binary_entropy(double target, double tolerance) {
  if (!(target >= 0.0 && target <= 1.0)) fail(ErrorCode::BisectionFailure, "target " + num(target) + " outside [0, 1]");
  double lo = 0.0, hi = 0.5;
  // Bisect past the requested width while the residual is still resolvable;
  // H2 is steep near 0, so a 1e-12 bracket alone can leave a large residual.
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= tolerance && std::abs(binary_entropy(mid) - target) <= 1e-14) break;
    (binary_entropy(mid) < target ? lo : hi) = mid;
  }
  double best = 0.5 * (lo + hi);
  for (double c : {lo, hi}) {
    if (std::abs(binary_entropy(c) - target) < std::abs(binary_entropy(best) - target)) best = c;
  }
  if (std::abs(binary_entropy(best) - target) > 1e-12) {
    fail(ErrorCode::BisectionFailure, "no root of H2(p) = " + num(target));
  }
  return best;
}

QjspToQedp qjsp_to_qedp(const StatePair& pair, double alpha, double beta, const Tolerances& tol) {
  if (!(beta >= 0.0 && beta < alpha && alpha <= 1.0)) {
    fail(ErrorCode::BadPromise, "need 0 <= beta < alpha <= 1, got alpha=" + num(alpha) + ", beta=" + num(beta));
  }
  const double p = solve_binary_entropy(1.0 - (alpha + beta) / 2.0);
  const DensityMatrix mid = detail::adopt(hermitize((pair.rho0().matrix() + pair.rho1().matrix()) * 0.5));
  const DensityMatrix out1 = cq_state({0.5, 0.5}, {pair.rho0(), pair.rho1()}, tol);
  const DensityMatrix out0 = tensor(from_distribution({p, 1.0 - p}, tol), mid, tol);

  QjspToQedp r{ReductionInstance{ReductionKind::qedp, StatePair(out0, out1), alpha, beta, kLn2 / 2.0 * (alpha - beta),
                                 pair.rho0().qubits()},
               p, 0.0, 0.0, 0.0};
  r.qjs2_bits = qjs(pair, tol).bits;
  r.entropy_difference_bits = von_neumann_entropy(out0, tol).bits - von_neumann_entropy(out1, tol).bits;
  r.identity_residual = std::abs(r.entropy_difference_bits - (r.qjs2_bits - (alpha + beta) / 2.0));
  return r;
}

GapAmplification qedp_gap_amplify(const StatePair& pair, double g, double target, const Tolerances& tol) {
  if (!(g > 0.0)) fail(ErrorCode::BadPromise, "gap must be positive, got " + num(g));
  if (!(target > 0.0)) fail(ErrorCode::OutOfRange, "target must be positive, got " + num(target));
  GapAmplification out;
  const double ratio = target / g;
  const double nearest = std::round(ratio);
  const double reps = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest : std::ceil(ratio);
  out.p_replications = static_cast<std::size_t>(std::max(1.0, reps));
  const double diff = von_neumann_entropy(pair.rho0(), tol).nats - von_neumann_entropy(pair.rho1(), tol).nats;
  out.analytic_gap = static_cast<double>(out.p_replications) * diff;
  bool small = true;
  try {
    checked_power(pair.dim(), out.p_replications, tol.dimension_cap);
  } catch (const Error&) {
    small = false;
  }
  if (small) {
    out.materialized_gap = von_neumann_entropy(tensor_power(pair.rho0(), out.p_replications, tol), tol).nats -
                           von_neumann_entropy(tensor_power(pair.rho1(), out.p_replications, tol), tol).nats;
  }
  return out;
}

bool HardnessParams::chain_holds() const {
  for (const auto& s : derivation_chain) {
    if (!s.holds) return false;
  }
  return true;
}

HardnessParams hardness_param_map(int n, double epsilon, HardnessTarget target) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) fail(ErrorCode::OutOfRange, "epsilon = " + num(epsilon) + " not in (0, 1/2)");
  if (n < 1) fail(ErrorCode::OutOfRange, "n must be at least 1");
  HardnessParams h;
  h.target = target;
  h.n = n;
  h.epsilon = epsilon;
  if (target == HardnessTarget::qedp) {
    if (n < 3) fail(ErrorCode::OutOfRange, "qedp needs n >= 3");
    const double src = static_cast<double>(n - 3);
    const double y = std::pow(src, 0.5 - epsilon);
    h.alpha_threshold = 1.0 - exp2_neg(y);
    h.beta_threshold = exp2_neg(y);
    h.g_threshold = kLn2 / 2.0 * (1.0 - std::exp2(-y + 1.0));
    h.vacuous = *h.g_threshold <= 0.0;
    h.source_regime = exp2_neg(std::pow(src, 0.5 - epsilon / 2.0));
    if (n > 3) {
      qjsp_chain(h.derivation_chain, src, epsilon, h.beta_threshold);
      h.derivation_chain.push_back(step("(ln2/2)(alpha_threshold - beta_threshold) == g_threshold",
                                        kLn2 / 2.0 * (h.alpha_threshold - h.beta_threshold), "==", *h.g_threshold));
    }
    return h;
  }
  const double nd = static_cast<double>(n);
  const double y = std::pow(nd, 0.5 - epsilon);
  h.alpha_threshold = 1.0 - exp2_neg(y);
  h.beta_threshold = exp2_neg(y);
  h.source_regime = exp2_neg(std::pow(nd, 0.5 - epsilon / 2.0));
  if (target == HardnessTarget::qjsp) {
    qjsp_chain(h.derivation_chain, nd, epsilon, h.beta_threshold);
  } else {
    const double s = h.source_regime;
    h.derivation_chain.push_back(step("1 - (1 - s)^2 <= 2s", s * (2.0 - s), "<=", 2.0 * s));
    h.derivation_chain.push_back(step("2s <= 1 - alpha_threshold", 2.0 * s, "<=", h.beta_threshold));
    h.derivation_chain.push_back(step("s <= beta_threshold", s, "<=", h.beta_threshold));
  }
  return h;
}

std::string ImplicationVerdict::label() const {
  if (!triggered) return "not-triggered";
  return satisfied ? "satisfied" : "violated";
}

QsdpQjspVerdict qsdp_to_qjsp_verdict(const StatePair& pair, double alpha, double beta, const Tolerances& tol) {
  constexpr double kSlack = 1e-9;
  const double q = qjs(pair, tol).bits;
  const double t = trace_distance(pair, tol);
  auto implication = [&](double premise_value, double premise_thr, bool premise_ge, double concl_value,
                         double concl_thr, bool concl_ge) {
    ImplicationVerdict v{false, true, premise_value, premise_thr, concl_value, concl_thr};
    v.triggered = premise_ge ? premise_value >= premise_thr - kSlack : premise_value <= premise_thr + kSlack;
    if (v.triggered) {
      v.satisfied = concl_ge ? concl_value >= concl_thr - kSlack : concl_value <= concl_thr + kSlack;
    }
    return v;
  };
  QsdpQjspVerdict out;
  out.forward = implication(q, alpha * alpha, true, t, alpha * alpha, true);
  out.backward = implication(q, 2.0 * kLn2 * beta * beta, false, t, std::sqrt(2.0 * kLn2) * beta, false);
  out.backward_series = implication(q, 2.0 * kLn2 * beta * beta, false, t, 2.0 * kLn2 * beta, false);
  return out;
}

}  // namespace qdivlab
