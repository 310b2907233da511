#include "qdivlab/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

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

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

Matrix difference(const StatePair& p) { return p.rho0().matrix() - p.rho1().matrix(); }
Matrix sum(const StatePair& p) { return p.rho0().matrix() + p.rho1().matrix(); }

// Entries of the half-difference expressed in the eigenbasis of the midpoint.
struct MidpointFrame {
  Spectrum mid;
  Matrix delta;
};

MidpointFrame midpoint_frame(const StatePair& pair, const Tolerances& tol) {
  MidpointFrame f;
  f.mid = spectrum(sum(pair) * 0.5, tol);
  f.delta = f.mid.eigenvectors.adjoint() * (difference(pair) * 0.5) * f.mid.eigenvectors;
  return f;
}

RealVector clipped_eigenvalues(const Matrix& h, const Tolerances& tol, const char* what) {
  RealVector ev = spectrum(h, tol).eigenvalues;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol.psd) {
      fail(ErrorCode::NegativeEigenvalue, std::string(what) + " has eigenvalue " + num(ev(i)));
    }
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  return ev;
}

Matrix psd_sqrt(const DensityMatrix& rho, const Tolerances& tol) {
  return spectral_fn(rho.matrix(), [](double x) { return std::sqrt(std::max(x, 0.0)); }, true, tol);
}

}  // namespace

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log1p(-p) / std::log(2.0));
}

double shannon_entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

ClassicalDivergences classical_divergences(const std::vector<double>& p0, const std::vector<double>& p1) {
  auto check = [](const std::vector<double>& p, const char* name) {
    double s = 0.0;
    for (double x : p) {
      if (!std::isfinite(x) || x < -1e-12) {
        fail(ErrorCode::InvalidDistribution, std::string(name) + " has entry " + num(x));
      }
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-9) fail(ErrorCode::InvalidDistribution, std::string(name) + " sums to " + num(s));
  };
  if (p0.size() != p1.size() || p0.empty()) {
    fail(ErrorCode::InvalidDistribution, "distributions have different supports");
  }
  check(p0, "p0");
  check(p1, "p1");
  ClassicalDivergences c;
  std::vector<double> mix(p0.size());
  for (std::size_t i = 0; i < p0.size(); ++i) {
    const double a = std::max(p0[i], 0.0), b = std::max(p1[i], 0.0);
    const double d = a - b;
    c.sd += 0.5 * std::abs(d);
    if (a + b > 0.0) c.tdc += 0.5 * d * d / (a + b);
    const double h = std::sqrt(a) - std::sqrt(b);
    c.hellinger_sq += 0.5 * h * h;
    mix[i] = 0.5 * (a + b);
  }
  c.js2_bits = shannon_entropy_bits(mix) - 0.5 * (shannon_entropy_bits(p0) + shannon_entropy_bits(p1));
  return c;
}

std::vector<double> diagonal_distribution(const DensityMatrix& rho) {
  std::vector<double> p(rho.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::max(rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real(), 0.0);
    s += p[i];
  }
  for (double& x : p) x /= s;
  return p;
}

double trace_distance(const StatePair& pair, const Tolerances& tol) {
  return 0.5 * spectrum(difference(pair), tol).eigenvalues.cwiseAbs().sum();
}

FidelityBures fidelity_bures(const StatePair& pair, const Tolerances& tol) {
  const Matrix prod = psd_sqrt(pair.rho0(), tol) * psd_sqrt(pair.rho1(), tol);
  Eigen::BDCSVD<Matrix> svd(prod);
  FidelityBures out;
  out.fidelity = svd.singularValues().sum();
  out.bures_sq = 2.0 * (1.0 - out.fidelity);
  return out;
}

QuantumHellinger quantum_hellinger(const StatePair& pair, const Tolerances& tol) {
  QuantumHellinger out;
  out.q_half_affinity = (psd_sqrt(pair.rho0(), tol) * psd_sqrt(pair.rho1(), tol)).trace().real();
  out.qh_sq = 1.0 - out.q_half_affinity;
  return out;
}

Entropy von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol) {
  const RealVector ev = clipped_eigenvalues(rho.matrix(), tol, "state");
  Entropy e;
  for (Eigen::Index i = 0; i < ev.size(); ++i) e.nats -= xlogx(ev(i));
  e.bits = e.nats / kLn2;
  return e;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, const Tolerances& tol) {
  if (rho.dim() != sigma.dim()) fail(ErrorCode::MismatchedBlocks, "relative entropy of different dimensions");
  const Spectrum s = spectrum(sigma.matrix(), tol);
  const Matrix in_basis = s.eigenvectors.adjoint() * rho.matrix() * s.eigenvectors;
  double cross = 0.0, outside = 0.0;
  for (Eigen::Index j = 0; j < s.eigenvalues.size(); ++j) {
    const double w = in_basis(j, j).real();
    if (s.support_mask[static_cast<std::size_t>(j)] && s.eigenvalues(j) > 0.0) {
      cross += w * std::log(s.eigenvalues(j));
    } else {
      outside += w;
    }
  }
  if (outside > tol.psd) {
    fail(ErrorCode::SupportViolation, "rho has weight " + num(outside) + " outside supp(sigma)");
  }
  return -von_neumann_entropy(rho, tol).nats - cross;
}

QjsValue qjs(const StatePair& pair, const Tolerances& tol) {
  const DensityMatrix mid = detail::adopt(hermitize(sum(pair) * 0.5));
  QjsValue out;
  out.nats = von_neumann_entropy(mid, tol).nats -
             0.5 * (von_neumann_entropy(pair.rho0(), tol).nats + von_neumann_entropy(pair.rho1(), tol).nats);
  out.bits = out.nats / kLn2;
  const double rel = 0.5 * (relative_entropy(pair.rho0(), mid, tol) + relative_entropy(pair.rho1(), mid, tol));
  out.cross_check_residual = std::abs(rel - out.nats);
  return out;
}

double qtd_alpha(const StatePair& pair, double alpha, const Tolerances& tol) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::OutOfRange, "alpha = " + num(alpha));
  const MidpointFrame f = midpoint_frame(pair, tol);
  const Eigen::Index n = f.delta.rows();
  RealVector left(n), right(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool on = f.mid.support_mask[static_cast<std::size_t>(i)] && f.mid.eigenvalues(i) > 0.0;
    left(i) = on ? std::pow(f.mid.eigenvalues(i), -alpha) : 0.0;
    right(i) = on ? std::pow(f.mid.eigenvalues(i), alpha - 1.0) : 0.0;
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) acc += std::norm(f.delta(i, j)) * left(i) * right(j);
  }
  return acc;
}

double qtd(const StatePair& pair, const Tolerances& tol) { return qtd_alpha(pair, 0.5, tol); }

double qtd_product_form(const StatePair& pair, const Tolerances& tol) {
  const Matrix d = difference(pair);
  const Matrix w = spectral_fn(sum(pair), [](double x) { return 1.0 / std::sqrt(x); }, true, tol);
  return 0.5 * (d * w * d * w).trace().real();
}

double qtd_meas(const StatePair& pair, const Tolerances& tol) {
  const MidpointFrame f = midpoint_frame(pair, tol);
  const Eigen::Index n = f.delta.rows();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double denom = f.mid.eigenvalues(i) + f.mid.eigenvalues(j);
      const double mag = std::norm(f.delta(i, j));
      if (denom > f.mid.threshold) {
        acc += 2.0 * mag / denom;
      } else if (std::sqrt(mag) > tol.psd) {
        fail(ErrorCode::SupportInconsistency,
             "difference entry " + num(std::sqrt(mag)) + " outside the midpoint support");
      }
    }
  }
  return acc;
}

double hs_distance_sq(const StatePair& pair) { return difference(pair).squaredNorm(); }

BinaryEntropyBound binary_entropy_bound(double td_value, std::size_t terms) {
  if (!(td_value >= -1e-9 && td_value <= 1.0 + 1e-9)) fail(ErrorCode::OutOfRange, "td = " + num(td_value));
  const double t = std::clamp(td_value, 0.0, 1.0);
  BinaryEntropyBound b;
  b.terms = terms;
  b.h2_bound = 1.0 - binary_entropy((1.0 - t) / 2.0);
  const double t2 = t * t;
  double power = 1.0;
  for (std::size_t v = 1; v <= terms; ++v) {
    power *= t2;
    const double dv = static_cast<double>(v);
    b.series_bound += power / (kLn2 * 2.0 * dv * (2.0 * dv - 1.0));
  }
  return b;
}

EqualityConditionReport qtd_equality_conditions(const StatePair& pair, double tol, const Tolerances& tols) {
  const Matrix d = difference(pair);
  if (d.cwiseAbs().maxCoeff() <= tol) fail(ErrorCode::DegeneratePair, "rho0 = rho1 within tolerance");
  const Matrix s = sum(pair);
  const Spectrum ss = spectrum(s, tols);
  EqualityConditionReport r;

  const Matrix s_pinv = spectral_fn(ss, [](double x) { return 1.0 / x; }, true);
  r.cond1_residual = (d * s_pinv * d - s).cwiseAbs().maxCoeff();
  r.cond1_ok = r.cond1_residual <= tol;

  const Spectrum ds = spectrum(d, tols);
  double mean_sq = 0.0;
  std::size_t support = 0;
  for (Eigen::Index k = 0; k < ds.eigenvalues.size(); ++k) {
    if (ds.support_mask[static_cast<std::size_t>(k)]) {
      mean_sq += ds.eigenvalues(k) * ds.eigenvalues(k);
      ++support;
    }
  }
  mean_sq /= static_cast<double>(support);
  for (Eigen::Index k = 0; k < ds.eigenvalues.size(); ++k) {
    if (ds.support_mask[static_cast<std::size_t>(k)]) {
      r.cond2_residual = std::max(r.cond2_residual, std::abs(ds.eigenvalues(k) * ds.eigenvalues(k) - mean_sq));
    }
  }
  r.cond2_ok = r.cond2_residual <= tol;

  // Sign pattern of S^-1/2 D S^1/2 against D, paired by descending order.
  const Matrix s_isqrt = spectral_fn(ss, [](double x) { return 1.0 / std::sqrt(x); }, true);
  const Matrix s_sqrt = spectral_fn(ss, [](double x) { return std::sqrt(x); }, true);
  Eigen::ComplexEigenSolver<Matrix> ces(s_isqrt * d * s_sqrt, false);
  std::vector<double> similar(static_cast<std::size_t>(ces.eigenvalues().size()));
  for (Eigen::Index k = 0; k < ces.eigenvalues().size(); ++k) similar[static_cast<std::size_t>(k)] = ces.eigenvalues()(k).real();
  std::sort(similar.begin(), similar.end(), std::greater<>());
  auto sign = [tol](double x) { return x > tol ? 1 : (x < -tol ? -1 : 0); };
  r.cond3_ok = true;
  for (Eigen::Index k = 0; k < ds.eigenvalues.size(); ++k) {
    if (!ds.support_mask[static_cast<std::size_t>(k)]) continue;
    if (sign(ds.eigenvalues(k)) != sign(similar[static_cast<std::size_t>(k)])) r.cond3_ok = false;
  }
  r.overall = r.cond1_ok && r.cond2_ok && r.cond3_ok;
  return r;
}

JordanParts jordan_parts(const StatePair& pair, const Tolerances& tol) {
  const Matrix d = difference(pair);
  const Matrix abs_d = spectral_fn(d, [](double x) { return std::abs(x); }, false, tol);
  JordanParts j;
  j.common = hermitize((sum(pair) - abs_d) * 0.5);
  j.positive = hermitize((d + abs_d) * 0.5);
  j.negative = hermitize((abs_d - d) * 0.5);
  const RealVector ev = spectrum(j.common, tol).eigenvalues;
  j.common_min_eigenvalue = ev(ev.size() - 1);
  return j;
}

StatePair qutrit_flag_embedding(const StatePair& pair, const Tolerances& tol) {
  const JordanParts j = jordan_parts(pair, tol);
  if (j.common_min_eigenvalue < -tol.psd) {
    fail(ErrorCode::NotPSD, "common part (rho0 + rho1 - |rho0 - rho1|)/2 has eigenvalue " +
                                num(j.common_min_eigenvalue));
  }
  auto flag = [](int k) {
    Matrix e = Matrix::Zero(3, 3);
    e(k, k) = 1.0;
    return e;
  };
  const Matrix shared = kron(j.common, flag(2));
  return StatePair(make_density(shared + kron(j.positive, flag(0)), tol),
                   make_density(shared + kron(j.negative, flag(1)), tol));
}

DivergenceReport compute_report(const StatePair& pair, double alpha, const SearchConfig& search,
                                const Tolerances& tol) {
  DivergenceReport r;
  r.tolerances = tol;
  r.td = trace_distance(pair, tol);
  const FidelityBures fb = fidelity_bures(pair, tol);
  r.fidelity = fb.fidelity;
  r.bures_sq = fb.bures_sq;
  const QuantumHellinger qh = quantum_hellinger(pair, tol);
  r.q_half_affinity = qh.q_half_affinity;
  r.qh_sq = qh.qh_sq;
  r.hs_sq = hs_distance_sq(pair);
  const QjsValue j = qjs(pair, tol);
  r.qjs_nats = j.nats;
  r.qjs2_bits = j.bits;
  r.qjs_cross_check_residual = j.cross_check_residual;
  r.qtd = qtd(pair, tol);
  r.qtd_meas = qtd_meas(pair, tol);
  r.measured_qjs2_lower_bound = measured_qjs2_lower_bound(pair, search, tol);
  r.alpha = alpha;
  r.qtd_alpha = qtd_alpha(pair, alpha, tol);
  return r;
}

void check_report_ranges(const DivergenceReport& r, double tol) {
  auto in = [tol](const char* name, double v, double lo, double hi) {
    if (!std::isfinite(v) || v < lo - tol || v > hi + tol) {
      fail(ErrorCode::OutOfRange, std::string(name) + " = " + num(v) + " outside [" + num(lo) + ", " + num(hi) + "]");
    }
  };
  in("td", r.td, 0.0, 1.0);
  in("qtd", r.qtd, 0.0, 1.0);
  in("qtd_meas", r.qtd_meas, 0.0, 1.0);
  in("qjs2_bits", r.qjs2_bits, 0.0, 1.0);
  in("measured_qjs2_lower_bound", r.measured_qjs2_lower_bound, 0.0, 1.0);
  in("fidelity", r.fidelity, 0.0, 1.0);
  in("bures_sq", r.bures_sq, 0.0, 2.0);
  in("hs_sq", r.hs_sq, 0.0, 2.0);
  in("qjs_nats", r.qjs_nats, 0.0, kLn2);
}

std::vector<InequalityCheck> proven_inequalities(const StatePair& pair, const DivergenceReport& r,
                                                 const Tolerances& tol) {
  const double bures = std::sqrt(std::max(r.bures_sq, 0.0));
  std::vector<InequalityCheck> out = {
      {"td_sq<=qtd_meas", r.td * r.td, r.qtd_meas},
      {"qtd_meas<=qtd", r.qtd_meas, r.qtd},
      {"qtd<=td", r.qtd, r.td},
      {"half_qtd_sq<=qjs", 0.5 * r.qtd * r.qtd, r.qjs_nats},
      {"qjs<=qtd", r.qjs_nats, r.qtd},
      {"half_bures_sq<=qtd_meas", 0.5 * r.bures_sq, r.qtd_meas},
      {"qtd_meas<=bures_sq", r.qtd_meas, r.bures_sq},
      {"half_bures_sq<=qtd", 0.5 * r.bures_sq, r.qtd},
      {"qtd<=bures", r.qtd, bures},
      {"half_bures_sq<=td", 0.5 * r.bures_sq, r.td},
      {"td<=bures", r.td, bures},
      {"qjs<=ln2_td", r.qjs_nats, kLn2 * r.td},
      {"h2_bound<=qjs2", binary_entropy_bound(r.td).h2_bound, r.qjs2_bits},
      {"measured_lb<=qjs2", r.measured_qjs2_lower_bound, r.qjs2_bits},
  };
  const double half = r.qtd;
  for (double a : kAlphaProbes) {
    std::ostringstream name;
    name << "qtd_half<=qtd_alpha_" << a;
    out.push_back({name.str(), half, qtd_alpha(pair, a, tol)});
  }
  out.push_back({"q_half<=fidelity", r.q_half_affinity, r.fidelity});
  const ClassicalDivergences c =
      classical_divergences(diagonal_distribution(pair.rho0()), diagonal_distribution(pair.rho1()));
  out.push_back({"classical_sd_sq<=tdc", c.sd * c.sd, c.tdc});
  out.push_back({"classical_tdc<=sd", c.tdc, c.sd});
  out.push_back({"classical_h_sq<=tdc", c.hellinger_sq, c.tdc});
  out.push_back({"classical_tdc<=2h_sq", c.tdc, 2.0 * c.hellinger_sq});
  return out;
}

std::vector<std::string> proven_inequality_names() {
  const StatePair p(maximally_mixed(2), maximally_mixed(2));
  std::vector<std::string> names;
  for (const auto& c : proven_inequalities(p, compute_report(p, 0.5, SearchConfig{0, 0, 0.0, 0}))) {
    names.push_back(c.name);
  }
  return names;
}

}  // namespace qdivlab
