#include "qdivlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "qdivlab/errors.hpp"
#include "qdivlab/polarization.hpp"

namespace qdivlab {

namespace {


std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::size_t profile_index(RankProfile p) { return static_cast<std::size_t>(p); }

Observation observation(std::string name, std::string status) {
  Observation o;
  o.name = std::move(name);
  o.status = std::move(status);
  return o;
}

InequalityCell cell(const std::string& name, std::size_t dim, std::string profile) {
  InequalityCell c;
  c.inequality = name;
  c.dim = dim;
  c.profile = std::move(profile);
  return c;
}

struct TrialResult {
  std::vector<double> margins;
  std::string error;
};

// Runs fn(i) for i in [0, n) on `threads` workers; results land by index.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

TrialResult evaluate_trial(const StatePair& pair, const SuiteConfig& cfg, std::uint64_t seed) {
  TrialResult r;
  try {
    SearchConfig search = cfg.search;
    search.seed = seed;
    const DivergenceReport rep = compute_report(pair, 0.5, search);
    for (const auto& c : proven_inequalities(pair, rep)) r.margins.push_back(c.margin());
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

void accumulate(InequalityCell& cell, double margin, std::uint64_t seed, const SuiteConfig& cfg) {
  ++cell.checked;
  if (-margin > cfg.slack) ++cell.violations;
  if (std::abs(margin) <= cfg.saturation_tol) ++cell.saturated;
  if (!cell.worst_margin || margin < *cell.worst_margin) {
    cell.worst_margin = margin;
    cell.worst_seed = seed;
  }
}

void summarize(SuiteReport& report, const std::vector<std::string>& names) {
  for (const auto& name : names) {
    InequalitySummary s;
    s.inequality = name;
    for (const auto& c : report.cells) {
      if (c.inequality != name) continue;
      s.checked += c.checked;
      s.violations += c.violations;
      s.saturated += c.saturated;
      if (c.worst_margin && (!s.worst_margin || *c.worst_margin < *s.worst_margin)) {
        s.worst_margin = c.worst_margin;
        s.worst_seed = c.worst_seed;
        s.worst_dim = c.dim;
        s.worst_profile = c.profile;
      }
    }
    report.summary.push_back(s);
  }
}

void observe(Observation& o, double v, std::uint64_t seed, std::size_t dim) {
  ++o.samples;
  if (v < 0.0) ++o.negative;
  if (!o.min_value || v < *o.min_value) {
    o.min_value = v;
    o.argmin_seed = seed;
    o.argmin_dim = dim;
  }
  if (!o.max_value || v > *o.max_value) o.max_value = v;
}

// Deviation of two-fold XOR values from the squared input, for td (exact by
// trace-norm multiplicativity) and qtd_meas (positive for non-commuting pairs).
std::vector<Observation> xor_witnesses(const SuiteConfig& cfg) {
  Observation td_obs = observation("xor_td_minus_td_power_l2", "witness");
  Observation meas_obs = observation("xor_qtd_meas_minus_product_l2", "witness");
  const std::size_t n = std::min<std::size_t>(cfg.trials_per_dim, 50);
  for (std::size_t t = 0; t < n; ++t) {
    const std::uint64_t s = derive_seed(cfg.seed, {0x786f72ULL, t});
    const StatePair p(random_mixed(2, 2, derive_seed(s, {0})), random_mixed(2, 2, derive_seed(s, {1})));
    const StatePair x = xor_reduce(p, 2);
    const double td = trace_distance(p), meas = qtd_meas(p);
    observe(td_obs, trace_distance(x) - td * td, s, 2);
    observe(meas_obs, qtd_meas(x) - meas * meas, s, 2);
  }
  return {td_obs, meas_obs};
}

}  // namespace

std::string to_string(RankProfile p) {
  switch (p) {
    case RankProfile::full: return "full";
    case RankProfile::deficient: return "deficient";
    case RankProfile::pure: return "pure";
  }
  return "unknown";
}

RankProfile parse_rank_profile(const std::string& s) {
  if (s == "full") return RankProfile::full;
  if (s == "deficient") return RankProfile::deficient;
  if (s == "pure") return RankProfile::pure;
  fail(ErrorCode::InvalidConfig, "unknown rank profile '" + s + "'");
}

void validate(const SuiteConfig& c) {
  if (c.trials_per_dim < 1) fail(ErrorCode::InvalidConfig, "trials must be at least 1");
  if (!(c.slack >= 0.0) || !std::isfinite(c.slack)) fail(ErrorCode::InvalidConfig, "slack must be finite and >= 0");
  for (std::size_t d : c.dims) {
    if (d < 2 || d > 64) fail(ErrorCode::InvalidConfig, "dimension " + std::to_string(d) + " outside [2, 64]");
  }
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t dim, RankProfile profile, std::size_t trial) {
  return derive_seed(seed, {dim, profile_index(profile), trial});
}

StatePair trial_pair(std::uint64_t s, std::size_t dim, RankProfile profile, std::size_t trial) {
  const bool bloch = dim == 2 && trial % 2 == 1;
  if (bloch) {
    const bool sphere = profile != RankProfile::full;
    return StatePair(from_bloch(random_bloch(derive_seed(s, {0}), sphere)),
                     from_bloch(random_bloch(derive_seed(s, {1}), sphere)));
  }
  std::size_t r0 = dim, r1 = dim;
  if (profile == RankProfile::pure) {
    r0 = r1 = 1;
  } else if (profile == RankProfile::deficient) {
    r0 = 1 + derive_seed(s, {2}) % (dim - 1);
    r1 = 1 + derive_seed(s, {3}) % (dim - 1);
  }
  return StatePair(random_mixed(dim, r0, derive_seed(s, {0})), random_mixed(dim, r1, derive_seed(s, {1})));
}

std::size_t SuiteReport::total_violations() const {
  std::size_t v = 0;
  for (const auto& s : summary) v += s.violations;
  return v;
}

bool SuiteReport::proven_ok() const {
  const bool fixtures_ok =
      std::all_of(fixtures.begin(), fixtures.end(), [](const FixtureOutcome& f) { return f.passed; });
  return total_violations() == 0 && errors.empty() && fixtures_ok;
}

SuiteReport run_inequality_suite(const SuiteConfig& config) {
  validate(config);
  const auto names = proven_inequality_names();
  struct Job {
    std::size_t dim;
    RankProfile profile;
    std::size_t trial;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t d : config.dims) {
    for (RankProfile p : config.rank_profiles) {
      for (std::size_t t = 0; t < config.trials_per_dim; ++t) jobs.push_back({d, p, t, trial_seed(config.seed, d, p, t)});
    }
  }
  std::vector<TrialResult> results(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    try {
      results[i] = evaluate_trial(trial_pair(j.seed, j.dim, j.profile, j.trial), config, j.seed);
    } catch (const std::exception& e) {
      results[i].error = e.what();
    }
  });

  SuiteReport report;
  report.config = config;
  std::size_t i = 0;
  for (std::size_t d : config.dims) {
    for (RankProfile p : config.rank_profiles) {
      std::vector<InequalityCell> cells;
      for (const auto& n : names) cells.push_back(cell(n, d, to_string(p)));
      for (std::size_t t = 0; t < config.trials_per_dim; ++t, ++i) {
        const TrialResult& r = results[i];
        if (!r.error.empty()) {
          report.errors.push_back("dim=" + std::to_string(d) + " profile=" + to_string(p) +
                                  " seed=" + std::to_string(jobs[i].seed) + ": " + r.error);
          continue;
        }
        for (std::size_t k = 0; k < names.size(); ++k) accumulate(cells[k], r.margins[k], jobs[i].seed, config);
      }
      report.cells.insert(report.cells.end(), cells.begin(), cells.end());
    }
  }
  summarize(report, names);
  report.fixtures = reproduce_counterexamples().outcomes;
  if (!config.dims.empty()) {
    for (Observation& o : xor_witnesses(config)) report.observations.push_back(std::move(o));
  }
  if (config.conjecture_mode) {
    for (auto& o : conjecture_search(config).observations) report.observations.push_back(std::move(o));
  }
  return report;
}

SuiteReport run_inequality_suite(const std::vector<StatePair>& pairs, const SuiteConfig& config) {
  const auto names = proven_inequality_names();
  std::vector<TrialResult> results(pairs.size());
  parallel_for(pairs.size(), config.threads,
               [&](std::size_t i) { results[i] = evaluate_trial(pairs[i], config, derive_seed(config.seed, {i})); });
  SuiteReport report;
  report.config = config;
  std::map<std::size_t, std::vector<InequalityCell>> by_dim;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::size_t d = pairs[i].dim();
    auto& cells = by_dim[d];
    if (cells.empty()) {
      for (const auto& n : names) cells.push_back(cell(n, d, "fixture"));
    }
    if (!results[i].error.empty()) {
      report.errors.push_back("fixture " + std::to_string(i) + ": " + results[i].error);
      continue;
    }
    for (std::size_t k = 0; k < names.size(); ++k) accumulate(cells[k], results[i].margins[k], i, config);
  }
  for (auto& [d, cells] : by_dim) report.cells.insert(report.cells.end(), cells.begin(), cells.end());
  summarize(report, names);
  return report;
}

bool FixtureReport::all_pass() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const FixtureOutcome& f) { return f.passed; });
}

void FixtureReport::require_all() const {
  for (const auto& f : outcomes) {
    if (f.passed) continue;
    std::string msg = f.name + ": " + f.relation + " violated (";
    bool first = true;
    for (const auto& [k, v] : f.values) {
      msg += (first ? "" : ", ") + k + "=" + num(v);
      first = false;
    }
    fail(ErrorCode::FixtureFailure, msg + ")");
  }
}

FixtureReport reproduce_counterexamples() {
  FixtureReport rep;
  const StatePair remark(from_bloch({6.0 / 7, 3.0 / 7, 2.0 / 7}), from_bloch({-3.0 / 7, -2.0 / 7, 6.0 / 7}));
  const double td = trace_distance(remark);
  const double q_half = qtd_alpha(remark, 0.5);
  const double q_75 = qtd_alpha(remark, 0.75);
  const EqualityConditionReport eq = qtd_equality_conditions(remark);
  rep.outcomes.push_back({"remark_qtd_alpha",
                          "|qtd_alpha(1/2) - td| <= 1e-9 and qtd_alpha(0.75) > td and equality conditions hold",
                          std::abs(q_half - td) <= 1e-9 && q_75 > td && eq.overall,
                          {{"td", td}, {"qtd_alpha_0.5", q_half}, {"qtd_alpha_0.75", q_75},
                           {"equality_conditions", eq.overall ? 1.0 : 0.0}}});

  const double meas = qtd_meas(remark);
  const double b2 = fidelity_bures(remark).bures_sq;
  const double b = std::sqrt(b2);
  rep.outcomes.push_back({"remark_meas_chain", "qtd_meas <= B^2 < qtd_alpha(1/2) = td < B",
                          meas <= b2 + 1e-12 && b2 < q_half && std::abs(q_half - td) <= 1e-9 && td < b,
                          {{"qtd_meas", meas}, {"bures_sq", b2}, {"qtd_alpha_0.5", q_half}, {"td", td}, {"bures", b}}});

  const StatePair p(from_bloch({1.0 / 7, 1.0 / 3, 1.0 / 4}), from_bloch({-1.0 / 7, -1.0 / 3, -1.0 / 4}));
  const StatePair q(from_bloch({-1.0 / 7, -1.0 / 5, -1.0 / 6}), from_bloch({1.0 / 7, 1.0 / 5, -1.0 / 6}));
  const double td_p = trace_distance(p), td_q = trace_distance(q);
  const double m_p = qtd_meas(p), m_q = qtd_meas(q);
  rep.outcomes.push_back({"non_polarizing_pairs", "td > td' > td^2 and qtd_meas > qtd_meas'",
                          td_p > td_q && td_q > td_p * td_p && m_p > m_q,
                          {{"td", td_p}, {"td_prime", td_q}, {"td_sq", td_p * td_p}, {"qtd_meas", m_p},
                           {"qtd_meas_prime", m_q}}});
  return rep;
}

ConjectureReport conjecture_search(const SuiteConfig& config) {
  ConjectureReport rep;
  Observation gap = observation("qjs2_minus_qtd_sq", "conjecture");
  Observation tri = observation("sqrt_qtd_triangle_slack", "conjecture");
  Observation boundary = observation("orthogonal_pure_qjs2_minus_qtd_sq", "conjecture");
  const StatePair orth(basis_state(2, 0), basis_state(2, 1));
  observe(boundary, qjs(orth).bits - std::pow(qtd(orth), 2), 0, 2);

  for (std::size_t d : config.dims) {
    for (RankProfile p : config.rank_profiles) {
      std::vector<double> gaps(config.trials_per_dim), tris(config.trials_per_dim);
      std::vector<std::uint64_t> seeds(config.trials_per_dim);
      parallel_for(config.trials_per_dim, config.threads, [&](std::size_t t) {
        const std::uint64_t s = derive_seed(trial_seed(config.seed, d, p, t), {0x636f6e6aULL});
        seeds[t] = s;
        const StatePair ab = trial_pair(s, d, p, t);
        const StatePair bc = StatePair(ab.rho1(), trial_pair(derive_seed(s, {7}), d, p, t).rho0());
        const StatePair ac(ab.rho0(), bc.rho1());
        gaps[t] = qjs(ab).bits - std::pow(qtd(ab), 2);
        const double x = std::sqrt(std::max(qtd(ab), 0.0));
        const double y = std::sqrt(std::max(qtd(bc), 0.0));
        const double z = std::sqrt(std::max(qtd(ac), 0.0));
        tris[t] = std::min({x + y - z, y + z - x, x + z - y});
      });
      for (std::size_t t = 0; t < config.trials_per_dim; ++t) {
        observe(gap, gaps[t], seeds[t], d);
        observe(tri, tris[t], seeds[t], d);
      }
    }
  }
  rep.observations = {gap, tri, boundary};
  return rep;
}

}  // namespace qdivlab
