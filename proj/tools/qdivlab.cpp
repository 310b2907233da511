#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdivlab/algorithms.hpp"
#include "qdivlab/divergences.hpp"
#include "qdivlab/errors.hpp"
#include "qdivlab/harness.hpp"
#include "qdivlab/polarization.hpp"
#include "qdivlab/reductions.hpp"
#include "qdivlab/state_io.hpp"

namespace {

using nlohmann::json;
using namespace qdivlab;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

// Writes to path, or stdout when path is empty.
void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidConfig, "cannot write " + path);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

StatePair load_pair(const std::string& a, const std::string& b) {
  DensityMatrix rho0 = read_state_file(a);
  return StatePair(std::move(rho0), read_state_file(b));
}

json interval(const Interval& v) { return {{"lo", v.lo}, {"hi", v.hi}}; }

json to_json(const DivergenceReport& r) {
  return {{"td", r.td},
          {"fidelity", r.fidelity},
          {"bures_sq", r.bures_sq},
          {"q_half_affinity", r.q_half_affinity},
          {"qh_sq", r.qh_sq},
          {"hs_sq", r.hs_sq},
          {"qjs_nats", r.qjs_nats},
          {"qjs2_bits", r.qjs2_bits},
          {"qtd", r.qtd},
          {"qtd_meas", r.qtd_meas},
          {"measured_qjs2_lower_bound", r.measured_qjs2_lower_bound},
          {"alpha", r.alpha},
          {"qtd_alpha", r.qtd_alpha},
          {"qjs_cross_check_residual", r.qjs_cross_check_residual}};
}

json to_json(const PairEvaluation& e) {
  json j{{"mode", to_string(e.mode)},
         {"log2_dim", e.log2_dim},
         {"fidelity", interval(e.fidelity)},
         {"bures_sq", interval(e.bures_sq)},
         {"qtd", interval(e.qtd)},
         {"qtd_meas", interval(e.qtd_meas)}};
  if (e.td) j["td"] = *e.td;
  return j;
}

json to_json(const PolarizationSchedule& s) {
  json bounds = json::array();
  for (const auto& b : s.stage_bounds) {
    bounds.push_back({{"stage", b.stage},
                      {"nominal_yes", b.nominal_yes},
                      {"nominal_no", b.nominal_no},
                      {"yes", b.yes},
                      {"no", b.no}});
  }
  return {{"kind", to_string(s.kind)},
          {"alpha", s.alpha},
          {"beta", s.beta},
          {"k", s.k},
          {"lambda", s.lambda},
          {"l", s.l},
          {"m", s.m},
          {"m_rule", s.m_rule},
          {"l_bumps", s.l_bumps},
          {"stage3_nominal_certified", s.stage3_nominal_certified},
          {"stage_bounds", bounds}};
}

int run_compute(const std::string& a, const std::string& b, double alpha, const std::string& out) {
  const StatePair pair = load_pair(a, b);
  const DivergenceReport r = compute_report(pair, alpha);
  json j{{"report", to_json(r)}};
  bool ok = true;
  try {
    check_report_ranges(r);
    j["ranges"] = "ok";
  } catch (const Error& e) {
    j["ranges"] = e.what();
    ok = false;
  }
  json checks = json::array();
  for (const auto& c : proven_inequalities(pair, r)) {
    const bool holds = c.holds(1e-9);
    ok = ok && holds;
    checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", holds}});
  }
  j["inequalities"] = checks;
  j["ok"] = ok;
  emit(j.dump(2), out);
  return ok ? kExitOk : kExitInput;
}

int run_polarize(const std::string& a, const std::string& b, double alpha, double beta, std::size_t k,
                 const std::string& kind, std::size_t cap) {
  const PolarizationKind pk = kind == "qtd" ? PolarizationKind::qtd : PolarizationKind::meas_qtd;
  const PolarizationRun run = polarize(load_pair(a, b), make_schedule(alpha, beta, k, pk), cap);
  json stages = json::array();
  for (const auto& c : run.stages) {
    stages.push_back({{"stage", c.stage},
                      {"mode", to_string(c.mode)},
                      {"log2_dim", c.log2_dim},
                      {"value", interval(c.value)},
                      {"yes_bound", c.yes_bound},
                      {"no_bound", c.no_bound},
                      {"verdict", c.verdict},
                      {"seconds", c.seconds}});
  }
  const json j{{"schedule", to_json(run.schedule)},
               {"input_value", run.input_value},
               {"instance", run.instance},
               {"stages", stages},
               {"result", to_json(run.result)},
               {"all_pass", run.all_pass()}};
  emit(j.dump(2), "");
  return run.all_pass() ? kExitOk : kExitViolation;
}

int run_qjsp_to_qedp(const std::string& a, const std::string& b, double alpha, double beta, const std::string& out) {
  const QjspToQedp r = qjsp_to_qedp(load_pair(a, b), alpha, beta);
  const json j{{"p", r.p},
               {"g_nats", r.instance.g},
               {"qjs2_bits", r.qjs2_bits},
               {"entropy_difference_bits", r.entropy_difference_bits},
               {"identity_residual", r.identity_residual},
               {"output_dim", r.instance.pair.dim()},
               {"rho0_out", json::parse(state_to_json(r.instance.pair.rho0()))},
               {"rho1_out", json::parse(state_to_json(r.instance.pair.rho1()))}};
  emit(j.dump(2), out);
  return r.identity_residual <= 1e-9 ? kExitOk : kExitViolation;
}

int run_params(int n, double epsilon, const std::string& target) {
  HardnessTarget t = HardnessTarget::qjsp;
  if (target == "meas_qtdp") t = HardnessTarget::meas_qtdp;
  else if (target == "qedp") t = HardnessTarget::qedp;
  const HardnessParams h = hardness_param_map(n, epsilon, t);
  json chain = json::array();
  for (const auto& s : h.derivation_chain) {
    chain.push_back(
        {{"step", s.description}, {"lhs", s.lhs}, {"relation", s.relation}, {"rhs", s.rhs}, {"holds", s.holds}});
  }
  json j{{"target", to_string(h.target)},
         {"n", h.n},
         {"epsilon", h.epsilon},
         {"source_regime", h.source_regime},
         {"alpha_threshold", h.alpha_threshold},
         {"beta_threshold", h.beta_threshold},
         {"vacuous", h.vacuous},
         {"chain_holds", h.chain_holds()},
         {"derivation_chain", chain}};
  if (h.g_threshold) j["g_threshold"] = *h.g_threshold;
  emit(j.dump(2), "");
  return kExitOk;
}

int run_decide(const std::string& which, const std::string& a, const std::string& b) {
  const StatePair pair = load_pair(a, b);
  json j;
  if (which == "nqp") {
    const NqpDecision d = nqp_decide(pair);
    j = {{"p", d.p},
         {"p_acc", d.p_acc},
         {"lower_bound_yes", d.lower_bound_yes},
         {"accept", d.accept},
         {"verdict", d.verdict}};
  } else {
    const PpDecision d = pp_hybrid_accept(pair);
    j = {{"n", d.thresholds.n},
         {"acceptance", d.acceptance},
         {"acceptance_mixture", d.acceptance_mixture},
         {"yes_floor", d.thresholds.yes_floor},
         {"no_ceiling", d.thresholds.no_ceiling},
         {"gap_floor", d.thresholds.gap_floor},
         {"verdict", d.acceptance >= d.thresholds.yes_floor    ? "close"
                     : d.acceptance <= d.thresholds.no_ceiling ? "far"
                                                               : "outside-promise"}};
  }
  emit(j.dump(2), "");
  return kExitOk;
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      dims.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidConfig, "bad dimension '" + item + "'");
    }
  }
  return dims;
}

std::vector<RankProfile> parse_profiles(const std::string& text) {
  std::vector<RankProfile> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rank_profile(item));
  return out;
}

int run_verify(SuiteConfig config, const std::string& json_out, const std::string& csv_out) {
  validate(config);
  const SuiteReport r = run_inequality_suite(config);
  if (!csv_out.empty()) emit(emit_report(r, ReportFormat::csv), csv_out);
  if (!json_out.empty() || csv_out.empty()) emit(emit_report(r, ReportFormat::json), json_out);
  std::fprintf(stderr, "%zu violations, %zu evaluation errors\n", r.total_violations(), r.errors.size());
  return r.proven_ok() ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum divergence toolkit"};
  app.require_subcommand(1);

  std::string a, b, out, csv_out, kind = "meas", target = "qjsp";
  double alpha = 0.5, beta = 0.0, epsilon = 0.1;
  std::size_t k = 1, cap = 512;
  int n = 1;

  auto* compute = app.add_subcommand("compute", "All divergences of a state pair with inequality verdicts");
  compute->add_option("--a", a, "State file for rho0")->required();
  compute->add_option("--b", b, "State file for rho1")->required();
  compute->add_option("--alpha", alpha, "Order of the QTD_alpha member")->capture_default_str();
  compute->add_option("--json", out, "Write JSON here instead of stdout");

  auto* pol = app.add_subcommand("polarize", "Run the three-stage polarization with certificates");
  pol->add_option("--a", a)->required();
  pol->add_option("--b", b)->required();
  pol->add_option("--alpha", alpha)->required();
  pol->add_option("--beta", beta)->required();
  pol->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  pol->add_option("--kind", kind)->check(CLI::IsMember({"meas", "qtd"}))->capture_default_str();
  pol->add_option("--cap", cap, "Largest dimension to materialize")->capture_default_str();

  auto* reduce = app.add_subcommand("reduce", "Reductions between promise problems");
  reduce->require_subcommand(1);
  auto* q2e = reduce->add_subcommand("qjsp-to-qedp", "Entropy-difference instance from a QJS instance");
  q2e->add_option("--a", a)->required();
  q2e->add_option("--b", b)->required();
  q2e->add_option("--alpha", alpha)->required();
  q2e->add_option("--beta", beta)->required();
  q2e->add_option("--json", out);
  auto* params = reduce->add_subcommand("params", "Hardness thresholds and their derivation chain");
  params->add_option("--n", n)->required();
  params->add_option("--epsilon", epsilon)->required();
  params->add_option("--target", target)->check(CLI::IsMember({"qjsp", "meas_qtdp", "qedp"}))->capture_default_str();

  auto* decide = app.add_subcommand("decide", "Acceptance probabilities of the decision procedures");
  decide->require_subcommand(1);
  auto* nqp = decide->add_subcommand("nqp", "One-sided SWAP test with exact amplification");
  auto* pp = decide->add_subcommand("pp", "Hybrid SWAP-test acceptance");
  for (auto* sub : {nqp, pp}) {
    sub->add_option("--a", a)->required();
    sub->add_option("--b", b)->required();
  }

  SuiteConfig suite;
  std::string dims = "2,3,4,8", profiles = "full,deficient,pure";
  auto* verify = app.add_subcommand("verify", "Seeded inequality suite");
  verify->add_option("--seed", suite.seed)->capture_default_str();
  verify->add_option("--trials", suite.trials_per_dim, "Trials per (dim, profile)")->capture_default_str();
  verify->add_option("--dims", dims)->capture_default_str();
  verify->add_option("--profiles", profiles)->capture_default_str();
  verify->add_option("--slack", suite.slack)->capture_default_str();
  verify->add_option("--threads", suite.threads, "Worker threads; results do not depend on it")->capture_default_str();
  auto* json_opt = verify->add_option("--json", out, "Write the JSON report here");
  verify->add_option("--csv", csv_out, "Write the CSV report here")->excludes(json_opt);

  auto* fixtures = app.add_subcommand("fixtures", "Reproduce the counterexample fixtures");

  SuiteConfig conj;
  conj.trials_per_dim = 1000;
  conj.conjecture_mode = true;
  std::string conj_dims = "2,3";
  auto* conjectures = app.add_subcommand("conjectures", "Search for violations of open conjectures (report only)");
  conjectures->add_option("--trials", conj.trials_per_dim)->capture_default_str();
  conjectures->add_option("--seed", conj.seed)->capture_default_str();
  conjectures->add_option("--dims", conj_dims)->capture_default_str();
  conjectures->add_option("--threads", conj.threads)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*compute) return run_compute(a, b, alpha, out);
    if (*pol) return run_polarize(a, b, alpha, beta, k, kind, cap);
    if (*q2e) return run_qjsp_to_qedp(a, b, alpha, beta, out);
    if (*params) return run_params(n, epsilon, target);
    if (*nqp) return run_decide("nqp", a, b);
    if (*pp) return run_decide("pp", a, b);
    if (*verify) {
      suite.dims = parse_dims(dims);
      suite.rank_profiles = parse_profiles(profiles);
      return run_verify(suite, out, csv_out);
    }
    if (*fixtures) {
      const FixtureReport f = reproduce_counterexamples();
      emit(emit_report(f, ReportFormat::json), "");
      return f.all_pass() ? kExitOk : kExitViolation;
    }
    if (*conjectures) {
      conj.dims = parse_dims(conj_dims);
      validate(conj);
      emit(emit_report(conjecture_search(conj), ReportFormat::json), "");
      return kExitOk;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}
