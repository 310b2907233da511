#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include "json.hpp"

#include "qdivlab/divergences.hpp"
#include "qdivlab/errors.hpp"
#include "qdivlab/harness.hpp"

namespace qdivlab {
namespace {

SuiteConfig small_config() {
  SuiteConfig c;
  c.seed = 7;
  c.trials_per_dim = 12;
  c.dims = {2, 3};
  return c;
}

TEST(Config, Validation) {
  SuiteConfig c = small_config();
  EXPECT_NO_THROW(validate(c));
  c.slack = 0.0;
  EXPECT_NO_THROW(validate(c));
  auto code = [](const SuiteConfig& bad) {
    try {
      validate(bad);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NotPSD;
  };
  SuiteConfig bad = small_config();
  bad.trials_per_dim = 0;
  EXPECT_EQ(code(bad), ErrorCode::InvalidConfig);
  bad = small_config();
  bad.slack = -1e-9;
  EXPECT_EQ(code(bad), ErrorCode::InvalidConfig);
  bad = small_config();
  bad.dims = {1};
  EXPECT_EQ(code(bad), ErrorCode::InvalidConfig);
}

TEST(Config, RankProfileNames) {
  for (RankProfile p : {RankProfile::full, RankProfile::deficient, RankProfile::pure}) {
    EXPECT_EQ(parse_rank_profile(to_string(p)), p);
  }
  EXPECT_THROW(parse_rank_profile("bogus"), Error);
}

TEST(TrialPair, DeterministicAndProfiled) {
  for (std::size_t d : {2u, 3u, 4u, 8u}) {
    for (std::size_t t = 0; t < 20; ++t) {
      const std::uint64_t s = trial_seed(1, d, RankProfile::full, t);
      EXPECT_EQ(s, trial_seed(1, d, RankProfile::full, t));
      EXPECT_NE(s, trial_seed(1, d, RankProfile::pure, t));
      const StatePair a = trial_pair(s, d, RankProfile::full, t), b = trial_pair(s, d, RankProfile::full, t);
      EXPECT_EQ((a.rho0().matrix() - b.rho0().matrix()).cwiseAbs().maxCoeff(), 0.0);
      EXPECT_EQ(spectrum(trial_pair(s, d, RankProfile::pure, t).rho0().matrix()).rank(), 1u);
      const std::size_t r = spectrum(trial_pair(s, d, RankProfile::deficient, t).rho1().matrix()).rank();
      EXPECT_GE(r, 1u);
      EXPECT_LT(r, d);
      EXPECT_EQ(spectrum(a.rho0().matrix()).rank(), d);
    }
  }
}

TEST(Suite, SmallConfigHasNoViolations) {
  const SuiteReport r = run_inequality_suite(small_config());
  EXPECT_TRUE(r.errors.empty()) << r.errors.front();
  EXPECT_EQ(r.total_violations(), 0u);
  EXPECT_TRUE(r.proven_ok());
  const auto names = proven_inequality_names();
  EXPECT_EQ(r.cells.size(), names.size() * 2 * 3);
  EXPECT_EQ(r.summary.size(), names.size());
  for (const auto& c : r.cells) EXPECT_EQ(c.checked, 12u);
  for (const auto& o : r.observations) EXPECT_NE(o.status, "proven");
}

TEST(Suite, ThreadCountDoesNotChangeReport) {
  SuiteConfig c = small_config();
  const std::string one = emit_report(run_inequality_suite(c), ReportFormat::json);
  c.threads = 3;
  const std::string three = emit_report(run_inequality_suite(c), ReportFormat::json);
  EXPECT_EQ(one, three);
  EXPECT_EQ(emit_report(run_inequality_suite(c), ReportFormat::csv),
            emit_report(run_inequality_suite(small_config()), ReportFormat::csv));
}

TEST(Suite, SeedChangesReport) {
  SuiteConfig c = small_config();
  const std::string a = emit_report(run_inequality_suite(c), ReportFormat::json);
  c.seed = 8;
  EXPECT_NE(a, emit_report(run_inequality_suite(c), ReportFormat::json));
}

TEST(Suite, IdenticalStatesFixture) {
  const DensityMatrix rho = random_mixed(3, 2, 3);
  SuiteConfig c = small_config();
  c.trials_per_dim = 1;
  const SuiteReport r = run_inequality_suite({StatePair(rho, rho)}, c);
  EXPECT_EQ(r.total_violations(), 0u);
  for (const auto& cell : r.cells) {
    EXPECT_EQ(cell.profile, "fixture");
    EXPECT_EQ(cell.checked, 1u);
  }
}

TEST(Suite, ZeroSlackFlagsSaturation) {
  SuiteConfig c = small_config();
  c.slack = 0.0;
  const SuiteReport r =
      run_inequality_suite({StatePair(basis_state(2, 0), basis_state(2, 1)), StatePair(basis_state(3, 0), basis_state(3, 2))}, c);
  auto saturated = [&](const std::string& name) {
    for (const auto& s : r.summary) {
      if (s.inequality == name) return s.saturated;
    }
    return std::size_t{0};
  };
  EXPECT_EQ(saturated("qtd<=td"), 2u);
  EXPECT_EQ(saturated("qtd_meas<=qtd"), 2u);
  EXPECT_EQ(saturated("qjs<=qtd") + saturated("qjs<=ln2_td"), 2u);
}

TEST(Fixtures, AllPass) {
  const FixtureReport f = reproduce_counterexamples();
  ASSERT_EQ(f.outcomes.size(), 3u);
  EXPECT_TRUE(f.all_pass());
  EXPECT_NO_THROW(f.require_all());
  const auto& fn3 = f.outcomes[2];
  EXPECT_NEAR(fn3.values.at("td"), 0.4404761904761904, 1e-12);
  EXPECT_NEAR(fn3.values.at("td_prime"), 0.24578072191550362, 1e-12);
  EXPECT_NEAR(fn3.values.at("td_sq"), 0.19401927437641717, 1e-12);
}

TEST(Fixtures, RequireAllNamesFailingRelation) {
  FixtureReport f = reproduce_counterexamples();
  f.outcomes[1].passed = false;
  try {
    f.require_all();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FixtureFailure);
    EXPECT_NE(std::string(e.what()).find("remark_meas_chain"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find(f.outcomes[1].relation), std::string::npos);
  }
}

TEST(Conjectures, ReportOnly) {
  SuiteConfig c = small_config();
  c.conjecture_mode = true;
  const ConjectureReport r = conjecture_search(c);
  ASSERT_FALSE(r.observations.empty());
  std::set<std::string> names;
  for (const auto& o : r.observations) {
    names.insert(o.name);
    EXPECT_EQ(o.status, "conjecture");
    EXPECT_GT(o.samples, 0u);
  }
  EXPECT_TRUE(names.count("qjs2_minus_qtd_sq"));
  EXPECT_TRUE(names.count("sqrt_qtd_triangle_slack"));
  for (const auto& o : r.observations) {
    if (o.name == "orthogonal_pure_qjs2_minus_qtd_sq") EXPECT_NEAR(*o.min_value, 0.0, 1e-12);
  }
}

TEST(Report, EmptySuiteIsValidJson) {
  SuiteReport empty;
  const auto j = nlohmann::json::parse(emit_report(empty, ReportFormat::json));
  EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
  EXPECT_TRUE(j.at("cells").empty());
}

TEST(Report, JsonRoundTrip) {
  const std::string text = emit_report(run_inequality_suite(small_config()), ReportFormat::json);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j.dump(2), text.substr(0, text.find_last_not_of('\n') + 1));
  EXPECT_EQ(j.at("schema"), "qdivlab.suite");
  EXPECT_FALSE(j.at("config").contains("threads"));
}

TEST(Report, CsvRowCount) {
  const SuiteConfig c = small_config();
  const std::string csv = emit_report(run_inequality_suite(c), ReportFormat::csv);
  const auto rows = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  EXPECT_EQ(rows, 1 + proven_inequality_names().size() * c.dims.size() * c.rank_profiles.size());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "inequality,dim,profile,checked,violations,saturated,worst_margin,worst_seed");
}

TEST(Report, TextAndOtherReports) {
  EXPECT_FALSE(emit_report(run_inequality_suite(small_config()), ReportFormat::text).empty());
  EXPECT_NO_THROW(nlohmann::json::parse(emit_report(reproduce_counterexamples(), ReportFormat::json)));
  SuiteConfig c = small_config();
  c.conjecture_mode = true;
  EXPECT_NO_THROW(nlohmann::json::parse(emit_report(conjecture_search(c), ReportFormat::json)));
}

}  // namespace
}  // namespace qdivlab
