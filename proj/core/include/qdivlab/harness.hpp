#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdivlab/divergences.hpp"
#include "qdivlab/states.hpp"

namespace qdivlab {

enum class RankProfile { full, deficient, pure };
std::string to_string(RankProfile p);
RankProfile parse_rank_profile(const std::string& s);

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::size_t trials_per_dim = 1000;
  std::vector<std::size_t> dims{2, 3, 4, 8};
  std::vector<RankProfile> rank_profiles{RankProfile::full, RankProfile::deficient, RankProfile::pure};
  double slack = 1e-9;
  bool conjecture_mode = false;
  // Worker threads; never affects results.
  std::size_t threads = 1;
  SearchConfig search{};
  double saturation_tol = 1e-12;
};

// Throws InvalidConfig.
void validate(const SuiteConfig& config);

// The pair drawn for one trial; a pure function of its arguments.
StatePair trial_pair(std::uint64_t trial_seed, std::size_t dim, RankProfile profile, std::size_t trial);
std::uint64_t trial_seed(std::uint64_t seed, std::size_t dim, RankProfile profile, std::size_t trial);

struct InequalityCell {
  std::string inequality;
  std::size_t dim = 0;
  std::string profile;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t saturated = 0;
  std::optional<double> worst_margin;
  std::uint64_t worst_seed = 0;
};

struct InequalitySummary {
  std::string inequality;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t saturated = 0;
  std::optional<double> worst_margin;
  std::uint64_t worst_seed = 0;
  std::size_t worst_dim = 0;
  std::string worst_profile;
};

struct FixtureOutcome {
  std::string name;
  std::string relation;
  bool passed = false;
  std::map<std::string, double> values;
};

struct Observation {
  std::string name;
  std::string status;  // "conjecture" or "witness"; never "proven"
  std::size_t samples = 0;
  std::size_t negative = 0;
  std::optional<double> min_value;
  std::optional<double> max_value;
  std::uint64_t argmin_seed = 0;
  std::size_t argmin_dim = 0;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<InequalityCell> cells;
  std::vector<InequalitySummary> summary;
  std::vector<std::string> errors;  // evaluation failures, one line each
  std::vector<FixtureOutcome> fixtures;
  std::vector<Observation> observations;

  std::size_t total_violations() const;
  bool proven_ok() const;
};

SuiteReport run_inequality_suite(const SuiteConfig& config);
// Same aggregation over caller-supplied pairs, reported under profile "fixture".
SuiteReport run_inequality_suite(const std::vector<StatePair>& pairs, const SuiteConfig& config);

struct FixtureReport {
  std::vector<FixtureOutcome> outcomes;
  bool all_pass() const;
  // Throws FixtureFailure naming the first failing relation and its values.
  void require_all() const;
};
FixtureReport reproduce_counterexamples();

struct ConjectureReport {
  std::vector<Observation> observations;
};
ConjectureReport conjecture_search(const SuiteConfig& config);

enum class ReportFormat { json, csv, text };
std::string emit_report(const SuiteReport& report, ReportFormat format);
std::string emit_report(const FixtureReport& report, ReportFormat format);
std::string emit_report(const ConjectureReport& report, ReportFormat format);

inline constexpr int kReportSchemaVersion = 1;

}  // namespace qdivlab
