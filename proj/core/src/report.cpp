#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "qdivlab/errors.hpp"
#include "qdivlab/harness.hpp"

namespace qdivlab {

namespace {

using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json to_json(const Observation& o) {
  return json{{"name", o.name},         {"status", o.status},         {"samples", o.samples},
              {"negative", o.negative}, {"min", opt(o.min_value)},    {"max", opt(o.max_value)},
              {"argmin_seed", o.argmin_seed}, {"argmin_dim", o.argmin_dim}};
}

json to_json(const FixtureOutcome& f) {
  json values = json::object();
  for (const auto& [k, v] : f.values) values[k] = v;
  return json{{"name", f.name}, {"relation", f.relation}, {"passed", f.passed}, {"values", values}};
}

std::string text_observations(const std::vector<Observation>& obs) {
  std::ostringstream os;
  for (const auto& o : obs) {
    os << "  [" << o.status << "] " << o.name << ": samples=" << o.samples << " negative=" << o.negative;
    if (o.min_value) os << " min=" << g17(*o.min_value) << " (seed " << o.argmin_seed << ", dim " << o.argmin_dim << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace

std::string emit_report(const SuiteReport& r, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::ostringstream os;
    os << "inequality,dim,profile,checked,violations,saturated,worst_margin,worst_seed\n";
    for (const auto& c : r.cells) {
      os << c.inequality << ',' << c.dim << ',' << c.profile << ',' << c.checked << ',' << c.violations << ','
         << c.saturated << ',' << (c.worst_margin ? g17(*c.worst_margin) : "") << ',' << c.worst_seed << '\n';
    }
    return os.str();
  }
  if (format == ReportFormat::text) {
    std::ostringstream os;
    os << "inequality suite: seed=" << r.config.seed << " trials=" << r.config.trials_per_dim
       << " slack=" << g17(r.config.slack) << "\n";
    for (const auto& s : r.summary) {
      os << "  " << (s.violations == 0 ? "ok  " : "FAIL") << ' ' << s.inequality << ": checked=" << s.checked
         << " violations=" << s.violations << " saturated=" << s.saturated;
      if (s.worst_margin) os << " worst_margin=" << g17(*s.worst_margin) << " (seed " << s.worst_seed << ")";
      os << "\n";
    }
    for (const auto& f : r.fixtures) os << "  fixture " << (f.passed ? "pass " : "FAIL ") << f.name << "\n";
    for (const auto& e : r.errors) os << "  error " << e << "\n";
    os << text_observations(r.observations);
    return os.str();
  }
  json cfg{{"seed", r.config.seed},
           {"trials_per_dim", r.config.trials_per_dim},
           {"dims", r.config.dims},
           {"slack", r.config.slack},
           {"saturation_tol", r.config.saturation_tol},
           {"conjecture_mode", r.config.conjecture_mode},
           {"search", {{"restarts", r.config.search.restarts},
                       {"refine_steps", r.config.search.refine_steps},
                       {"step", r.config.search.step}}}};
  json profiles = json::array();
  for (RankProfile p : r.config.rank_profiles) profiles.push_back(to_string(p));
  cfg["rank_profiles"] = profiles;

  json summary = json::array();
  for (const auto& s : r.summary) {
    summary.push_back({{"inequality", s.inequality},
                       {"checked", s.checked},
                       {"violations", s.violations},
                       {"saturated", s.saturated},
                       {"worst_margin", opt(s.worst_margin)},
                       {"worst_seed", s.worst_seed},
                       {"worst_dim", s.worst_dim},
                       {"worst_profile", s.worst_profile}});
  }
  json cells = json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"inequality", c.inequality},
                     {"dim", c.dim},
                     {"profile", c.profile},
                     {"checked", c.checked},
                     {"violations", c.violations},
                     {"saturated", c.saturated},
                     {"worst_margin", opt(c.worst_margin)},
                     {"worst_seed", c.worst_seed}});
  }
  json fixtures = json::array();
  for (const auto& f : r.fixtures) fixtures.push_back(to_json(f));
  json observations = json::array();
  for (const auto& o : r.observations) observations.push_back(to_json(o));
  json out{{"schema", "qdivlab.suite"},
           {"schema_version", kReportSchemaVersion},
           {"config", cfg},
           {"summary", summary},
           {"cells", cells},
           {"errors", r.errors},
           {"counterexample_fixtures", fixtures},
           {"observations", observations},
           {"total_violations", r.total_violations()},
           {"proven_ok", r.proven_ok()}};
  return out.dump(2) + "\n";
}

std::string emit_report(const FixtureReport& r, ReportFormat format) {
  if (format == ReportFormat::json) {
    json arr = json::array();
    for (const auto& f : r.outcomes) arr.push_back(to_json(f));
    return json{{"schema", "qdivlab.fixtures"}, {"schema_version", kReportSchemaVersion}, {"fixtures", arr},
                {"all_pass", r.all_pass()}}
               .dump(2) + "\n";
  }
  std::ostringstream os;
  if (format == ReportFormat::csv) {
    os << "fixture,passed,relation\n";
    for (const auto& f : r.outcomes) os << f.name << ',' << (f.passed ? 1 : 0) << ",\"" << f.relation << "\"\n";
    return os.str();
  }
  for (const auto& f : r.outcomes) {
    os << (f.passed ? "pass " : "FAIL ") << f.name << ": " << f.relation << "\n";
    for (const auto& [k, v] : f.values) os << "    " << k << " = " << g17(v) << "\n";
  }
  return os.str();
}

std::string emit_report(const ConjectureReport& r, ReportFormat format) {
  if (format == ReportFormat::json) {
    json arr = json::array();
    for (const auto& o : r.observations) arr.push_back(to_json(o));
    return json{{"schema", "qdivlab.conjectures"}, {"schema_version", kReportSchemaVersion}, {"observations", arr}}
               .dump(2) + "\n";
  }
  if (format == ReportFormat::csv) {
    std::ostringstream os;
    os << "name,status,samples,negative,min,max,argmin_seed,argmin_dim\n";
    for (const auto& o : r.observations) {
      os << o.name << ',' << o.status << ',' << o.samples << ',' << o.negative << ','
         << (o.min_value ? g17(*o.min_value) : "") << ',' << (o.max_value ? g17(*o.max_value) : "") << ','
         << o.argmin_seed << ',' << o.argmin_dim << '\n';
    }
    return os.str();
  }
  return text_observations(r.observations);
}

}  // namespace qdivlab
