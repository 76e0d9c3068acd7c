#pragma once

#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "testprio/tcp.hpp"

namespace testprio {

// Which tests fail when executed. The real fault set is an input here;
// the harness only replays it deterministically.
struct FaultModel {
  std::set<int> faulty_ids;
};

struct EvaluationReport {
  std::string label;
  int executed = 0;
  double total_time = 0.0;
  int failures_found = 0;
  double time_to_all_failures = 0.0;
};

// Walk a plan against a fault model: a faulty test counts as found on its
// first execution; time_to_all_failures is the cumulative time at the step
// where the last fault surfaces (total time when some are never reached).
inline EvaluationReport simulate(const ExecutionPlan& plan,
                                 const std::vector<TestCase>& dataset,
                                 const FaultModel& faults, std::string label = "") {
  const auto by_id = index_by_id(dataset);
  for (int id : faults.faulty_ids) {
    if (by_id.find(id) == by_id.end()) {
      throw std::invalid_argument("fault id not in dataset: " + std::to_string(id));
    }
  }
  EvaluationReport report;
  report.label = std::move(label);
  std::set<int> found;
  double cumulative = 0.0;
  for (const auto& step : plan.steps) {
    auto it = by_id.find(step.id);
    if (it == by_id.end()) {
      throw std::invalid_argument("plan references unknown test " +
                                  std::to_string(step.id));
    }
    cumulative += it->second->exec_time;
    if (faults.faulty_ids.count(step.id) && found.insert(step.id).second) {
      if (found.size() == faults.faulty_ids.size()) {
        report.time_to_all_failures = cumulative;
      }
    }
  }
  report.executed = static_cast<int>(plan.steps.size());
  report.total_time = cumulative;
  report.failures_found = static_cast<int>(found.size());
  if (found.size() != faults.faulty_ids.size()) {
    report.time_to_all_failures = report.total_time;
  }
  if (faults.faulty_ids.empty()) report.time_to_all_failures = 0.0;
  return report;
}

// Side-by-side table over the three headline metrics plus time to all
// failures. No ranking verdict; the numbers speak for themselves.
inline std::string compare(const std::vector<EvaluationReport>& reports) {
  if (reports.size() < 2) throw std::invalid_argument("compare needs at least 2 reports");
  std::vector<std::string> rows = {"executed tests", "total time (sec)", "failures found",
                                   "time to all failures (sec)"};
  std::size_t name_w = 0;
  for (const auto& r : rows) name_w = std::max(name_w, r.size());

  auto cell = [](const EvaluationReport& r, std::size_t row) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(0);
    switch (row) {
      case 0: os << r.executed; break;
      case 1: os << r.total_time; break;
      case 2: os << r.failures_found; break;
      default: os << r.time_to_all_failures; break;
    }
    return os.str();
  };

  std::vector<std::size_t> col_w(reports.size());
  for (std::size_t c = 0; c < reports.size(); ++c) {
    col_w[c] = reports[c].label.size();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      col_w[c] = std::max(col_w[c], cell(reports[c], r).size());
    }
  }

  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(name_w)) << "metric";
  for (std::size_t c = 0; c < reports.size(); ++c) {
    os << "  " << std::right << std::setw(static_cast<int>(col_w[c])) << reports[c].label;
  }
  os << "\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << std::left << std::setw(static_cast<int>(name_w)) << rows[r];
    for (std::size_t c = 0; c < reports.size(); ++c) {
      os << "  " << std::right << std::setw(static_cast<int>(col_w[c]))
         << cell(reports[c], r);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace testprio
