#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "testprio/elicitation.hpp"
#include "testprio/evaluation.hpp"
#include "testprio/inference.hpp"
#include "testprio/tcp.hpp"
#include "testprio/variable.hpp"

namespace testprio::io {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

inline ordered_json parse(const std::string& text, const std::string& context) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(context + ": " + e.what());
  }
}

inline void reject_unknown(const ordered_json& obj,
                           const std::vector<std::string>& allowed,
                           const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const auto& k : allowed) {
      if (k == key) {
        ok = true;
        break;
      }
    }
    if (!ok) throw std::runtime_error("unknown field '" + key + "' in " + where);
  }
}

// Minimal RFC 4180 row splitter: quoted cells, doubled quotes, trimming.
inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += ch;
    }
  }
  cells.push_back(cell);
  for (auto& c : cells) {
    const auto b = c.find_first_not_of(" \t\r");
    const auto e = c.find_last_not_of(" \t\r");
    c = (b == std::string::npos) ? "" : c.substr(b, e - b + 1);
  }
  return cells;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  const std::string text = slurp(path);
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

inline double parse_double(const std::string& cell, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(where + ": malformed number '" + cell + "'");
  }
}

inline int parse_int(const std::string& cell, const std::string& where) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(where + ": malformed integer '" + cell + "'");
  }
}

inline bool parse_bool(std::string cell, const std::string& where) {
  for (auto& ch : cell) ch = static_cast<char>(std::tolower(ch));
  if (cell == "true") return true;
  if (cell == "false") return false;
  throw std::runtime_error(where + ": malformed boolean '" + cell + "'");
}

// "1 / 2, 3" -> {{1,2},{3}}: "/" separates alternatives inside a group,
// "," separates groups.
inline std::vector<std::vector<int>> parse_prerequisites(const std::string& cell,
                                                         const std::string& where) {
  std::vector<std::vector<int>> groups;
  if (cell.empty()) return groups;
  std::istringstream groups_in(cell);
  std::string group_text;
  while (std::getline(groups_in, group_text, ',')) {
    std::vector<int> group;
    std::istringstream members_in(group_text);
    std::string member_text;
    while (std::getline(members_in, member_text, '/')) {
      const auto b = member_text.find_first_not_of(" \t");
      const auto e = member_text.find_last_not_of(" \t");
      if (b == std::string::npos) {
        throw std::runtime_error(where + ": empty prerequisite entry");
      }
      group.push_back(parse_int(member_text.substr(b, e - b + 1), where));
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Linguistic variables
// ---------------------------------------------------------------------------

inline ordered_json variable_to_json(const LinguisticVariable& v) {
  ordered_json terms = ordered_json::array();
  for (const auto& t : v.terms()) {
    terms.push_back({{"label", t.label},
                     {"shape", t.mf.shape() == Shape::Triangular ? "triangular"
                                                                 : "trapezoidal"},
                     {"params", t.mf.params()}});
  }
  return ordered_json{{"name", v.name()},
                      {"unit", v.unit()},
                      {"universe", {v.universe().lo, v.universe().hi}},
                      {"terms", terms}};
}

inline LinguisticVariable variable_from_json(const ordered_json& j) {
  detail::reject_unknown(j, {"name", "unit", "universe", "terms"}, "variable document");
  const auto name = j.at("name").get<std::string>();
  const auto unit = j.at("unit").get<std::string>();
  const auto uni = j.at("universe");
  if (!uni.is_array() || uni.size() != 2) {
    throw std::runtime_error("variable '" + name + "': universe must be [lo, hi]");
  }
  std::vector<FuzzyTerm> terms;
  for (const auto& tj : j.at("terms")) {
    detail::reject_unknown(tj, {"label", "shape", "params"},
                           "term of variable '" + name + "'");
    const auto label = tj.at("label").get<std::string>();
    const auto shape = tj.at("shape").get<std::string>();
    const auto params = tj.at("params").get<std::vector<double>>();
    if (shape == "triangular") {
      if (params.size() != 3) {
        throw std::runtime_error("term '" + label + "': triangular needs 3 params");
      }
      terms.push_back({label, MembershipFunction::triangular(params[0], params[1],
                                                             params[2])});
    } else if (shape == "trapezoidal") {
      if (params.size() != 4) {
        throw std::runtime_error("term '" + label + "': trapezoidal needs 4 params");
      }
      terms.push_back({label, MembershipFunction::trapezoidal(params[0], params[1],
                                                              params[2], params[3])});
    } else {
      throw std::runtime_error("term '" + label + "': unknown shape '" + shape + "'");
    }
  }
  return LinguisticVariable(name, unit, {uni[0].get<double>(), uni[1].get<double>()},
                            std::move(terms));
}

inline std::string variable_to_string(const LinguisticVariable& v) {
  return variable_to_json(v).dump(2) + "\n";
}

inline LinguisticVariable load_variable(const std::string& path) {
  return variable_from_json(detail::parse(detail::slurp(path), path));
}

inline void save_variable(const LinguisticVariable& v, const std::string& path) {
  detail::spit(path, variable_to_string(v));
}

// ---------------------------------------------------------------------------
// Rule bases
// ---------------------------------------------------------------------------

inline ordered_json rules_to_json(const RuleBase& rb) {
  ordered_json rules = ordered_json::array();
  for (const auto& rule : rb.rules()) {
    ordered_json antecedents = ordered_json::array();
    for (const auto& a : rule.antecedents) {
      antecedents.push_back({{"var", a.variable}, {"term", a.term}});
    }
    rules.push_back({{"if", antecedents},
                     {"then", {{"var", rule.consequent.variable},
                               {"term", rule.consequent.term}}}});
  }
  return ordered_json{{"rules", rules}};
}

inline RuleBase rules_from_json(const ordered_json& j) {
  detail::reject_unknown(j, {"rules"}, "rule-base document");
  std::vector<FuzzyRule> rules;
  for (const auto& rj : j.at("rules")) {
    detail::reject_unknown(rj, {"if", "then"},
                           "rule " + std::to_string(rules.size() + 1));
    FuzzyRule rule;
    for (const auto& aj : rj.at("if")) {
      detail::reject_unknown(aj, {"var", "term"},
                             "antecedent of rule " + std::to_string(rules.size() + 1));
      rule.antecedents.push_back(
          {aj.at("var").get<std::string>(), aj.at("term").get<std::string>()});
    }
    const auto& cj = rj.at("then");
    detail::reject_unknown(cj, {"var", "term"},
                           "consequent of rule " + std::to_string(rules.size() + 1));
    rule.consequent = {cj.at("var").get<std::string>(), cj.at("term").get<std::string>()};
    rules.push_back(std::move(rule));
  }
  return RuleBase(std::move(rules));
}

inline std::string rules_to_string(const RuleBase& rb) {
  return rules_to_json(rb).dump(2) + "\n";
}

inline RuleBase load_rules(const std::string& path) {
  return rules_from_json(detail::parse(detail::slurp(path), path));
}

inline void save_rules(const RuleBase& rb, const std::string& path) {
  detail::spit(path, rules_to_string(rb));
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

inline constexpr int kDatasetVersion = 1;

inline ordered_json dataset_to_json(const std::vector<TestCase>& dataset) {
  ordered_json tests = ordered_json::array();
  for (const auto& t : dataset) {
    tests.push_back({{"id", t.id},
                     {"name", t.name},
                     {"exec_time", t.exec_time},
                     {"failure_rate", t.failure_rate},
                     {"prerequisites", t.prerequisites},
                     {"recently_updated", t.recently_updated}});
  }
  return ordered_json{{"version", kDatasetVersion}, {"tests", tests}};
}

inline std::vector<TestCase> dataset_from_json(const ordered_json& j) {
  detail::reject_unknown(j, {"version", "tests"}, "dataset document");
  if (j.at("version").get<int>() != kDatasetVersion) {
    throw std::runtime_error("unsupported dataset version");
  }
  std::vector<TestCase> dataset;
  for (const auto& tj : j.at("tests")) {
    const std::string where =
        tj.contains("id") && tj.at("id").is_number_integer()
            ? "test " + std::to_string(tj.at("id").get<int>())
            : "test #" + std::to_string(dataset.size() + 1);
    detail::reject_unknown(tj,
                           {"id", "name", "exec_time", "failure_rate", "prerequisites",
                            "recently_updated"},
                           where);
    try {
      TestCase t;
      t.id = tj.at("id").get<int>();
      t.name = tj.at("name").get<std::string>();
      t.exec_time = tj.at("exec_time").get<double>();
      t.failure_rate = tj.at("failure_rate").get<double>();
      t.prerequisites = tj.at("prerequisites").get<std::vector<std::vector<int>>>();
      t.recently_updated = tj.at("recently_updated").get<bool>();
      dataset.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  }
  validate_dataset(dataset);
  return dataset;
}

inline std::string dataset_to_string(const std::vector<TestCase>& dataset) {
  return dataset_to_json(dataset).dump(2) + "\n";
}

inline std::vector<TestCase> load_dataset(const std::string& path) {
  return dataset_from_json(detail::parse(detail::slurp(path), path));
}

inline void save_dataset(const std::vector<TestCase>& dataset, const std::string& path) {
  detail::spit(path, dataset_to_string(dataset));
}

inline const std::vector<std::string> kCsvHeader = {
    "id", "name", "exec_time", "failure_rate", "prerequisites", "recently_updated"};

inline std::vector<TestCase> load_csv_dataset(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  const auto header = detail::split_csv_row(lines[0]);
  if (header != kCsvHeader) {
    throw std::runtime_error(path +
                             ": header must be id,name,exec_time,failure_rate,"
                             "prerequisites,recently_updated");
  }
  std::vector<TestCase> dataset;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + " row " + std::to_string(row + 1);
    const auto cells = detail::split_csv_row(lines[row]);
    if (cells.size() != kCsvHeader.size()) {
      throw std::runtime_error(where + ": expected " +
                               std::to_string(kCsvHeader.size()) + " cells, got " +
                               std::to_string(cells.size()));
    }
    TestCase t;
    t.id = detail::parse_int(cells[0], where);
    t.name = cells[1];
    t.exec_time = detail::parse_double(cells[2], where);
    t.failure_rate = detail::parse_double(cells[3], where);
    t.prerequisites = detail::parse_prerequisites(cells[4], where);
    t.recently_updated = detail::parse_bool(cells[5], where);
    dataset.push_back(std::move(t));
  }
  validate_dataset(dataset);
  return dataset;
}

// ---------------------------------------------------------------------------
// Fault models
// ---------------------------------------------------------------------------

inline FaultModel load_faults(const std::string& path) {
  FaultModel model;
  const auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream in(line);
    int id = 0;
    while (in >> id) model.faulty_ids.insert(id);
    if (!in.eof()) {
      throw std::runtime_error(path + " line " + std::to_string(i + 1) +
                               ": malformed test id");
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

inline std::string mode_name(ScheduleMode mode) {
  return mode == ScheduleMode::RunOnce ? "run-once" : "fresh-chain";
}

inline ScheduleMode mode_from_name(const std::string& name) {
  if (name == "run-once") return ScheduleMode::RunOnce;
  if (name == "fresh-chain") return ScheduleMode::FreshChain;
  throw std::runtime_error("unknown schedule mode: " + name);
}

inline ordered_json plan_to_json(const ExecutionPlan& plan,
                                 const std::vector<TestCase>& dataset) {
  const auto by_id = index_by_id(dataset);
  ordered_json steps = ordered_json::array();
  double cumulative = 0.0;
  for (const auto& step : plan.steps) {
    auto it = by_id.find(step.id);
    if (it == by_id.end()) {
      throw std::runtime_error("plan references unknown test " + std::to_string(step.id));
    }
    cumulative += it->second->exec_time;
    steps.push_back({{"id", step.id},
                     {"name", it->second->name},
                     {"reason", step.reason == StepReason::Ranked
                                    ? "ranked"
                                    : "prerequisite-insertion"},
                     {"exec_time", it->second->exec_time},
                     {"cumulative_time", cumulative}});
  }
  return ordered_json{{"mode", mode_name(plan.mode)}, {"steps", steps}};
}

inline ExecutionPlan plan_from_json(const ordered_json& j) {
  detail::reject_unknown(j, {"mode", "steps"}, "plan document");
  ExecutionPlan plan;
  plan.mode = mode_from_name(j.at("mode").get<std::string>());
  for (const auto& sj : j.at("steps")) {
    detail::reject_unknown(sj, {"id", "name", "reason", "exec_time", "cumulative_time"},
                           "plan step " + std::to_string(plan.steps.size() + 1));
    PlanStep step;
    step.id = sj.at("id").get<int>();
    const auto reason = sj.at("reason").get<std::string>();
    if (reason == "ranked") {
      step.reason = StepReason::Ranked;
    } else if (reason == "prerequisite-insertion") {
      step.reason = StepReason::PrerequisiteInsertion;
    } else {
      throw std::runtime_error("unknown step reason: " + reason);
    }
    plan.steps.push_back(step);
  }
  return plan;
}

inline std::string plan_to_string(const ExecutionPlan& plan,
                                  const std::vector<TestCase>& dataset) {
  return plan_to_json(plan, dataset).dump(2) + "\n";
}

inline ExecutionPlan load_plan(const std::string& path) {
  return plan_from_json(detail::parse(detail::slurp(path), path));
}

inline void save_plan(const ExecutionPlan& plan, const std::vector<TestCase>& dataset,
                      const std::string& path) {
  detail::spit(path, plan_to_string(plan, dataset));
}

// ---------------------------------------------------------------------------
// Surveys
// ---------------------------------------------------------------------------

// CSV rows of (expert, value, term); variable identity comes from the caller.
inline std::vector<RatingSample> load_survey_csv(const std::string& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  const auto header = detail::split_csv_row(lines[0]);
  if (header != std::vector<std::string>{"expert", "value", "term"}) {
    throw std::runtime_error(path + ": header must be expert,value,term");
  }
  std::vector<RatingSample> samples;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + " row " + std::to_string(row + 1);
    const auto cells = detail::split_csv_row(lines[row]);
    if (cells.size() != 3) {
      throw std::runtime_error(where + ": expected 3 cells, got " +
                               std::to_string(cells.size()));
    }
    samples.push_back({cells[0], detail::parse_double(cells[1], where), cells[2]});
  }
  return samples;
}

}  // namespace testprio::io
