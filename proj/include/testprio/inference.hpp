#pragma once

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "testprio/centroid.hpp"
#include "testprio/variable.hpp"

namespace testprio {

struct RuleClause {
  std::string variable;
  std::string term;

  bool operator==(const RuleClause&) const = default;
};

// IF <antecedents, conjunction> THEN <consequent>.
struct FuzzyRule {
  std::vector<RuleClause> antecedents;
  RuleClause consequent;

  bool operator==(const FuzzyRule&) const = default;
};

// Ordered list of rules. Rules are reported by 1-based position, which for
// the bundled expert base matches its published numbering.
class RuleBase {
 public:
  explicit RuleBase(std::vector<FuzzyRule> rules) : rules_(std::move(rules)) {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      if (rules_[i].antecedents.empty()) {
        throw std::invalid_argument("rule " + std::to_string(i + 1) + " has no antecedents");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (same_antecedents(rules_[j], rules_[i])) {
          throw std::invalid_argument("rules " + std::to_string(j + 1) + " and " +
                                      std::to_string(i + 1) +
                                      " share an identical antecedent set");
        }
      }
    }
  }

  const std::vector<FuzzyRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  const FuzzyRule& at(std::size_t i) const { return rules_.at(i); }

 private:
  static bool same_antecedents(const FuzzyRule& x, const FuzzyRule& y) {
    if (x.antecedents.size() != y.antecedents.size()) return false;
    for (const auto& a : x.antecedents) {
      if (std::find(y.antecedents.begin(), y.antecedents.end(), a) == y.antecedents.end()) {
        return false;
      }
    }
    return true;
  }

  std::vector<FuzzyRule> rules_;
};

using TermDegrees = std::vector<std::pair<std::string, double>>;

// Full record of one inference run: fuzzified inputs, fired rules with their
// activation (= clip height), the aggregated output sampled on the centroid
// grid, and the defuzzified value.
struct InferenceTrace {
  std::vector<std::pair<std::string, TermDegrees>> fuzzified;
  std::vector<std::pair<int, double>> fired;  // 1-based rule index, activation
  std::vector<std::pair<double, double>> aggregate;
  double crisp_output = 0.0;
  std::vector<std::string> warnings;
};

// Mamdani pipeline: fuzzify -> min conjunction -> clip consequents ->
// max aggregation -> centroid defuzzification. Immutable after construction;
// infer() is const and safe to call concurrently.
class InferenceEngine {
 public:
  InferenceEngine(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
                  RuleBase rules, int resolution = kDefaultResolution)
      : inputs_(std::move(inputs)),
        output_(std::move(output)),
        rules_(std::move(rules)),
        resolution_(resolution) {
    if (resolution_ < 2) throw std::invalid_argument("invalid resolution");
    for (const auto& rule : rules_.rules()) {
      for (const auto& ant : rule.antecedents) {
        const LinguisticVariable* v = find_input(ant.variable);
        if (v == nullptr || v->find(ant.term) == nullptr) {
          throw std::invalid_argument("unknown antecedent: " + ant.variable + " is " +
                                      ant.term);
        }
      }
      if (rule.consequent.variable != output_.name() ||
          output_.find(rule.consequent.term) == nullptr) {
        throw std::invalid_argument("unknown consequent: " + rule.consequent.variable +
                                    " is " + rule.consequent.term);
      }
    }
  }

  const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
  const LinguisticVariable& output() const { return output_; }
  const RuleBase& rules() const { return rules_; }
  int resolution() const { return resolution_; }

  const LinguisticVariable* find_input(const std::string& name) const {
    for (const auto& v : inputs_) {
      if (v.name() == name) return &v;
    }
    return nullptr;
  }

  // Conjunction: min over antecedent degrees.
  static double activation(const FuzzyRule& rule,
                           const std::vector<std::pair<std::string, TermDegrees>>& fuzzified) {
    double degree = 1.0;
    for (const auto& ant : rule.antecedents) {
      const TermDegrees* degrees = nullptr;
      for (const auto& [var, td] : fuzzified) {
        if (var == ant.variable) {
          degrees = &td;
          break;
        }
      }
      if (degrees == nullptr) throw std::runtime_error("unknown antecedent: " + ant.variable);
      bool found = false;
      for (const auto& [label, mu] : *degrees) {
        if (label == ant.term) {
          degree = std::min(degree, mu);
          found = true;
          break;
        }
      }
      if (!found) throw std::runtime_error("unknown antecedent: " + ant.term);
    }
    return degree;
  }

  InferenceTrace infer(const std::map<std::string, double>& crisp_inputs) const {
    InferenceTrace trace;
    for (const auto& var : inputs_) {
      auto it = crisp_inputs.find(var.name());
      if (it == crisp_inputs.end()) {
        throw std::invalid_argument("missing input: " + var.name());
      }
      double x = it->second;
      if (!std::isfinite(x)) throw std::invalid_argument("invalid input value");
      if (x < var.universe().lo || x > var.universe().hi) {
        std::ostringstream w;
        w << var.name() << "=" << x << " outside [" << var.universe().lo << ", "
          << var.universe().hi << "], clamped";
        trace.warnings.push_back(w.str());
        x = var.clamp(x);
      }
      trace.fuzzified.emplace_back(var.name(), var.fuzzify(x));
    }

    struct Clipped {
      const MembershipFunction* mf;
      double height;
    };
    std::vector<Clipped> clipped;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const FuzzyRule& rule = rules_.at(i);
      const double act = activation(rule, trace.fuzzified);
      if (act > 0.0) {
        trace.fired.emplace_back(static_cast<int>(i + 1), act);
        clipped.push_back({&output_.find(rule.consequent.term)->mf, act});
      }
    }
    if (clipped.empty()) throw std::runtime_error("empty aggregate, no rule fired");

    // Max aggregation, evaluated lazily: exact max over the clipped
    // consequents, so rule order cannot affect the result.
    const auto aggregate = [&clipped](double x) {
      double mu = 0.0;
      for (const auto& c : clipped) {
        mu = std::max(mu, std::min(c.height, c.mf->evaluate(x)));
      }
      return mu;
    };

    const Interval u = output_.universe();
    trace.crisp_output = centroid(aggregate, u, resolution_);
    const double h = u.width() / resolution_;
    trace.aggregate.reserve(static_cast<std::size_t>(resolution_));
    for (int i = 0; i < resolution_; ++i) {
      const double x = u.lo + (i + 0.5) * h;
      trace.aggregate.emplace_back(x, aggregate(x));
    }
    return trace;
  }

  std::string rule_text(std::size_t index_1based) const {
    const FuzzyRule& rule = rules_.at(index_1based - 1);
    std::ostringstream os;
    os << "IF ";
    for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
      if (i > 0) os << " AND ";
      os << rule.antecedents[i].variable << " is " << rule.antecedents[i].term;
    }
    os << " THEN " << rule.consequent.variable << " is " << rule.consequent.term;
    return os.str();
  }

 private:
  std::vector<LinguisticVariable> inputs_;
  LinguisticVariable output_;
  RuleBase rules_;
  int resolution_;
};

inline double activation(const FuzzyRule& rule,
                         const std::vector<std::pair<std::string, TermDegrees>>& fuzzified) {
  return InferenceEngine::activation(rule, fuzzified);
}

// Human-readable account of a trace: memberships, fired rules with clip
// heights, crisp result.
inline std::string explain(const InferenceTrace& trace, const InferenceEngine& engine) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "memberships\n";
  for (const auto& [var, degrees] : trace.fuzzified) {
    os << "  " << var << ":";
    for (const auto& [label, mu] : degrees) {
      os << " " << label << "=" << mu;
    }
    os << "\n";
  }
  os << "fired rules\n";
  for (const auto& [index, act] : trace.fired) {
    os << "  rule " << index << ": " << engine.rule_text(static_cast<std::size_t>(index))
       << "  [clip " << act << "]\n";
  }
  os << std::setprecision(2);
  os << engine.output().name() << " = " << trace.crisp_output << "\n";
  return os.str();
}

// Expert-table convention check: for two rules whose antecedents differ in
// exactly one variable's term, the consequent rank must be nondecreasing in
// the `increasing` variable's rank and nonincreasing in the `decreasing`
// variable's rank.
inline std::vector<std::string> rule_monotonicity_violations(
    const InferenceEngine& engine, const std::string& increasing_var,
    const std::string& decreasing_var) {
  std::vector<std::string> violations;
  const auto& rules = engine.rules().rules();
  auto term_of = [](const FuzzyRule& rule, const std::string& var) -> const std::string* {
    for (const auto& a : rule.antecedents) {
      if (a.variable == var) return &a.term;
    }
    return nullptr;
  };
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      int differing = 0;
      std::string diff_var;
      for (const auto& a : rules[i].antecedents) {
        const std::string* other = term_of(rules[j], a.variable);
        if (other == nullptr) {
          differing = -1;
          break;
        }
        if (*other != a.term) {
          ++differing;
          diff_var = a.variable;
        }
      }
      if (differing != 1 || rules[i].antecedents.size() != rules[j].antecedents.size()) {
        continue;
      }
      if (diff_var != increasing_var && diff_var != decreasing_var) continue;
      const LinguisticVariable* var = engine.find_input(diff_var);
      const int ri = var->rank_of(*term_of(rules[i], diff_var));
      const int rj = var->rank_of(*term_of(rules[j], diff_var));
      const int ci = engine.output().rank_of(rules[i].consequent.term);
      const int cj = engine.output().rank_of(rules[j].consequent.term);
      const bool increasing = (diff_var == increasing_var);
      const int lo_c = ri < rj ? ci : cj;
      const int hi_c = ri < rj ? cj : ci;
      const bool bad = increasing ? hi_c < lo_c : hi_c > lo_c;
      if (bad) {
        std::ostringstream os;
        os << "rules " << i + 1 << " and " << j + 1 << " break monotonicity on "
           << diff_var;
        violations.push_back(os.str());
      }
    }
  }
  return violations;
}

// Counts adjacent-cell decreases of the crisp output along each input axis
// over a sampled grid. Informational: centroid defuzzification admits small
// ripples even under a monotone rule table.
struct MonotonicityReport {
  int cells = 0;
  int rising_violations = 0;   // output fell while failure rate rose
  int falling_violations = 0;  // output rose while execution time rose
};

inline MonotonicityReport monotonicity_report(const InferenceEngine& engine,
                                              double step_time = 5.0,
                                              double step_rate = 5.0) {
  const auto& et = engine.inputs().at(0);
  const auto& fr = engine.inputs().at(1);
  std::vector<std::vector<double>> grid;
  for (double t = et.universe().lo; t <= et.universe().hi; t += step_time) {
    std::vector<double> row;
    for (double r = fr.universe().lo; r <= fr.universe().hi; r += step_rate) {
      row.push_back(engine.infer({{et.name(), t}, {fr.name(), r}}).crisp_output);
    }
    grid.push_back(std::move(row));
  }
  MonotonicityReport rep;
  const double eps = 1e-9;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid[i].size(); ++j) {
      ++rep.cells;
      if (j + 1 < grid[i].size() && grid[i][j + 1] < grid[i][j] - eps) {
        ++rep.rising_violations;
      }
      if (i + 1 < grid.size() && grid[i + 1][j] > grid[i][j] + eps) {
        ++rep.falling_violations;
      }
    }
  }
  return rep;
}

}  // namespace testprio
