#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "testprio/inference.hpp"

namespace testprio {

inline constexpr const char* kExecutionTimeVar = "execution_time";
inline constexpr const char* kFailureRateVar = "failure_rate";

// One regression test. Prerequisites are a conjunction of OR-groups: every
// group must be satisfied, a group is satisfied by any one of its members.
struct TestCase {
  int id = 0;
  std::string name;
  double exec_time = 0.0;     // seconds
  double failure_rate = 0.0;  // percent, 0..100
  std::vector<std::vector<int>> prerequisites;
  bool recently_updated = false;

  bool operator==(const TestCase&) const = default;
};

struct PrioritizedTest {
  int id = 0;
  double raw_score = 0.0;
  std::string level;
  bool promoted = false;
  double final_score = 0.0;
  std::string final_level;
};

enum class ScheduleMode { RunOnce, FreshChain };

enum class StepReason { Ranked, PrerequisiteInsertion };

struct PlanStep {
  int id = 0;
  StepReason reason = StepReason::Ranked;

  bool operator==(const PlanStep&) const = default;
};

struct ExecutionPlan {
  ScheduleMode mode = ScheduleMode::RunOnce;
  std::vector<PlanStep> steps;
};

namespace detail {

inline std::string join_cycle(const std::vector<int>& path) {
  std::ostringstream os;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) os << "→";
    os << path[i];
  }
  return os.str();
}

// Quantized sort key: absorbs last-bit float noise so that the documented
// tie-break (equal scores -> id ascending) is stable across platforms.
inline long long score_key(double score) {
  return std::llround(score * 1e9);
}

}  // namespace detail

inline std::map<int, const TestCase*> index_by_id(const std::vector<TestCase>& dataset) {
  std::map<int, const TestCase*> by_id;
  for (const auto& t : dataset) {
    if (!by_id.emplace(t.id, &t).second) {
      throw std::invalid_argument("duplicate test id: " + std::to_string(t.id));
    }
  }
  return by_id;
}

// All tests reachable from `id` through any member of any OR-group.
inline std::set<int> prerequisite_closure(const std::map<int, const TestCase*>& by_id,
                                          int id) {
  std::set<int> seen;
  std::vector<int> stack{id};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    auto it = by_id.find(cur);
    if (it == by_id.end()) continue;
    for (const auto& group : it->second->prerequisites) {
      for (int member : group) {
        if (member != id && seen.insert(member).second) stack.push_back(member);
      }
    }
  }
  return seen;
}

// Structural validation: unique positive ids, resolvable references, no
// self-dependency, and at least one acyclic OR-resolution (fixpoint over
// "some member of every group is schedulable").
inline void validate_dataset(const std::vector<TestCase>& dataset) {
  if (dataset.empty()) throw std::invalid_argument("empty dataset");
  const auto by_id = index_by_id(dataset);
  for (const auto& t : dataset) {
    if (t.id <= 0) throw std::invalid_argument("test id must be positive: " + t.name);
    if (t.exec_time < 0.0) {
      throw std::invalid_argument("negative exec_time in test " + std::to_string(t.id));
    }
    if (t.failure_rate < 0.0 || t.failure_rate > 100.0) {
      throw std::invalid_argument("failure_rate outside [0,100] in test " +
                                  std::to_string(t.id));
    }
    for (const auto& group : t.prerequisites) {
      if (group.empty()) {
        throw std::invalid_argument("empty prerequisite group in test " +
                                    std::to_string(t.id));
      }
      for (int member : group) {
        if (member == t.id) {
          throw std::invalid_argument("test " + std::to_string(t.id) +
                                      " lists itself as prerequisite");
        }
        if (by_id.find(member) == by_id.end()) {
          throw std::invalid_argument("test " + std::to_string(t.id) +
                                      " references unknown prerequisite " +
                                      std::to_string(member));
        }
      }
    }
  }

  std::set<int> schedulable;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : dataset) {
      if (schedulable.count(t.id)) continue;
      bool ok = true;
      for (const auto& group : t.prerequisites) {
        bool any = false;
        for (int member : group) {
          if (schedulable.count(member)) {
            any = true;
            break;
          }
        }
        if (!any) {
          ok = false;
          break;
        }
      }
      if (ok) {
        schedulable.insert(t.id);
        changed = true;
      }
    }
  }
  if (schedulable.size() != dataset.size()) {
    // Walk the deadlocked tests to name one concrete cycle.
    std::vector<int> path;
    std::set<int> on_path;
    int cur = 0;
    for (const auto& t : dataset) {
      if (!schedulable.count(t.id)) {
        cur = t.id;
        break;
      }
    }
    while (!on_path.count(cur)) {
      path.push_back(cur);
      on_path.insert(cur);
      const TestCase* t = by_id.at(cur);
      int next = 0;
      for (const auto& group : t->prerequisites) {
        bool any = false;
        for (int member : group) {
          if (schedulable.count(member)) {
            any = true;
            break;
          }
        }
        if (!any) {
          next = group.front();
          for (int member : group) {
            if (!schedulable.count(member)) {
              next = member;
              break;
            }
          }
          break;
        }
      }
      cur = next;
    }
    path.erase(path.begin(),
               std::find(path.begin(), path.end(), cur));
    path.push_back(cur);
    throw std::invalid_argument("prerequisite cycle: " + detail::join_cycle(path));
  }
}

// Centroid of one output term over the output universe; the score a test
// "jumps to" when promoted into that term.
inline double term_centroid(const LinguisticVariable& output, const std::string& label,
                            int resolution = kDefaultResolution) {
  const FuzzyTerm* term = output.find(label);
  if (term == nullptr) throw std::invalid_argument("unknown priority level: " + label);
  return centroid([&term](double x) { return term->mf.evaluate(x); }, output.universe(),
                  resolution);
}

// Recently-updated promotion: raise the level to the next term and lift the
// score at least to that term's centroid. Saturates at the top term.
inline std::pair<double, std::string> promote(double raw_score, const std::string& level,
                                              bool updated,
                                              const LinguisticVariable& output,
                                              int resolution = kDefaultResolution) {
  const int rank = output.rank_of(level);
  if (rank < 0) throw std::invalid_argument("unknown priority level: " + level);
  if (!updated || rank + 1 >= static_cast<int>(output.terms().size())) {
    return {raw_score, level};
  }
  const std::string& next = output.terms()[static_cast<std::size_t>(rank) + 1].label;
  return {std::max(raw_score, term_centroid(output, next, resolution)), next};
}

inline PrioritizedTest score_test(const TestCase& test, const InferenceEngine& engine) {
  if (engine.find_input(kExecutionTimeVar) == nullptr ||
      engine.find_input(kFailureRateVar) == nullptr) {
    throw std::invalid_argument("engine must expose execution_time and failure_rate inputs");
  }
  const InferenceTrace trace = engine.infer(
      {{kExecutionTimeVar, test.exec_time}, {kFailureRateVar, test.failure_rate}});
  PrioritizedTest out;
  out.id = test.id;
  out.raw_score = trace.crisp_output;
  out.level = engine.output().argmax_term(trace.crisp_output).label;
  out.promoted = test.recently_updated;
  auto [final_score, final_level] =
      promote(out.raw_score, out.level, test.recently_updated, engine.output(),
              engine.resolution());
  out.final_score = final_score;
  out.final_level = final_level;
  return out;
}

// Score every test and sort: final score descending, raw score descending,
// id ascending.
inline std::vector<PrioritizedTest> prioritize(const std::vector<TestCase>& dataset,
                                               const InferenceEngine& engine) {
  validate_dataset(dataset);
  std::vector<PrioritizedTest> ranked;
  ranked.reserve(dataset.size());
  for (const auto& t : dataset) ranked.push_back(score_test(t, engine));
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const PrioritizedTest& x, const PrioritizedTest& y) {
                     const auto fx = detail::score_key(x.final_score);
                     const auto fy = detail::score_key(y.final_score);
                     if (fx != fy) return fx > fy;
                     const auto rx = detail::score_key(x.raw_score);
                     const auto ry = detail::score_key(y.raw_score);
                     if (rx != ry) return rx > ry;
                     return x.id < y.id;
                   });
  return ranked;
}

namespace detail {

class Scheduler {
 public:
  Scheduler(const std::vector<TestCase>& dataset,
            const std::vector<PrioritizedTest>& ranked, ScheduleMode mode)
      : by_id_(index_by_id(dataset)), mode_(mode) {
    for (const auto& p : ranked) {
      if (by_id_.find(p.id) == by_id_.end()) {
        throw std::invalid_argument("ranked test " + std::to_string(p.id) +
                                    " not in dataset");
      }
      score_[p.id] = p.final_score;
    }
    if (score_.size() != dataset.size()) {
      throw std::invalid_argument("ranked list is not a permutation of the dataset");
    }
    for (const auto& t : dataset) {
      closure_[t.id] = prerequisite_closure(by_id_, t.id);
    }
  }

  ExecutionPlan run(const std::vector<PrioritizedTest>& ranked) {
    plan_.mode = mode_;
    for (const auto& p : ranked) {
      if (mode_ == ScheduleMode::RunOnce) {
        if (last_exec_.count(p.id)) continue;
      } else {
        if (fresh(p.id, p.id)) continue;
      }
      emit(p.id, StepReason::Ranked);
    }
    return std::move(plan_);
  }

 private:
  // A prerequisite stays satisfied forever in RunOnce mode; in FreshChain
  // mode any intervening step outside the dependent's prerequisite closure
  // invalidates it.
  bool fresh(int prereq, int dependent) const {
    auto it = last_exec_.find(prereq);
    if (it == last_exec_.end()) return false;
    if (mode_ == ScheduleMode::RunOnce) return true;
    const std::set<int>& closure = closure_.at(dependent);
    for (std::size_t i = it->second + 1; i < plan_.steps.size(); ++i) {
      if (!closure.count(plan_.steps[i].id)) return false;
    }
    return true;
  }

  void emit(int id, StepReason reason) {
    if (in_progress_.count(id)) {
      std::vector<int> cycle(
          std::find(stack_.begin(), stack_.end(), id), stack_.end());
      cycle.push_back(id);
      throw std::invalid_argument("prerequisite cycle: " + join_cycle(cycle));
    }
    in_progress_.insert(id);
    stack_.push_back(id);
    const TestCase* test = by_id_.at(id);
    for (const auto& group : test->prerequisites) {
      bool satisfied = false;
      for (int member : group) {
        if (fresh(member, id)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      // Re-establish via the highest-scored member; ties go to the lower id.
      // Members already on the emission stack would close a cycle, so they
      // are only picked when the whole group is on it.
      int choice = 0;
      for (int member : group) {
        if (in_progress_.count(member)) continue;
        if (choice == 0) {
          choice = member;
          continue;
        }
        const auto kc = score_key(score_.at(choice));
        const auto km = score_key(score_.at(member));
        if (km > kc || (km == kc && member < choice)) choice = member;
      }
      emit(choice == 0 ? group.front() : choice, StepReason::PrerequisiteInsertion);
    }
    plan_.steps.push_back({id, reason});
    last_exec_[id] = plan_.steps.size() - 1;
    stack_.pop_back();
    in_progress_.erase(id);
  }

  std::map<int, const TestCase*> by_id_;
  ScheduleMode mode_;
  std::map<int, double> score_;
  std::map<int, std::set<int>> closure_;
  std::map<int, std::size_t> last_exec_;
  std::set<int> in_progress_;
  std::vector<int> stack_;
  ExecutionPlan plan_;
};

}  // namespace detail

// Turn a ranking into an execution order: walk the ranking and insert any
// unsatisfied prerequisite chains ahead of their dependents.
inline ExecutionPlan schedule(const std::vector<PrioritizedTest>& ranked,
                              const std::vector<TestCase>& dataset, ScheduleMode mode) {
  validate_dataset(dataset);
  detail::Scheduler scheduler(dataset, ranked, mode);
  return scheduler.run(ranked);
}

inline std::pair<int, double> plan_stats(const ExecutionPlan& plan,
                                         const std::vector<TestCase>& dataset) {
  const auto by_id = index_by_id(dataset);
  double total = 0.0;
  for (const auto& step : plan.steps) {
    auto it = by_id.find(step.id);
    if (it == by_id.end()) {
      throw std::invalid_argument("plan references unknown test " + std::to_string(step.id));
    }
    total += it->second->exec_time;
  }
  return {static_cast<int>(plan.steps.size()), total};
}

// Replays a plan and checks that every step's OR-groups are satisfied under
// the plan's mode. Throws on the first violation.
inline void validate_plan(const ExecutionPlan& plan, const std::vector<TestCase>& dataset) {
  const auto by_id = index_by_id(dataset);
  std::map<int, std::set<int>> closures;
  for (const auto& t : dataset) closures[t.id] = prerequisite_closure(by_id, t.id);
  std::map<int, std::size_t> last_exec;
  std::set<int> seen;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const int id = plan.steps[i].id;
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw std::runtime_error("plan references unknown test " + std::to_string(id));
    }
    if (plan.mode == ScheduleMode::RunOnce && !seen.insert(id).second) {
      throw std::runtime_error("run-once plan repeats test " + std::to_string(id));
    }
    for (const auto& group : it->second->prerequisites) {
      bool satisfied = false;
      for (int member : group) {
        auto le = last_exec.find(member);
        if (le == last_exec.end()) continue;
        if (plan.mode == ScheduleMode::RunOnce) {
          satisfied = true;
          break;
        }
        bool fresh = true;
        for (std::size_t j = le->second + 1; j < i; ++j) {
          if (!closures.at(id).count(plan.steps[j].id)) {
            fresh = false;
            break;
          }
        }
        if (fresh) {
          satisfied = true;
          break;
        }
      }
      if (!satisfied) {
        throw std::runtime_error("unsatisfied prerequisite group for test " +
                                 std::to_string(id) + " at step " + std::to_string(i + 1));
      }
    }
    last_exec[id] = i;
  }
}

}  // namespace testprio
