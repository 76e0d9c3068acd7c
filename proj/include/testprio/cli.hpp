#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "testprio/defaults.hpp"
#include "testprio/elicitation.hpp"
#include "testprio/evaluation.hpp"
#include "testprio/inference.hpp"
#include "testprio/io.hpp"
#include "testprio/tcp.hpp"

namespace testprio::cli {

namespace detail {

struct CommonOptions {
  std::vector<std::string> variable_paths;
  std::string rules_path;
  std::string dataset_path;
  std::string mode = "run-once";
  int resolution = kDefaultResolution;
  std::string format = "text";
};

inline void add_engine_options(CLI::App* sub, CommonOptions& opt) {
  sub->add_option("--variables", opt.variable_paths,
                  "Linguistic-variable file(s); replaces the default partition "
                  "with the same name (repeatable)");
  sub->add_option("--rules", opt.rules_path, "Rule-base file");
  sub->add_option("--resolution", opt.resolution, "Centroid sample count")
      ->check(CLI::Range(2, 10'000'000));
}

inline void add_format_option(CLI::App* sub, CommonOptions& opt) {
  sub->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}));
}

inline void add_dataset_option(CLI::App* sub, CommonOptions& opt) {
  sub->add_option("--dataset", opt.dataset_path,
                  "Dataset file (.json or .csv); defaults to the bundled sample");
}

inline InferenceEngine build_engine(const CommonOptions& opt) {
  LinguisticVariable et = default_execution_time();
  LinguisticVariable fr = default_failure_rate();
  LinguisticVariable pr = default_priority();
  for (const auto& path : opt.variable_paths) {
    LinguisticVariable v = io::load_variable(path);
    if (v.name() == et.name()) {
      et = v;
    } else if (v.name() == fr.name()) {
      fr = v;
    } else if (v.name() == pr.name()) {
      pr = v;
    } else {
      throw std::runtime_error(path + ": variable '" + v.name() +
                               "' is not one of execution_time, failure_rate, priority");
    }
  }
  RuleBase rules = opt.rules_path.empty() ? default_rule_base()
                                          : io::load_rules(opt.rules_path);
  return InferenceEngine({et, fr}, pr, std::move(rules), opt.resolution);
}

inline bool ends_with(const std::string& text, const std::string& suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::vector<TestCase> build_dataset(const CommonOptions& opt) {
  if (opt.dataset_path.empty()) return sample_dataset();
  if (ends_with(opt.dataset_path, ".csv")) return io::load_csv_dataset(opt.dataset_path);
  return io::load_dataset(opt.dataset_path);
}

inline std::string fixed2(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

inline io::ordered_json trace_to_json(const InferenceTrace& trace) {
  io::ordered_json fuzzified = io::ordered_json::object();
  for (const auto& [var, degrees] : trace.fuzzified) {
    io::ordered_json terms = io::ordered_json::object();
    for (const auto& [label, mu] : degrees) terms[label] = mu;
    fuzzified[var] = terms;
  }
  io::ordered_json fired = io::ordered_json::array();
  for (const auto& [index, act] : trace.fired) {
    fired.push_back({{"rule", index}, {"activation", act}});
  }
  return io::ordered_json{{"priority", trace.crisp_output},
                          {"fuzzified", fuzzified},
                          {"fired", fired},
                          {"warnings", trace.warnings}};
}

inline io::ordered_json ranking_to_json(const std::vector<PrioritizedTest>& ranked,
                                        const std::vector<TestCase>& dataset) {
  const auto by_id = index_by_id(dataset);
  io::ordered_json out = io::ordered_json::array();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& p = ranked[i];
    out.push_back({{"rank", i + 1},
                   {"id", p.id},
                   {"name", by_id.at(p.id)->name},
                   {"raw_score", p.raw_score},
                   {"level", p.level},
                   {"promoted", p.promoted},
                   {"final_score", p.final_score},
                   {"final_level", p.final_level}});
  }
  return out;
}

inline void print_ranking(std::ostream& out, const std::vector<PrioritizedTest>& ranked,
                          const std::vector<TestCase>& dataset) {
  const auto by_id = index_by_id(dataset);
  std::size_t name_w = 4;
  for (const auto& t : dataset) name_w = std::max(name_w, t.name.size());
  out << std::left << std::setw(5) << "rank" << std::setw(4) << "id"
      << std::setw(static_cast<int>(name_w) + 2) << "name" << std::right << std::setw(7)
      << "raw" << "  " << std::left << std::setw(9) << "level" << std::setw(10)
      << "promoted" << std::right << std::setw(7) << "final" << "  " << std::left
      << "level\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& p = ranked[i];
    out << std::left << std::setw(5) << i + 1 << std::setw(4) << p.id
        << std::setw(static_cast<int>(name_w) + 2) << by_id.at(p.id)->name << std::right
        << std::setw(7) << fixed2(p.raw_score) << "  " << std::left << std::setw(9)
        << p.level << std::setw(10) << (p.promoted ? "yes" : "no") << std::right
        << std::setw(7) << fixed2(p.final_score) << "  " << std::left << p.final_level
        << "\n";
  }
}

inline void print_plan(std::ostream& out, const ExecutionPlan& plan,
                       const std::vector<TestCase>& dataset) {
  const auto by_id = index_by_id(dataset);
  std::size_t name_w = 4;
  for (const auto& t : dataset) name_w = std::max(name_w, t.name.size());
  out << "mode: " << io::mode_name(plan.mode) << "\n";
  out << std::left << std::setw(5) << "step" << std::setw(4) << "id"
      << std::setw(static_cast<int>(name_w) + 2) << "name" << std::setw(25) << "reason"
      << std::right << std::setw(6) << "time" << std::setw(12) << "cumulative" << "\n";
  double cumulative = 0.0;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& step = plan.steps[i];
    const TestCase* t = by_id.at(step.id);
    cumulative += t->exec_time;
    out << std::left << std::setw(5) << i + 1 << std::setw(4) << step.id
        << std::setw(static_cast<int>(name_w) + 2) << t->name << std::setw(25)
        << (step.reason == StepReason::Ranked ? "ranked" : "prerequisite-insertion")
        << std::right << std::setw(6) << t->exec_time << std::setw(12) << cumulative
        << "\n";
  }
  const auto [executed, total] = plan_stats(plan, dataset);
  out << "total: " << executed << " executions, " << total << " seconds\n";
}

inline std::string file_stem(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string base = (slash == std::string::npos) ? path : path.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  return (dot == std::string::npos) ? base : base.substr(0, dot);
}

inline std::string normalize_var_name(std::string name) {
  for (auto& ch : name) {
    if (ch == '-') ch = '_';
  }
  return name;
}

}  // namespace detail

// Batch entry point; returns the process exit code. Results go to `out`,
// diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using detail::CommonOptions;

  CLI::App app{"Fuzzy-inference test case prioritization"};
  app.require_subcommand(1);
  CommonOptions opt;

  // infer
  double in_time = 0.0;
  double in_rate = 0.0;
  bool explain_flag = false;
  std::string plot_out;
  CLI::App* infer = app.add_subcommand(
      "infer", "Score one (execution time, failure rate) pair");
  infer->add_option("exec_time", in_time, "Execution time, seconds")->required();
  infer->add_option("failure_rate", in_rate, "Failure rate, percent")->required();
  infer->add_flag("--explain", explain_flag, "Print the full inference trace");
  infer->add_option("--plot-out", plot_out, "Write aggregate samples as CSV (x, mu)");
  detail::add_engine_options(infer, opt);
  detail::add_format_option(infer, opt);

  // prioritize
  CLI::App* prioritize_cmd =
      app.add_subcommand("prioritize", "Rank a dataset by fuzzy priority");
  detail::add_engine_options(prioritize_cmd, opt);
  detail::add_format_option(prioritize_cmd, opt);
  detail::add_dataset_option(prioritize_cmd, opt);

  // schedule
  CLI::App* schedule_cmd = app.add_subcommand(
      "schedule", "Rank a dataset and emit a prerequisite-respecting plan");
  detail::add_engine_options(schedule_cmd, opt);
  detail::add_format_option(schedule_cmd, opt);
  detail::add_dataset_option(schedule_cmd, opt);
  schedule_cmd->add_option("--mode", opt.mode, "Scheduling semantics")
      ->check(CLI::IsMember({"run-once", "fresh-chain"}));

  // evaluate
  std::vector<std::string> plan_paths;
  std::string faults_path;
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "Simulate plans against a fault model");
  evaluate_cmd->add_option("plans", plan_paths, "Plan files (structured format)")
      ->required()
      ->expected(-1);
  evaluate_cmd->add_option("--faults", faults_path, "Fault-model file (test ids)");
  detail::add_format_option(evaluate_cmd, opt);
  detail::add_dataset_option(evaluate_cmd, opt);

  // elicit
  std::string survey_path;
  std::string target_var;
  CLI::App* elicit_cmd = app.add_subcommand(
      "elicit", "Build a fuzzy partition from a Direct Rating survey");
  elicit_cmd->add_option("survey", survey_path, "Survey CSV (expert,value,term)")
      ->required();
  elicit_cmd->add_option("--var", target_var, "Target variable name")->required();
  detail::add_engine_options(elicit_cmd, opt);

  // validate
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check variables, rules, and dataset");
  detail::add_engine_options(validate_cmd, opt);
  detail::add_dataset_option(validate_cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (infer->parsed()) {
      const InferenceEngine engine = detail::build_engine(opt);
      const InferenceTrace trace = engine.infer(
          {{kExecutionTimeVar, in_time}, {kFailureRateVar, in_rate}});
      for (const auto& w : trace.warnings) err << "warning: " << w << "\n";
      if (!plot_out.empty()) {
        std::ostringstream csv;
        csv << "x,mu\n";
        for (const auto& [x, mu] : trace.aggregate) csv << x << "," << mu << "\n";
        io::detail::spit(plot_out, csv.str());
      }
      if (opt.format == "structured") {
        out << detail::trace_to_json(trace).dump(2) << "\n";
      } else if (explain_flag) {
        out << explain(trace, engine);
      } else {
        out << "priority = " << detail::fixed2(trace.crisp_output) << "\n";
      }
      return 0;
    }

    if (prioritize_cmd->parsed()) {
      const InferenceEngine engine = detail::build_engine(opt);
      const auto dataset = detail::build_dataset(opt);
      const auto ranked = prioritize(dataset, engine);
      if (opt.format == "structured") {
        out << detail::ranking_to_json(ranked, dataset).dump(2) << "\n";
      } else {
        detail::print_ranking(out, ranked, dataset);
      }
      return 0;
    }

    if (schedule_cmd->parsed()) {
      const InferenceEngine engine = detail::build_engine(opt);
      const auto dataset = detail::build_dataset(opt);
      const auto ranked = prioritize(dataset, engine);
      const ExecutionPlan plan = schedule(ranked, dataset, io::mode_from_name(opt.mode));
      if (opt.format == "structured") {
        out << io::plan_to_string(plan, dataset);
      } else {
        detail::print_plan(out, plan, dataset);
      }
      return 0;
    }

    if (evaluate_cmd->parsed()) {
      const auto dataset = detail::build_dataset(opt);
      const FaultModel faults =
          faults_path.empty() ? FaultModel{} : io::load_faults(faults_path);
      std::vector<EvaluationReport> reports;
      for (const auto& path : plan_paths) {
        reports.push_back(
            simulate(io::load_plan(path), dataset, faults, detail::file_stem(path)));
      }
      if (opt.format == "structured") {
        io::ordered_json js = io::ordered_json::array();
        for (const auto& r : reports) {
          js.push_back({{"label", r.label},
                        {"executed", r.executed},
                        {"total_time", r.total_time},
                        {"failures_found", r.failures_found},
                        {"time_to_all_failures", r.time_to_all_failures}});
        }
        out << js.dump(2) << "\n";
      } else if (reports.size() == 1) {
        const auto& r = reports.front();
        out << r.label << ": executed " << r.executed << ", total "
            << r.total_time << " sec, failures " << r.failures_found
            << ", time to all failures " << r.time_to_all_failures << " sec\n";
      } else {
        out << compare(reports);
      }
      return 0;
    }

    if (elicit_cmd->parsed()) {
      const InferenceEngine engine = detail::build_engine(opt);
      const std::string name = detail::normalize_var_name(target_var);
      const LinguisticVariable* target = engine.find_input(name);
      if (target == nullptr && engine.output().name() == name) {
        target = &engine.output();
      }
      if (target == nullptr) {
        throw std::runtime_error("unknown variable: " + target_var);
      }
      Survey survey;
      survey.variable = target->name();
      survey.unit = target->unit();
      survey.universe = target->universe();
      for (const auto& t : target->terms()) survey.term_order.push_back(t.label);
      survey.samples = io::load_survey_csv(survey_path);
      const LinguisticVariable built = build_partition(survey);
      for (const auto& f : validate_partition(built)) {
        err << "warning: " << f.code << ": " << f.detail << "\n";
      }
      out << io::variable_to_string(built);
      return 0;
    }

    if (validate_cmd->parsed()) {
      int findings = 0;
      const InferenceEngine engine = detail::build_engine(opt);
      for (const auto* v : {&engine.inputs()[0], &engine.inputs()[1], &engine.output()}) {
        const auto fs = validate_partition(*v);
        if (fs.empty()) {
          out << "variable " << v->name() << ": ok\n";
        } else {
          for (const auto& f : fs) {
            out << "variable " << v->name() << ": " << f.code << ": " << f.detail << "\n";
          }
          findings += static_cast<int>(fs.size());
        }
      }
      out << "rule base: ok (" << engine.rules().size() << " rules)\n";
      const auto violations =
          rule_monotonicity_violations(engine, kFailureRateVar, kExecutionTimeVar);
      if (violations.empty()) {
        out << "rule table monotonicity: ok\n";
      } else {
        for (const auto& v : violations) out << "rule table monotonicity: " << v << "\n";
        findings += static_cast<int>(violations.size());
      }
      const auto dataset = detail::build_dataset(opt);
      out << "dataset: ok (" << dataset.size() << " tests)\n";
      return findings == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace testprio::cli
