#pragma once

#include <string>
#include <vector>

#include "testprio/inference.hpp"
#include "testprio/tcp.hpp"
#include "testprio/variable.hpp"

// Bundled defaults: the fuzzy partitions, the expert rule base, and the
// e-commerce sample suite. Identical copies ship as data files under data/;
// the loaders are exercised against these in the test suite.

namespace testprio {

inline LinguisticVariable default_execution_time() {
  return LinguisticVariable(
      kExecutionTimeVar, "seconds", {0.0, 120.0},
      {
          {"Short", MembershipFunction::trapezoidal(0, 0, 10, 20)},
          {"Medium", MembershipFunction::triangular(10, 25, 40)},
          {"High", MembershipFunction::triangular(30, 50, 70)},
          {"VeryHigh", MembershipFunction::trapezoidal(60, 80, 120, 120)},
      });
}

inline LinguisticVariable default_failure_rate() {
  return LinguisticVariable(
      kFailureRateVar, "percent", {0.0, 100.0},
      {
          {"VeryLow", MembershipFunction::trapezoidal(0, 0, 5, 15)},
          {"Low", MembershipFunction::triangular(5, 15, 30)},
          {"Medium", MembershipFunction::triangular(20, 35, 50)},
          {"High", MembershipFunction::triangular(40, 55, 70)},
          {"VeryHigh", MembershipFunction::trapezoidal(60, 75, 100, 100)},
      });
}

inline LinguisticVariable default_priority() {
  return LinguisticVariable(
      "priority", "percent", {0.0, 100.0},
      {
          {"VeryLow", MembershipFunction::trapezoidal(0, 0, 10, 25)},
          {"Low", MembershipFunction::triangular(10, 25, 40)},
          {"Medium", MembershipFunction::triangular(30, 50, 70)},
          {"High", MembershipFunction::triangular(60, 75, 90)},
          {"VeryHigh", MembershipFunction::trapezoidal(80, 90, 100, 100)},
      });
}

// The twenty expert rules, in their published order.
inline RuleBase default_rule_base() {
  auto rule = [](const char* time, const char* rate, const char* priority) {
    return FuzzyRule{{{kExecutionTimeVar, time}, {kFailureRateVar, rate}},
                     {"priority", priority}};
  };
  return RuleBase({
      rule("High", "VeryLow", "VeryLow"),      // 1
      rule("VeryHigh", "VeryLow", "VeryLow"),  // 2
      rule("Short", "VeryLow", "Low"),         // 3
      rule("Medium", "VeryLow", "Low"),        // 4
      rule("High", "Low", "Low"),              // 5
      rule("VeryHigh", "Low", "Low"),          // 6
      rule("High", "Medium", "Low"),           // 7
      rule("VeryHigh", "Medium", "Low"),       // 8
      rule("Short", "Low", "Medium"),          // 9
      rule("Medium", "Low", "Medium"),         // 10
      rule("Short", "Medium", "Medium"),       // 11
      rule("Medium", "Medium", "Medium"),      // 12
      rule("High", "High", "Medium"),          // 13
      rule("VeryHigh", "High", "Medium"),      // 14
      rule("Short", "High", "High"),           // 15
      rule("Medium", "High", "High"),          // 16
      rule("High", "VeryHigh", "High"),        // 17
      rule("VeryHigh", "VeryHigh", "High"),    // 18
      rule("Short", "VeryHigh", "VeryHigh"),   // 19
      rule("Medium", "VeryHigh", "VeryHigh"),  // 20
  });
}

inline InferenceEngine default_engine(int resolution = kDefaultResolution) {
  return InferenceEngine({default_execution_time(), default_failure_rate()},
                         default_priority(), default_rule_base(), resolution);
}

// Twenty-test e-commerce regression suite. "1 / 2" style alternatives are
// OR-groups; "10, 11" style lists are separate groups (AND).
inline std::vector<TestCase> sample_dataset() {
  return {
      {1, "Log in email", 10, 20, {{3}}, false},
      {2, "Log in phone", 15, 28, {{3}}, true},
      {3, "Register", 45, 40, {}, false},
      {4, "Open profile", 5, 5, {{1}}, false},
      {5, "Log Out", 5, 2, {{1, 2}}, false},
      {6, "Retrieve main page", 5, 60, {}, false},
      {7, "Open Category", 10, 20, {}, false},
      {8, "Search item", 15, 17, {}, false},
      {9, "Retrieve item page", 10, 15, {{8}}, true},
      {10, "Add to cart", 15, 5, {{9}}, false},
      {11, "Open Cart", 5, 11, {}, false},
      {12, "Cart Update", 20, 11, {{10}, {11}}, false},
      {13, "Remove from Cart", 10, 5, {{10}}, false},
      {14, "Add to favorites", 20, 1, {}, false},
      {15, "Retrieve favorites", 15, 18, {}, false},
      {16, "Compare items", 40, 38, {}, false},
      {17, "Checkout", 80, 46, {{10}}, false},
      {18, "Track order", 30, 14, {{17}}, false},
      {19, "Cancel Order", 50, 6, {{17}}, false},
      {20, "Refund order", 90, 37, {{17}}, false},
  };
}

}  // namespace testprio
