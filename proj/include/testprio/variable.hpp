#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "testprio/membership.hpp"

namespace testprio {

// A labeled fuzzy set within a linguistic variable.
struct FuzzyTerm {
  std::string label;
  MembershipFunction mf;

  bool operator==(const FuzzyTerm&) const = default;
};

// A named universe interval with an ordered fuzzy partition. Term order is
// the semantic rank, low to high. Immutable after construction.
class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, std::string unit, Interval universe,
                     std::vector<FuzzyTerm> terms)
      : name_(std::move(name)),
        unit_(std::move(unit)),
        universe_(universe),
        terms_(std::move(terms)) {
    if (name_.empty()) throw std::invalid_argument("variable name is empty");
    if (!(universe_.lo < universe_.hi)) throw std::invalid_argument("invalid universe");
    if (terms_.empty()) throw std::invalid_argument("variable has no terms");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].label.empty()) throw std::invalid_argument("term label is empty");
      for (std::size_t j = 0; j < i; ++j) {
        if (terms_[j].label == terms_[i].label) {
          throw std::invalid_argument("duplicate term label: " + terms_[i].label);
        }
      }
      const Interval s = terms_[i].mf.support();
      if (s.lo < universe_.lo || s.hi > universe_.hi) {
        throw std::invalid_argument("term support outside universe: " + terms_[i].label);
      }
    }
  }

  const std::string& name() const { return name_; }
  const std::string& unit() const { return unit_; }
  Interval universe() const { return universe_; }
  const std::vector<FuzzyTerm>& terms() const { return terms_; }

  const FuzzyTerm* find(const std::string& label) const {
    for (const auto& t : terms_) {
      if (t.label == label) return &t;
    }
    return nullptr;
  }

  // Rank of a term in the partition (0 = lowest), or -1 if unknown.
  int rank_of(const std::string& label) const {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].label == label) return static_cast<int>(i);
    }
    return -1;
  }

  double clamp(double x) const {
    return std::min(std::max(x, universe_.lo), universe_.hi);
  }

  // Crisp value -> per-term membership degrees, in term order. The input is
  // clamped to the universe; callers that care about clamping check first.
  std::vector<std::pair<std::string, double>> fuzzify(double x) const {
    if (!std::isfinite(x)) throw std::invalid_argument("invalid input value");
    const double cx = clamp(x);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      out.emplace_back(t.label, t.mf.evaluate(cx));
    }
    return out;
  }

  // Term with the highest membership at x; ties go to the higher rank.
  const FuzzyTerm& argmax_term(double x) const {
    const double cx = clamp(x);
    std::size_t best = 0;
    double best_mu = terms_[0].mf.evaluate(cx);
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      const double mu = terms_[i].mf.evaluate(cx);
      if (mu >= best_mu) {
        best = i;
        best_mu = mu;
      }
    }
    return terms_[best];
  }

  bool operator==(const LinguisticVariable&) const = default;

 private:
  std::string name_;
  std::string unit_;
  Interval universe_;
  std::vector<FuzzyTerm> terms_;
};

inline std::vector<std::pair<std::string, double>> fuzzify(const LinguisticVariable& v,
                                                           double x) {
  return v.fuzzify(x);
}

}  // namespace testprio
