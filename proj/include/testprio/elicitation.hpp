#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "testprio/variable.hpp"

namespace testprio {

// One Direct Rating judgment: an expert files a universe value under a term.
struct RatingSample {
  std::string expert;
  double value = 0.0;
  std::string term;
};

struct Survey {
  std::string variable;
  std::string unit;
  Interval universe;
  std::vector<std::string> term_order;  // low to high
  std::vector<RatingSample> samples;
};

// Linear interpolation between order statistics; values must be sorted.
inline double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of empty sample");
  if (sorted.size() == 1) return sorted.front();
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(rank);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct Finding {
  std::string code;
  std::string detail;
};

// Partition health checks: coverage over the whole universe, term peaks in
// rank order, positive overlap between adjacent terms. Returns findings
// instead of throwing so defective partitions can be reported whole.
inline std::vector<Finding> validate_partition(const LinguisticVariable& variable) {
  std::vector<Finding> findings;
  const auto& terms = variable.terms();
  const Interval u = variable.universe();

  for (std::size_t i = 1; i < terms.size(); ++i) {
    const Interval prev = terms[i - 1].mf.core();
    const Interval cur = terms[i].mf.core();
    const double prev_peak = 0.5 * (prev.lo + prev.hi);
    const double cur_peak = 0.5 * (cur.lo + cur.hi);
    if (cur_peak < prev_peak) {
      std::ostringstream os;
      os << "term " << terms[i].label << " peaks at " << cur_peak << ", before "
         << terms[i - 1].label << " at " << prev_peak;
      findings.push_back({"order violation", os.str()});
    }
  }

  for (std::size_t i = 1; i < terms.size(); ++i) {
    const Interval a = terms[i - 1].mf.support();
    const Interval b = terms[i].mf.support();
    if (!(b.lo < a.hi)) {
      findings.push_back({"no overlap", "terms " + terms[i - 1].label + " and " +
                                            terms[i].label + " do not overlap"});
    }
  }

  const int samples = 4096;
  double gap_start = 0.0;
  bool in_gap = false;
  for (int k = 0; k <= samples; ++k) {
    const double x = u.lo + u.width() * k / samples;
    double best = 0.0;
    for (const auto& t : terms) best = std::max(best, t.mf.evaluate(x));
    if (best <= 0.0 && !in_gap) {
      in_gap = true;
      gap_start = x;
    } else if (best > 0.0 && in_gap) {
      in_gap = false;
      std::ostringstream os;
      os << "no membership on approximately [" << gap_start << ", " << x << "]";
      findings.push_back({"coverage gap", os.str()});
    }
  }
  if (in_gap) {
    std::ostringstream os;
    os << "no membership on approximately [" << gap_start << ", " << u.hi << "]";
    findings.push_back({"coverage gap", os.str()});
  }
  return findings;
}

// Direct Rating aggregation: each term's core is the interquartile range of
// its samples, supports reach to the neighboring cores, and the outer terms
// are shouldered onto the universe ends. Emits trapezoids, collapsed to
// triangles when the core degenerates to a point.
inline LinguisticVariable build_partition(const Survey& survey) {
  if (survey.term_order.empty()) throw std::invalid_argument("survey has no terms");
  std::map<std::string, std::vector<double>> values;
  for (const auto& s : survey.samples) {
    if (std::find(survey.term_order.begin(), survey.term_order.end(), s.term) ==
        survey.term_order.end()) {
      throw std::invalid_argument("unknown term in survey: " + s.term);
    }
    if (!survey.universe.contains(s.value)) {
      std::ostringstream os;
      os << "sample " << s.value << " outside universe of " << survey.variable;
      throw std::invalid_argument(os.str());
    }
    values[s.term].push_back(s.value);
  }

  const std::size_t n = survey.term_order.size();
  std::vector<double> q25(n), q75(n), median(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = values.find(survey.term_order[i]);
    if (it == values.end() || it->second.empty()) {
      throw std::invalid_argument("term has no samples: " + survey.term_order[i]);
    }
    std::sort(it->second.begin(), it->second.end());
    q25[i] = percentile(it->second, 25.0);
    q75[i] = percentile(it->second, 75.0);
    median[i] = percentile(it->second, 50.0);
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(median[i - 1] < median[i])) {
      throw std::invalid_argument("inconsistent survey: median of " +
                                  survey.term_order[i - 1] + " not below median of " +
                                  survey.term_order[i]);
    }
  }

  // Cores; the first and last term shoulder onto the universe ends.
  std::vector<double> core_lo(n), core_hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    core_lo[i] = (i == 0) ? survey.universe.lo : q25[i];
    core_hi[i] = (i + 1 == n) ? survey.universe.hi : q75[i];
  }

  auto build_terms = [&](double widen) {
    std::vector<FuzzyTerm> terms;
    for (std::size_t i = 0; i < n; ++i) {
      double a = (i == 0) ? survey.universe.lo : core_hi[i - 1] - widen;
      double d = (i + 1 == n) ? survey.universe.hi : core_lo[i + 1] + widen;
      a = std::max(survey.universe.lo, std::min(a, core_lo[i]));
      d = std::min(survey.universe.hi, std::max(d, core_hi[i]));
      if (core_lo[i] == core_hi[i]) {
        terms.push_back(
            {survey.term_order[i], MembershipFunction::triangular(a, core_lo[i], d)});
      } else {
        terms.push_back({survey.term_order[i], MembershipFunction::trapezoidal(
                                                   a, core_lo[i], core_hi[i], d)});
      }
    }
    return terms;
  };

  // Cores tile the universe, so coverage normally holds at once; the
  // widening loop is the documented fallback for degenerate surveys.
  double widen = 0.0;
  const double step = survey.universe.width() / 100.0;
  for (int attempt = 0; attempt < 100; ++attempt) {
    LinguisticVariable candidate(survey.variable, survey.unit, survey.universe,
                                 build_terms(widen));
    bool gap = false;
    for (const auto& f : validate_partition(candidate)) {
      if (f.code == "coverage gap") {
        gap = true;
        break;
      }
    }
    if (!gap) return candidate;
    widen += step;
  }
  throw std::runtime_error("could not build a covering partition from survey");
}

}  // namespace testprio
