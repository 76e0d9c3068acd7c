#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace testprio {

// Closed interval [lo, hi] on a universe axis.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

enum class Shape { Triangular, Trapezoidal };

// Piecewise-linear membership function. Triangular(a,b,c) and
// Trapezoidal(a,b,c,d) are stored uniformly as (a,b,c,d) with b==c for
// triangles. Degenerate edges (a==b or c==d) are vertical shoulders.
class MembershipFunction {
 public:
  static MembershipFunction triangular(double a, double b, double c) {
    if (!(a <= b && b <= c)) {
      throw std::invalid_argument("triangular parameters must satisfy a <= b <= c");
    }
    return MembershipFunction(Shape::Triangular, a, b, b, c);
  }

  static MembershipFunction trapezoidal(double a, double b, double c, double d) {
    if (!(a <= b && b <= c && c <= d)) {
      throw std::invalid_argument("trapezoidal parameters must satisfy a <= b <= c <= d");
    }
    return MembershipFunction(Shape::Trapezoidal, a, b, c, d);
  }

  Shape shape() const { return shape_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  // Parameters as written in a definition file: 3 for triangular, 4 for
  // trapezoidal.
  std::vector<double> params() const {
    if (shape_ == Shape::Triangular) return {a_, b_, d_};
    return {a_, b_, c_, d_};
  }

  Interval support() const { return {a_, d_}; }
  Interval core() const { return {b_, c_}; }

  // Membership degree at x: 1 on the core, 0 outside the support, linear
  // interpolation on the edges.
  double evaluate(double x) const {
    if (!std::isfinite(x)) throw std::invalid_argument("invalid input value");
    if (x < a_ || x > d_) return 0.0;
    if (x >= b_ && x <= c_) return 1.0;
    if (x < b_) return (x - a_) / (b_ - a_);
    return (d_ - x) / (d_ - c_);
  }

  double operator()(double x) const { return evaluate(x); }

  bool operator==(const MembershipFunction&) const = default;

 private:
  MembershipFunction(Shape shape, double a, double b, double c, double d)
      : shape_(shape), a_(a), b_(b), c_(c), d_(d) {}

  Shape shape_;
  double a_, b_, c_, d_;
};

inline double eval_membership(const MembershipFunction& mf, double x) {
  return mf.evaluate(x);
}

// Crisp superlevel set {x : mu(x) >= alpha}: disjoint closed intervals,
// ascending. Empty only when alpha exceeds the peak membership.
struct AlphaCut {
  std::vector<Interval> intervals;

  bool empty() const { return intervals.empty(); }

  bool contains(double x) const {
    for (const auto& iv : intervals) {
      if (iv.contains(x)) return true;
    }
    return false;
  }

  bool operator==(const AlphaCut&) const = default;
};

namespace detail {
inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha out of range");
  }
}
}  // namespace detail

// Cut of a single triangular/trapezoidal shape: always one closed interval
// (the peak is 1, so the cut is never empty for alpha in (0,1]).
inline AlphaCut alpha_cut(const MembershipFunction& mf, double alpha) {
  detail::check_alpha(alpha);
  const double lo = mf.a() + alpha * (mf.b() - mf.a());
  const double hi = mf.d() - alpha * (mf.d() - mf.c());
  return AlphaCut{{Interval{lo, hi}}};
}

// Union of cut sets; touching intervals merge (closed sets).
inline AlphaCut unite(const AlphaCut& x, const AlphaCut& y) {
  std::vector<Interval> all = x.intervals;
  all.insert(all.end(), y.intervals.begin(), y.intervals.end());
  std::sort(all.begin(), all.end(),
            [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
  AlphaCut out;
  for (const auto& iv : all) {
    if (!out.intervals.empty() && iv.lo <= out.intervals.back().hi) {
      out.intervals.back().hi = std::max(out.intervals.back().hi, iv.hi);
    } else {
      out.intervals.push_back(iv);
    }
  }
  return out;
}

inline AlphaCut intersect(const AlphaCut& x, const AlphaCut& y) {
  AlphaCut out;
  for (const auto& p : x.intervals) {
    for (const auto& q : y.intervals) {
      const double lo = std::max(p.lo, q.lo);
      const double hi = std::min(p.hi, q.hi);
      if (lo <= hi) out.intervals.push_back(Interval{lo, hi});
    }
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
  return out;
}

// True when every interval of `inner` lies inside some interval of `outer`.
inline bool contained_in(const AlphaCut& inner, const AlphaCut& outer) {
  for (const auto& iv : inner.intervals) {
    bool covered = false;
    for (const auto& ov : outer.intervals) {
      if (ov.lo <= iv.lo && iv.hi <= ov.hi) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

}  // namespace testprio
