#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "testprio/membership.hpp"

namespace testprio {

// Explicit piecewise-linear function over a fixed span, represented by its
// breakpoints. Closed under pointwise max/min, which is what makes alpha-cut
// identities checkable in closed form.
class PiecewiseLinear {
 public:
  struct Point {
    double x;
    double y;
  };

  static PiecewiseLinear from(const MembershipFunction& mf, Interval span) {
    std::vector<double> xs{span.lo, mf.a(), mf.b(), mf.c(), mf.d(), span.hi};
    std::sort(xs.begin(), xs.end());
    std::vector<Point> pts;
    for (double x : xs) {
      if (x < span.lo || x > span.hi) continue;
      if (!pts.empty() && pts.back().x == x) continue;
      pts.push_back({x, mf.evaluate(x)});
    }
    return PiecewiseLinear(std::move(pts));
  }

  static PiecewiseLinear constant(double y, Interval span) {
    return PiecewiseLinear({{span.lo, y}, {span.hi, y}});
  }

  explicit PiecewiseLinear(std::vector<Point> pts) : pts_(std::move(pts)) {
    if (pts_.size() < 2) throw std::invalid_argument("piecewise function needs >= 2 points");
    for (std::size_t i = 1; i < pts_.size(); ++i) {
      if (pts_[i].x < pts_[i - 1].x) throw std::invalid_argument("points not sorted");
    }
  }

  Interval span() const { return {pts_.front().x, pts_.back().x}; }
  const std::vector<Point>& points() const { return pts_; }

  double evaluate(double x) const {
    if (x < pts_.front().x || x > pts_.back().x) return 0.0;
    auto it = std::lower_bound(pts_.begin(), pts_.end(), x,
                               [](const Point& p, double v) { return p.x < v; });
    if (it != pts_.end() && it->x == x) return it->y;
    const Point& q = *it;
    const Point& p = *(it - 1);
    return p.y + (x - p.x) * (q.y - p.y) / (q.x - p.x);
  }

  double operator()(double x) const { return evaluate(x); }

  // Pointwise max/min. Breakpoints of both operands are kept and crossing
  // points inserted, so the result is linear between consecutive points.
  PiecewiseLinear unite(const PiecewiseLinear& other) const {
    return combine(other, /*take_max=*/true);
  }

  PiecewiseLinear intersect(const PiecewiseLinear& other) const {
    return combine(other, /*take_max=*/false);
  }

  // min(f, height): the Mamdani implication step.
  PiecewiseLinear clip(double height) const {
    if (!(height >= 0.0 && height <= 1.0)) {
      throw std::invalid_argument("invalid clip height");
    }
    return intersect(constant(height, span()));
  }

  // {x : f(x) >= alpha} computed segment by segment.
  AlphaCut superlevel(double alpha) const {
    detail::check_alpha(alpha);
    AlphaCut out;
    auto push = [&out](double lo, double hi) {
      if (!out.intervals.empty() && lo <= out.intervals.back().hi) {
        out.intervals.back().hi = std::max(out.intervals.back().hi, hi);
      } else {
        out.intervals.push_back(Interval{lo, hi});
      }
    };
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
      const Point& p = pts_[i];
      const Point& q = pts_[i + 1];
      const bool pin = p.y >= alpha;
      const bool qin = q.y >= alpha;
      if (pin && qin) {
        push(p.x, q.x);
      } else if (pin && !qin) {
        push(p.x, crossing(p, q, alpha));
      } else if (!pin && qin) {
        push(crossing(p, q, alpha), q.x);
      }
    }
    return out;
  }

  // Midpoint samples over the span, matching the centroid integration grid.
  std::vector<std::pair<double, double>> sample(int resolution) const {
    if (resolution < 2) throw std::invalid_argument("invalid resolution");
    const Interval s = span();
    const double h = s.width() / resolution;
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
      const double x = s.lo + (i + 0.5) * h;
      out.emplace_back(x, evaluate(x));
    }
    return out;
  }

 private:
  static double crossing(const Point& p, const Point& q, double level) {
    return p.x + (level - p.y) * (q.x - p.x) / (q.y - p.y);
  }

  PiecewiseLinear combine(const PiecewiseLinear& other, bool take_max) const {
    if (!(span() == other.span())) throw std::invalid_argument("universe mismatch");
    std::vector<double> grid;
    grid.reserve(pts_.size() + other.pts_.size());
    for (const auto& p : pts_) grid.push_back(p.x);
    for (const auto& p : other.pts_) grid.push_back(p.x);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> xs;
    xs.reserve(grid.size() * 2);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      xs.push_back(grid[i]);
      const double d0 = evaluate(grid[i]) - other.evaluate(grid[i]);
      const double d1 = evaluate(grid[i + 1]) - other.evaluate(grid[i + 1]);
      if (d0 * d1 < 0.0) {
        const double t = d0 / (d0 - d1);
        xs.push_back(grid[i] + t * (grid[i + 1] - grid[i]));
      }
    }
    xs.push_back(grid.back());

    std::vector<Point> pts;
    pts.reserve(xs.size());
    for (double x : xs) {
      const double ya = evaluate(x);
      const double yb = other.evaluate(x);
      pts.push_back({x, take_max ? std::max(ya, yb) : std::min(ya, yb)});
    }
    return PiecewiseLinear(std::move(pts));
  }

  std::vector<Point> pts_;
};

// x -> max(f(x), g(x)); fuzzy-set union of membership-valued functions.
inline PiecewiseLinear pointwise_union(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  return f.unite(g);
}

// x -> min(f(x), g(x)); fuzzy-set intersection.
inline PiecewiseLinear pointwise_intersection(const PiecewiseLinear& f,
                                              const PiecewiseLinear& g) {
  return f.intersect(g);
}

inline PiecewiseLinear clip(const MembershipFunction& mf, double height, Interval span) {
  return PiecewiseLinear::from(mf, span).clip(height);
}

}  // namespace testprio
