#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fpcert/common.hpp"

namespace fpcert {

// Closed coordinate interval; the upper end may be +infinity.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct Euclidean {};
struct SupMetric {};
struct PMetric {
  double p = 2.0;  // requires p >= 1
};
struct DiscreteMetric {};
struct WeightedSup {
  std::vector<double> weights;  // positive, one per coordinate
};
// Escape hatch for gating user-defined distances through
// check_metric_axioms; not exposed through the CLI.
struct CustomMetric {
  std::function<double(const Point&, const Point&)> fn;
  std::string label = "custom";
};

using MetricKind =
    std::variant<Euclidean, SupMetric, PMetric, DiscreteMetric, WeightedSup,
                 CustomMetric>;

inline std::string metric_kind_name(const MetricKind& kind) {
  struct Namer {
    std::string operator()(const Euclidean&) const { return "euclidean"; }
    std::string operator()(const SupMetric&) const { return "sup"; }
    std::string operator()(const PMetric& m) const {
      return "p_metric(p=" + fmt_double(m.p) + ")";
    }
    std::string operator()(const DiscreteMetric&) const { return "discrete"; }
    std::string operator()(const WeightedSup&) const { return "weighted_sup"; }
    std::string operator()(const CustomMetric& m) const { return m.label; }
  };
  return std::visit(Namer{}, kind);
}

class MetricSpaceHandle {
 public:
  MetricSpaceHandle() = default;

  MetricSpaceHandle(std::vector<Interval> bounds, MetricKind kind,
                    bool completeness_declared = true,
                    double sampling_reach = kDefaultReach)
      : bounds_(std::move(bounds)),
        kind_(std::move(kind)),
        completeness_declared_(completeness_declared),
        sampling_reach_(sampling_reach) {
    if (bounds_.empty()) {
      throw std::invalid_argument("metric space: dimension must be positive");
    }
    for (const auto& b : bounds_) {
      if (!std::isfinite(b.lower)) {
        throw std::invalid_argument("metric space: lower bound must be finite");
      }
      if (std::isnan(b.upper) || b.upper < b.lower) {
        throw std::invalid_argument(
            "metric space: bounds require lower <= upper");
      }
    }
    if (const auto* pm = std::get_if<PMetric>(&kind_)) {
      if (!(pm->p >= 1.0)) {
        throw std::invalid_argument("p_metric: exponent must satisfy p >= 1");
      }
    }
    if (const auto* ws = std::get_if<WeightedSup>(&kind_)) {
      if (ws->weights.size() != bounds_.size()) {
        throw std::invalid_argument(
            "weighted_sup: one weight per coordinate required");
      }
      for (double w : ws->weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
          throw std::invalid_argument("weighted_sup: weights must be positive");
        }
      }
    }
    if (!(sampling_reach_ > 0.0)) {
      throw std::invalid_argument("metric space: reach must be positive");
    }
  }

  std::size_t dimension() const { return bounds_.size(); }
  const std::vector<Interval>& bounds() const { return bounds_; }
  const MetricKind& metric() const { return kind_; }
  bool completeness_declared() const { return completeness_declared_; }
  double sampling_reach() const { return sampling_reach_; }

  MetricSpaceHandle with_reach(double reach) const {
    MetricSpaceHandle s = *this;
    s.sampling_reach_ = reach;
    return s;
  }

  bool contains(const Point& x) const {
    if (x.size() != bounds_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i])) return false;
      if (x[i] < bounds_[i].lower || x[i] > bounds_[i].upper) return false;
    }
    return true;
  }

  // Interval actually sampled on axis i: unbounded axes are clipped to
  // [lower, lower + reach].
  Interval sampling_interval(std::size_t i) const {
    const Interval& b = bounds_.at(i);
    if (std::isinf(b.upper)) return {b.lower, b.lower + sampling_reach_};
    return b;
  }

 private:
  std::vector<Interval> bounds_;
  MetricKind kind_ = Euclidean{};
  bool completeness_declared_ = true;
  double sampling_reach_ = kDefaultReach;
};

// 1-D interval with the absolute-value metric.
inline MetricSpaceHandle make_interval_space(double lower, double upper,
                                             bool complete = true,
                                             double reach = kDefaultReach) {
  return MetricSpaceHandle({Interval{lower, upper}}, Euclidean{}, complete,
                           reach);
}

inline MetricSpaceHandle make_box_space(std::size_t dimension, double lower,
                                        double upper, MetricKind kind,
                                        bool complete = true,
                                        double reach = kDefaultReach) {
  return MetricSpaceHandle(
      std::vector<Interval>(dimension, Interval{lower, upper}),
      std::move(kind), complete, reach);
}

namespace detail {

inline void require_valid_pair(const MetricSpaceHandle& space, const Point& x,
                               const Point& y) {
  if (x.size() != space.dimension() || y.size() != space.dimension()) {
    throw std::invalid_argument("distance: dimension mismatch");
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("distance: non-finite coordinate");
    }
  }
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("distance: non-finite coordinate");
    }
  }
}

}  // namespace detail

inline double distance(const MetricSpaceHandle& space, const Point& x,
                       const Point& y) {
  detail::require_valid_pair(space, x, y);
  struct Dist {
    const Point& x;
    const Point& y;
    double operator()(const Euclidean&) const {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = std::fabs(x[i] - y[i]);
        s += d * d;
      }
      return std::sqrt(s);
    }
    double operator()(const SupMetric&) const {
      double m = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        m = std::max(m, std::fabs(x[i] - y[i]));
      }
      return m;
    }
    double operator()(const PMetric& pm) const {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        s += std::pow(std::fabs(x[i] - y[i]), pm.p);
      }
      return std::pow(s, 1.0 / pm.p);
    }
    double operator()(const DiscreteMetric&) const {
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != y[i]) return 1.0;
      }
      return 0.0;
    }
    double operator()(const WeightedSup& ws) const {
      double m = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        m = std::max(m, ws.weights[i] * std::fabs(x[i] - y[i]));
      }
      return m;
    }
    double operator()(const CustomMetric& cm) const { return cm.fn(x, y); }
  };
  return std::visit(Dist{x, y}, space.metric());
}

// Triangle-inequality slack scaled to the largest distance in the triple.
inline double triangle_tolerance(double max_distance) {
  return 1e-12 * (1.0 + max_distance);
}

}  // namespace fpcert
