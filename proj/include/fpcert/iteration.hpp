#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fpcert/certificate.hpp"
#include "fpcert/metric_space.hpp"
#include "fpcert/report.hpp"

namespace fpcert {

struct IterationConfig {
  std::size_t max_iter = 10000;
  double residual_tol = 1e-12;
  std::size_t cauchy_window = 16;
  double cauchy_tol = 1e-10;
  double divergence_bound = 1e12;
};

inline void validate(const IterationConfig& c) {
  if (c.max_iter == 0 || c.cauchy_window == 0) {
    throw std::invalid_argument("iteration config: counts must be positive");
  }
  if (!(c.residual_tol > 0.0) || !(c.cauchy_tol > 0.0) ||
      !(c.divergence_bound > 0.0)) {
    throw std::invalid_argument(
        "iteration config: tolerances must be positive");
  }
  if (!(c.cauchy_window < c.max_iter)) {
    throw std::invalid_argument(
        "iteration config: cauchy_window must be below max_iter");
  }
}

enum class TraceVerdict {
  converged,
  cauchy_failed,
  diverged,
  budget_exhausted,
  map_error
};

inline const char* to_string(TraceVerdict v) {
  switch (v) {
    case TraceVerdict::converged: return "converged";
    case TraceVerdict::cauchy_failed: return "cauchy_failed";
    case TraceVerdict::diverged: return "diverged";
    case TraceVerdict::budget_exhausted: return "budget_exhausted";
    case TraceVerdict::map_error: return "map_error";
  }
  return "unknown";
}

// Number of most recent orbit points always retained, even past the point
// cap, so tail diagnostics stay available for long runs.
inline constexpr std::size_t kTraceTailRetention = 64;

struct IterationTrace {
  std::vector<Point> points;           // x0, x1, ... up to kTracePointCap
  std::vector<double> step_distances;  // a_n = d(x_n, x_{n+1}), full length
  std::vector<Point> tail_points;      // last kTraceTailRetention points
  TraceVerdict verdict = TraceVerdict::budget_exhausted;
  std::optional<Point> limit;
  double final_residual = quiet_nan();
  std::size_t iterations_used = 0;  // recorded steps
  IterationConfig config;
  MetricSpaceHandle space;
  std::string note;

  explicit IterationTrace(MetricSpaceHandle s) : space(std::move(s)) {}

  // Last `count` points in orbit order, served from the tail ring when the
  // point cap truncated the main storage.
  std::vector<Point> last_points(std::size_t count) const {
    const std::vector<Point>& source =
        points.size() == iterations_used + 1 ? points : tail_points;
    if (count > source.size()) {
      throw std::invalid_argument(
          "trace: requested window exceeds retained points");
    }
    return {source.end() - static_cast<std::ptrdiff_t>(count), source.end()};
  }
};

namespace detail {

inline void push_tail(std::vector<Point>& tail, const Point& p) {
  tail.push_back(p);
  if (tail.size() > kTraceTailRetention) tail.erase(tail.begin());
}

inline bool finite_point(const Point& p) {
  for (double c : p) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

inline double max_abs_coord(const Point& p) {
  double m = 0.0;
  for (double c : p) m = std::max(m, std::fabs(c));
  return m;
}

// Max pairwise distance among the given points.
inline double point_spread(const MetricSpaceHandle& space,
                           const std::vector<Point>& pts) {
  double spread = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      spread = std::max(spread, distance(space, pts[i], pts[j]));
    }
  }
  return spread;
}

}  // namespace detail

// Runs the successive-approximation orbit x, Tx, T^2 x, ... until the step
// distance drops below residual_tol (confirmed by the residual at the
// candidate limit), a coordinate leaves the divergence bound, the map errors
// out, or the budget runs out. Cycling tails are classified cauchy_failed.
inline IterationTrace picard_iterate(const MapUnderTest& map, const Point& x0,
                                     const IterationConfig& config = {}) {
  validate(config);
  if (!map.space.contains(x0)) {
    throw std::invalid_argument("picard_iterate: start outside the domain");
  }

  IterationTrace trace(map.space);
  trace.config = config;
  trace.points.push_back(x0);
  detail::push_tail(trace.tail_points, x0);

  Point current = x0;
  for (std::size_t n = 0; n < config.max_iter; ++n) {
    Point next;
    try {
      next = map(current);
    } catch (const std::exception& e) {
      trace.verdict = TraceVerdict::map_error;
      trace.note = std::string("map threw at iteration ") +
                   std::to_string(n) + ": " + e.what();
      return trace;
    }
    if (!detail::finite_point(next)) {
      trace.verdict = TraceVerdict::diverged;
      trace.note =
          "non-finite coordinate at iteration " + std::to_string(n + 1);
      return trace;
    }
    if (!map.space.contains(next)) {
      trace.verdict = TraceVerdict::map_error;
      trace.note = "map left the declared domain at iteration " +
                   std::to_string(n + 1);
      return trace;
    }

    const double step = distance(map.space, current, next);
    trace.step_distances.push_back(step);
    ++trace.iterations_used;
    if (trace.points.size() < kTracePointCap) trace.points.push_back(next);
    detail::push_tail(trace.tail_points, next);

    if (detail::max_abs_coord(next) > config.divergence_bound) {
      trace.verdict = TraceVerdict::diverged;
      return trace;
    }

    if (step == 0.0) {
      trace.verdict = TraceVerdict::converged;
      trace.limit = next;
      Point confirm;
      try {
        confirm = map(next);
        trace.final_residual = distance(map.space, next, confirm);
      } catch (const std::exception&) {
        trace.final_residual = quiet_nan();
      }
      return trace;
    }

    if (step < config.residual_tol) {
      // Confirm with the residual at the candidate; on a miss the computed
      // point simply becomes the next iterate.
      Point confirm;
      try {
        confirm = map(next);
      } catch (const std::exception& e) {
        trace.verdict = TraceVerdict::map_error;
        trace.note = std::string("map threw during confirmation: ") + e.what();
        return trace;
      }
      if (!detail::finite_point(confirm) || !map.space.contains(confirm)) {
        trace.verdict = TraceVerdict::map_error;
        trace.note = "confirmation point left the domain";
        return trace;
      }
      const double residual = distance(map.space, next, confirm);
      if (residual < 10.0 * config.residual_tol) {
        trace.verdict = TraceVerdict::converged;
        trace.limit = next;
        trace.final_residual = residual;
        return trace;
      }
      trace.step_distances.push_back(residual);
      ++trace.iterations_used;
      if (trace.points.size() < kTracePointCap) trace.points.push_back(confirm);
      detail::push_tail(trace.tail_points, confirm);
      current = confirm;
      ++n;
      continue;
    }
    current = next;
  }

  // Budget exhausted: distinguish a short-period cycle from a wandering or
  // slowly settling tail.
  const std::size_t window =
      std::min<std::size_t>(trace.config.cauchy_window + 3,
                            trace.tail_points.size());
  if (window >= 5) {
    const std::vector<Point> tail = trace.last_points(window);
    const double spread = detail::point_spread(trace.space, tail);
    if (spread > config.cauchy_tol) {
      for (std::size_t period = 2; period <= 3; ++period) {
        bool cycles = tail.size() > period;
        for (std::size_t i = period; i < tail.size(); ++i) {
          if (distance(trace.space, tail[i], tail[i - period]) >=
              config.cauchy_tol) {
            cycles = false;
            break;
          }
        }
        if (cycles) {
          trace.verdict = TraceVerdict::cauchy_failed;
          trace.note =
              "tail repeats with period " + std::to_string(period) +
              " while the tail spread stays above cauchy_tol";
          return trace;
        }
      }
    }
  }
  trace.verdict = TraceVerdict::budget_exhausted;
  return trace;
}

struct CauchyDiagnostics {
  bool is_cauchy = false;
  double tail_spread = quiet_nan();
  double tail_step_sum = quiet_nan();
  std::size_t window = 0;
};

// Max pairwise distance among the last `window` orbit points against tol.
inline CauchyDiagnostics detect_cauchy(const IterationTrace& trace,
                                       std::size_t window, double tol) {
  if (window < 2) {
    throw std::invalid_argument("detect_cauchy: window must be at least 2");
  }
  if (trace.iterations_used + 1 <= window) {
    throw std::invalid_argument("detect_cauchy: trace shorter than window");
  }
  CauchyDiagnostics diag;
  diag.window = window;
  diag.tail_spread = detail::point_spread(trace.space,
                                          trace.last_points(window));
  double sum = 0.0;
  for (std::size_t i = trace.step_distances.size() - (window - 1);
       i < trace.step_distances.size(); ++i) {
    sum += trace.step_distances[i];
  }
  diag.tail_step_sum = sum;
  diag.is_cauchy = diag.tail_spread < tol;
  return diag;
}

// For orbits of contractive maps the step distances strictly decrease while
// positive; steps at or below the vacuity threshold are excluded.
inline CheckReport check_step_monotonicity(const IterationTrace& trace) {
  CheckReport report;
  report.certificate_kind = "step_monotonicity";
  report.sample_size = trace.step_distances.size();

  ConditionResult c{.name = "strictly_decreasing_steps"};
  double min_decrement = infinity();
  std::size_t compared = 0;
  for (std::size_t n = 1; n < trace.step_distances.size(); ++n) {
    const double prev = trace.step_distances[n - 1];
    const double cur = trace.step_distances[n];
    if (prev <= kMinPositiveDistance || cur <= kMinPositiveDistance) continue;
    ++compared;
    if (!(cur < prev)) {
      c = make_fail("strictly_decreasing_steps",
                    Witness{"step distance did not decrease",
                            {},
                            {prev, cur},
                            {static_cast<std::ptrdiff_t>(n)}},
                    prev - cur);
      report.conditions.push_back(std::move(c));
      return report;
    }
    min_decrement = std::min(min_decrement, prev - cur);
  }
  if (compared == 0) {
    c.note = "vacuous: no consecutive positive steps";
  } else {
    apply_strict_gap(c, min_decrement);
  }
  report.conditions.push_back(std::move(c));
  return report;
}

// Tail maximum of the step distances must drop below the trace's own
// cauchy_tol; vanishing steps are necessary but not sufficient for Cauchy.
inline CheckReport check_step_limit_zero(const IterationTrace& trace,
                                         std::size_t tail) {
  if (tail == 0 || trace.step_distances.size() < 2 * tail) {
    throw std::invalid_argument(
        "check_step_limit_zero: trace shorter than twice the tail");
  }
  CheckReport report;
  report.certificate_kind = "step_limit_zero";
  report.sample_size = tail;

  double tail_max = 0.0;
  for (std::size_t i = trace.step_distances.size() - tail;
       i < trace.step_distances.size(); ++i) {
    tail_max = std::max(tail_max, trace.step_distances[i]);
  }
  ConditionResult c{.name = "tail_steps_vanish"};
  c.note = "tail max " + fmt_double(tail_max) + " vs tolerance " +
           fmt_double(trace.config.cauchy_tol);
  const double gap = trace.config.cauchy_tol - tail_max;
  if (!(gap > 0.0)) {
    c = make_fail("tail_steps_vanish",
                  Witness{"tail step exceeds tolerance", {}, {tail_max}, {}},
                  gap);
  } else {
    c.margin = gap;
  }
  report.conditions.push_back(std::move(c));
  return report;
}

// Geometric mean of consecutive step ratios over the trailing positive
// steps; for a Banach-class map this estimates the contraction factor.
inline double estimate_rate(const IterationTrace& trace, std::size_t tail) {
  const auto& a = trace.step_distances;
  std::vector<double> ratios;
  for (std::size_t i = a.size(); i-- > 1 && ratios.size() < tail;) {
    if (a[i] <= kMinPositiveDistance || a[i - 1] <= kMinPositiveDistance)
      break;
    ratios.push_back(a[i] / a[i - 1]);
  }
  if (ratios.empty()) {
    throw std::invalid_argument(
        "estimate_rate: need at least two consecutive positive steps");
  }
  double log_sum = 0.0;
  for (double r : ratios) log_sum += std::log(r);
  return std::exp(log_sum / static_cast<double>(ratios.size()));
}

// Runs the orbit from every start; all must converge and agree on the limit.
// A converged orbit can still sit final_residual/(1-rate) away from the true
// fixed point, so the agreement allowance scales with each orbit's tail rate
// instead of the residual tolerance alone.
inline CheckReport uniqueness_probe(const MapUnderTest& map,
                                    const std::vector<Point>& starts,
                                    const IterationConfig& config = {}) {
  if (starts.size() < 2) {
    throw std::invalid_argument("uniqueness_probe: need at least two starts");
  }
  CheckReport report;
  report.certificate_kind = "uniqueness_probe";
  report.sample_size = starts.size();

  std::string start_list;
  for (const auto& s : starts) {
    if (!start_list.empty()) start_list += " ";
    start_list += fmt_point(s);
  }

  std::vector<Point> limits;
  std::vector<double> limit_bounds;
  ConditionResult conv{.name = "all_starts_converged"};
  conv.note = "starts: " + start_list;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    IterationTrace trace = picard_iterate(map, starts[i], config);
    if (trace.verdict != TraceVerdict::converged) {
      conv = make_fail(
          "all_starts_converged",
          Witness{std::string("orbit did not converge (") +
                      to_string(trace.verdict) + ")",
                  {starts[i]},
                  {},
                  {static_cast<std::ptrdiff_t>(i)}},
          quiet_nan());
      conv.note = "starts: " + start_list;
      break;
    }
    limits.push_back(*trace.limit);
    double rate = 0.0;
    try {
      rate = std::clamp(estimate_rate(trace, 8), 0.0, 0.99);
    } catch (const std::invalid_argument&) {
      rate = 0.0;  // superlinear or immediate stop: residual alone bounds it
    }
    const double res = std::isfinite(trace.final_residual)
                           ? trace.final_residual
                           : config.residual_tol;
    limit_bounds.push_back(res / (1.0 - rate));
  }

  ConditionResult common{.name = "common_limit"};
  if (conv.verdict != Verdict::pass) {
    common.verdict = Verdict::inapplicable;
    common.note = "not all starts converged";
  } else {
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_spread = 0.0;
    std::size_t wi = 0, wj = 1;
    for (std::size_t i = 0; i < limits.size(); ++i) {
      for (std::size_t j = i + 1; j < limits.size(); ++j) {
        const double d = distance(map.space, limits[i], limits[j]);
        const double allowance =
            10.0 * std::max(config.residual_tol,
                            limit_bounds[i] + limit_bounds[j]);
        if (allowance - d < worst_margin) {
          worst_margin = allowance - d;
          worst_spread = d;
          wi = i;
          wj = j;
        }
      }
    }
    common.note = "limit spread " + fmt_double(worst_spread);
    if (worst_margin < 0.0) {
      common = make_fail("common_limit",
                         Witness{"limits from different starts disagree",
                                 {limits[wi], limits[wj]},
                                 {worst_spread},
                                 {static_cast<std::ptrdiff_t>(wi),
                                  static_cast<std::ptrdiff_t>(wj)}},
                         worst_margin);
    } else {
      common.margin = worst_margin;
    }
  }
  report.conditions.push_back(std::move(conv));
  report.conditions.push_back(std::move(common));
  return report;
}

inline double fixed_point_residual(const MapUnderTest& map, const Point& u) {
  if (!map.space.contains(u)) {
    throw std::invalid_argument("fixed_point_residual: point outside domain");
  }
  return distance(map.space, u, map(u));
}

// CSV export: one row per retained point with its outgoing step distance and
// residual; the final row carries the confirmation residual when available.
inline void trace_to_csv(const IterationTrace& trace, std::ostream& out) {
  out << "# fpcert trace v1\n";
  out << "n";
  for (std::size_t i = 1; i <= trace.space.dimension(); ++i) {
    out << ",x" << i;
  }
  out << ",step_distance,residual\n";
  for (std::size_t n = 0; n < trace.points.size(); ++n) {
    out << n;
    for (double c : trace.points[n]) out << "," << fmt_double(c);
    const bool has_step = n < trace.step_distances.size();
    const double step = has_step ? trace.step_distances[n] : quiet_nan();
    const double residual =
        has_step ? step
                 : (trace.limit ? trace.final_residual : quiet_nan());
    out << "," << fmt_double(step) << "," << fmt_double(residual) << "\n";
  }
  out << "# verdict," << to_string(trace.verdict) << ","
      << trace.iterations_used << "\n";
}

}  // namespace fpcert
