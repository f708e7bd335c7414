#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fpcert/metric_space.hpp"
#include "fpcert/report.hpp"

namespace fpcert {

struct PairSampler {
  enum class Strategy { uniform_random, grid, boundary_biased, orbit_pairs };

  Strategy strategy = Strategy::uniform_random;
  std::uint64_t seed = 0;
  std::size_t count = 1000;
  // Consecutive points of an iteration orbit; used by orbit_pairs.
  std::vector<Point> orbit;
};

inline const char* to_string(PairSampler::Strategy s) {
  switch (s) {
    case PairSampler::Strategy::uniform_random: return "uniform_random";
    case PairSampler::Strategy::grid: return "grid";
    case PairSampler::Strategy::boundary_biased: return "boundary_biased";
    case PairSampler::Strategy::orbit_pairs: return "orbit_pairs";
  }
  return "unknown";
}

namespace detail {

inline Point random_point(const MetricSpaceHandle& space,
                          std::mt19937_64& gen) {
  Point p(space.dimension());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Interval iv = space.sampling_interval(i);
    p[i] = uniform_in(gen, iv.lower, iv.upper);
  }
  return p;
}

inline Point boundary_biased_point(const MetricSpaceHandle& space,
                                   std::mt19937_64& gen) {
  Point p(space.dimension());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Interval iv = space.sampling_interval(i);
    const double u = uniform01(gen);
    if (u < 0.25) {
      p[i] = iv.lower;
    } else if (u < 0.5) {
      p[i] = iv.upper;
    } else {
      p[i] = uniform_in(gen, iv.lower, iv.upper);
    }
  }
  return p;
}

// Lattice with `nodes` values per axis, endpoints included, enumerated in
// lexicographic order.
inline std::vector<Point> lattice_points(const MetricSpaceHandle& space,
                                         std::size_t nodes) {
  const std::size_t dim = space.dimension();
  std::vector<std::vector<double>> axes(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const Interval iv = space.sampling_interval(i);
    if (nodes == 1 || iv.upper == iv.lower) {
      axes[i] = {iv.lower};
    } else {
      axes[i] = linear_grid(iv.lower, iv.upper, nodes);
    }
  }
  std::vector<Point> pts;
  std::vector<std::size_t> idx(dim, 0);
  while (true) {
    Point p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = axes[i][idx[i]];
    pts.push_back(std::move(p));
    std::size_t i = dim;
    while (i > 0) {
      --i;
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
      if (i == 0) return pts;
    }
  }
}

}  // namespace detail

// Points drawn with the sampler's strategy (orbit_pairs uses the stored
// orbit). Deterministic for a fixed seed.
inline std::vector<Point> sample_points(const MetricSpaceHandle& space,
                                        const PairSampler& sampler,
                                        std::size_t n) {
  std::vector<Point> pts;
  pts.reserve(n);
  switch (sampler.strategy) {
    case PairSampler::Strategy::uniform_random: {
      std::mt19937_64 gen(sampler.seed);
      for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(detail::random_point(space, gen));
      }
      break;
    }
    case PairSampler::Strategy::boundary_biased: {
      std::mt19937_64 gen(sampler.seed);
      for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(detail::boundary_biased_point(space, gen));
      }
      break;
    }
    case PairSampler::Strategy::grid: {
      std::size_t nodes = 2;
      const double per_axis =
          std::pow(static_cast<double>(n), 1.0 / static_cast<double>(
                                                     space.dimension()));
      nodes = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(per_axis - 1e-9)));
      std::vector<Point> lattice = detail::lattice_points(space, nodes);
      for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(lattice[i % lattice.size()]);
      }
      break;
    }
    case PairSampler::Strategy::orbit_pairs: {
      if (sampler.orbit.empty()) {
        throw std::invalid_argument("orbit_pairs sampler: empty orbit");
      }
      for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(sampler.orbit[i % sampler.orbit.size()]);
      }
      break;
    }
  }
  return pts;
}

// Pairs (x, y) with x != y unless the strategy enumerates diagonal pairs
// (grid does; orbit_pairs may when the orbit stalls).
inline std::vector<std::pair<Point, Point>> sample_pairs(
    const MetricSpaceHandle& space, const PairSampler& sampler) {
  std::vector<std::pair<Point, Point>> pairs;
  pairs.reserve(sampler.count);
  switch (sampler.strategy) {
    case PairSampler::Strategy::uniform_random:
    case PairSampler::Strategy::boundary_biased: {
      std::mt19937_64 gen(sampler.seed);
      const bool biased =
          sampler.strategy == PairSampler::Strategy::boundary_biased;
      for (std::size_t i = 0; i < sampler.count; ++i) {
        Point x, y;
        for (int attempt = 0; attempt < 64; ++attempt) {
          x = biased ? detail::boundary_biased_point(space, gen)
                     : detail::random_point(space, gen);
          y = biased ? detail::boundary_biased_point(space, gen)
                     : detail::random_point(space, gen);
          if (distance(space, x, y) > kMinPositiveDistance) break;
        }
        pairs.emplace_back(std::move(x), std::move(y));
      }
      break;
    }
    case PairSampler::Strategy::grid: {
      // Lattice sized so the ordered pair table covers `count`: for a 1-D
      // request of 9 this is the 3 x 3 table over {lower, mid, upper}.
      const double target = std::sqrt(static_cast<double>(sampler.count));
      const double per_axis = std::pow(
          target, 1.0 / static_cast<double>(space.dimension()));
      const std::size_t nodes = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(per_axis - 1e-9)));
      const std::vector<Point> lattice = detail::lattice_points(space, nodes);
      for (std::size_t i = 0; pairs.size() < sampler.count; ++i) {
        const std::size_t a = i / lattice.size();
        const std::size_t b = i % lattice.size();
        if (a >= lattice.size()) break;  // table exhausted
        pairs.emplace_back(lattice[a], lattice[b]);
      }
      break;
    }
    case PairSampler::Strategy::orbit_pairs: {
      if (sampler.orbit.size() < 2) {
        throw std::invalid_argument(
            "orbit_pairs sampler: orbit needs at least two points");
      }
      const std::size_t n =
          std::min(sampler.count, sampler.orbit.size() - 1);
      for (std::size_t i = 0; i < n; ++i) {
        pairs.emplace_back(sampler.orbit[i], sampler.orbit[i + 1]);
      }
      break;
    }
  }
  return pairs;
}

inline std::vector<std::array<Point, 3>> sample_triples(
    const MetricSpaceHandle& space, const PairSampler& sampler) {
  std::vector<Point> pts = sample_points(space, sampler, 3 * sampler.count);
  std::vector<std::array<Point, 3>> triples;
  triples.reserve(sampler.count);
  for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
    triples.push_back({std::move(pts[i]), std::move(pts[i + 1]),
                       std::move(pts[i + 2])});
  }
  return triples;
}

// Pairs constructed to land in the distance band [band_lo, band_hi): a base
// point plus a step of metric length r along a random direction. Callers
// must re-check band membership; rounding can move a pair across the edge.
// Returns an empty set for metrics without a usable length scale (discrete,
// custom).
inline std::vector<std::pair<Point, Point>> band_pairs(
    const MetricSpaceHandle& space, double band_lo, double band_hi,
    std::size_t n, std::uint64_t seed) {
  if (!(band_lo >= 0.0) || !(band_hi > band_lo)) {
    throw std::invalid_argument("band_pairs: need 0 <= band_lo < band_hi");
  }
  if (std::holds_alternative<DiscreteMetric>(space.metric()) ||
      std::holds_alternative<CustomMetric>(space.metric())) {
    return {};
  }
  std::mt19937_64 gen(seed);
  std::vector<std::pair<Point, Point>> pairs;
  pairs.reserve(n);
  const std::size_t dim = space.dimension();
  for (std::size_t i = 0; i < 4 * n && pairs.size() < n; ++i) {
    // The first pair probes the left band edge exactly; the rest spread
    // uniformly over the band.
    const double r = pairs.empty()
                         ? band_lo
                         : uniform_in(gen, band_lo, band_hi);
    bool placed = false;
    for (int attempt = 0; attempt < 32 && !placed; ++attempt) {
      Point x = detail::random_point(space, gen);
      Point dir(dim, 0.0);
      if (dim == 1) {
        dir[0] = (gen() & 1) ? 1.0 : -1.0;
      } else {
        // A single random axis keeps the step length exact in every
        // norm-induced metric used here.
        const std::size_t axis = gen() % dim;
        dir[axis] = (gen() & 1) ? 1.0 : -1.0;
      }
      Point unit = dir;
      Point origin(dim, 0.0);
      const double norm = distance(space, origin, unit);
      if (!(norm > 0.0) || !std::isfinite(norm)) break;
      Point y = x;
      for (std::size_t k = 0; k < dim; ++k) y[k] = x[k] + (r / norm) * dir[k];
      if (!space.contains(y)) {
        for (std::size_t k = 0; k < dim; ++k) {
          y[k] = x[k] - (r / norm) * dir[k];
        }
      }
      if (space.contains(y)) {
        pairs.emplace_back(std::move(x), std::move(y));
        placed = true;
      }
    }
  }
  return pairs;
}

// Samples triples and checks non-negativity, symmetry, identity of
// indiscernibles, and the triangle inequality at the scaled tolerance.
inline CheckReport check_metric_axioms(const MetricSpaceHandle& space,
                                       const PairSampler& sampler) {
  CheckReport report;
  report.certificate_kind = "metric_axioms";
  report.seed = sampler.seed;

  ConditionResult nonneg{.name = "nonnegativity"};
  ConditionResult symmetry{.name = "symmetry"};
  ConditionResult identity{.name = "identity_of_indiscernibles"};
  ConditionResult triangle{.name = "triangle_inequality"};

  const auto triples = sample_triples(space, sampler);
  report.sample_size = triples.size();
  double worst_triangle_slack = infinity();

  for (const auto& t : triples) {
    const std::array<std::pair<const Point*, const Point*>, 3> edges = {
        std::make_pair(&t[0], &t[1]), std::make_pair(&t[1], &t[2]),
        std::make_pair(&t[0], &t[2])};
    std::array<double, 3> d{};
    for (std::size_t e = 0; e < 3; ++e) {
      d[e] = distance(space, *edges[e].first, *edges[e].second);
      if (nonneg.verdict == Verdict::pass &&
          (!(d[e] >= 0.0) || !std::isfinite(d[e]))) {
        nonneg = make_fail(
            "nonnegativity",
            Witness{"distance not a finite nonnegative value",
                    {*edges[e].first, *edges[e].second},
                    {d[e]},
                    {}});
      }
      if (symmetry.verdict == Verdict::pass) {
        const double rev = distance(space, *edges[e].second, *edges[e].first);
        if (!(rev == d[e])) {
          symmetry = make_fail(
              "symmetry",
              Witness{"d(x,y) != d(y,x) bit-exactly",
                      {*edges[e].first, *edges[e].second},
                      {d[e], rev},
                      {}});
        }
      }
    }
    if (identity.verdict == Verdict::pass) {
      const double self = distance(space, t[0], t[0]);
      if (self != 0.0) {
        identity = make_fail("identity_of_indiscernibles",
                             Witness{"d(x,x) != 0", {t[0]}, {self}, {}});
      } else if (d[0] == 0.0 && t[0] != t[1]) {
        identity = make_fail(
            "identity_of_indiscernibles",
            Witness{"d(x,y) == 0 for distinct points", {t[0], t[1]}, {0.0},
                    {}});
      }
    }
    if (triangle.verdict == Verdict::pass) {
      const double maxd = std::max({d[0], d[1], d[2]});
      const double slack = d[0] + d[1] - d[2] + triangle_tolerance(maxd);
      worst_triangle_slack = std::min(worst_triangle_slack, slack);
      if (!(slack >= 0.0)) {
        triangle = make_fail(
            "triangle_inequality",
            Witness{"d(x,z) > d(x,y) + d(y,z) beyond tolerance",
                    {t[0], t[1], t[2]},
                    {d[0], d[1], d[2]}},
            slack);
      }
    }
  }
  if (triangle.verdict == Verdict::pass &&
      std::isfinite(worst_triangle_slack)) {
    triangle.margin = worst_triangle_slack;
  }

  report.conditions = {std::move(nonneg), std::move(symmetry),
                       std::move(identity), std::move(triangle)};
  return report;
}

}  // namespace fpcert
