#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fpcert/certificate.hpp"
#include "fpcert/map_checks.hpp"
#include "fpcert/metric_space.hpp"
#include "fpcert/modulus.hpp"

namespace fpcert {

enum class ExpectedBehavior {
  picard,                      // unique fixed point reached from every start
  contractive_no_fixed_point,  // distances shrink yet orbits never settle
  non_contractive,
};

inline const char* to_string(ExpectedBehavior b) {
  switch (b) {
    case ExpectedBehavior::picard: return "picard";
    case ExpectedBehavior::contractive_no_fixed_point:
      return "contractive_no_fixed_point";
    case ExpectedBehavior::non_contractive: return "non_contractive";
  }
  return "unknown";
}

// A named, fully configured example: map, certificates it should carry,
// starts, and the outcome iteration is expected to produce.
struct GalleryEntry {
  std::string name;
  MapUnderTest map;
  std::vector<Certificate> recommended_certificates;
  std::optional<Point> expected_fixed_point;  // present iff behavior=picard
  double fixed_point_tolerance = 1e-9;
  ExpectedBehavior expected_behavior = ExpectedBehavior::picard;
  std::vector<Point> starts;
  std::string notes;
  std::string expression;  // the same map in config expression syntax
  CheckParams default_params;
};

inline void validate(const GalleryEntry& e) {
  const bool picard = e.expected_behavior == ExpectedBehavior::picard;
  if (picard != e.expected_fixed_point.has_value()) {
    throw std::invalid_argument("gallery entry '" + e.name +
                                "': expected_fixed_point must be present "
                                "exactly when the behavior is picard");
  }
  if (e.starts.empty()) {
    throw std::invalid_argument("gallery entry '" + e.name + "': no starts");
  }
  for (const Point& s : e.starts) {
    if (!e.map.space.contains(s)) {
      throw std::invalid_argument("gallery entry '" + e.name +
                                  "': start outside the domain");
    }
  }
}

// Moduli exercised by the side-condition consistency checks. The last one
// vanishes along sequences decreasing to 1, so both the vanishing-forces-zero
// condition and the positive-right-limsup condition refute it there.
inline std::vector<ModulusFunction> phi_family() {
  std::vector<ModulusFunction> family;
  family.push_back(modulus::constant(0.1));
  family.push_back(modulus::identity());
  family.push_back(modulus::scaled(0.5, modulus::identity()));
  family.push_back(modulus::power(2.0));
  family.push_back(modulus::affine(1.0, 0.05));
  family.emplace_back(
      "vanishing_above_one",
      [](double t) { return t <= 1.0 ? t : t - 1.0; },
      Monotonicity::none, false);
  return family;
}

namespace detail {

// Nodes t_i = i/64 on [0, 1/2]; value_1 fixed at 1, later values accumulate
// the trapezoid sum left to right so the expression path reproduces the
// lambda bit for bit.
inline constexpr std::size_t kQuadratureNodes = 33;

inline std::string picard_lindelof_expression() {
  std::string expr = "1";
  for (std::size_t i = 1; i < kQuadratureNodes; ++i) {
    std::string acc = "x1/2";
    for (std::size_t j = 2; j <= i; ++j) acc += " + x" + std::to_string(j);
    acc += " + x" + std::to_string(i + 1) + "/2";
    expr += "; 1 + (" + acc + ")/64";
  }
  return expr;
}

inline GalleryEntry make_halving() {
  MetricSpaceHandle space = make_interval_space(-10.0, 10.0);
  MapUnderTest map(space, [](const Point& x) { return Point{x[0] / 2.0}; },
                   "halving");
  GalleryEntry e{
      .name = "halving",
      .map = std::move(map),
      .recommended_certificates =
          {BanachCertificate{0.5},
           MeirKeelerCertificate{modulus::identity()},
           CompatiblePairCertificate{modulus::scaled(0.75, modulus::identity()),
                                     modulus::identity()}},
      .expected_fixed_point = Point{0.0},
      .fixed_point_tolerance = 1e-9,
      .expected_behavior = ExpectedBehavior::picard,
      .starts = {{-5.0}, {0.3}, {7.0}},
      .notes = "Linear halving on [-10, 10]: ratio exactly 1/2, so the band "
               "modulus delta(eps) = eps works and (E, F) = (3t/4, t) has a "
               "uniform order gap.",
      .expression = "x1/2",
  };
  return e;
}

inline GalleryEntry make_dottie_cos() {
  MetricSpaceHandle space = make_interval_space(-10.0, 10.0);
  MapUnderTest map(space,
                   [](const Point& x) { return Point{std::cos(x[0])}; },
                   "dottie_cos");
  GalleryEntry e{
      .name = "dottie_cos",
      .map = std::move(map),
      .recommended_certificates =
          {MeirKeelerCertificate{modulus::cos_mk_delta()},
           CompatiblePairCertificate{modulus::cos_chord(),
                                     modulus::identity()}},
      .expected_fixed_point = Point{0.7390851332151607},
      .fixed_point_tolerance = 1e-9,
      .expected_behavior = ExpectedBehavior::picard,
      .starts = {{0.0}, {1.0}, {1.5}, {3.0}},
      .notes = "cos maps the whole line into [-1, 1] after one step and "
               "|cos x - cos y| <= 2 sin(d/2) < d; not a uniform rate "
               "contraction near the flat points, hence band and pair "
               "certificates instead of a Banach constant.",
      .expression = "cos(x1)",
  };
  return e;
}

inline GalleryEntry make_babylonian_sqrt2() {
  MetricSpaceHandle space = make_interval_space(1.0, 100.0);
  MapUnderTest map(
      space, [](const Point& x) { return Point{x[0] / 2.0 + 1.0 / x[0]}; },
      "babylonian_sqrt2");
  GalleryEntry e{
      .name = "babylonian_sqrt2",
      .map = std::move(map),
      .recommended_certificates =
          {BanachCertificate{0.5},
           CompatiblePairCertificate{modulus::scaled(0.75, modulus::identity()),
                                     modulus::identity()}},
      .expected_fixed_point = Point{1.4142135623730951},
      .fixed_point_tolerance = 1e-12,
      .expected_behavior = ExpectedBehavior::picard,
      .starts = {{1.0}, {3.0}, {50.0}},
      .notes = "Newton step for sqrt(2): |T'(x)| = |1/2 - 1/x^2| <= 1/2 on "
               "[1, 100] and the interval is closed under the map.",
      .expression = "x1/2 + 1/x1",
  };
  return e;
}

inline GalleryEntry make_x_plus_inv_x() {
  MetricSpaceHandle space =
      make_interval_space(1.0, infinity(), /*complete=*/true, /*reach=*/100.0);
  MapUnderTest map(space,
                   [](const Point& x) { return Point{x[0] + 1.0 / x[0]}; },
                   "x_plus_inv_x");
  GalleryEntry e{
      .name = "x_plus_inv_x",
      .map = std::move(map),
      .recommended_certificates = {ContractiveCert{}},
      .expected_fixed_point = std::nullopt,
      .fixed_point_tolerance = 0.0,
      .expected_behavior = ExpectedBehavior::contractive_no_fixed_point,
      .starts = {{1.0}, {2.0}, {10.0}},
      .notes = "d(Tx, Ty) = d(x, y) (1 - 1/(xy)) < d(x, y) on [1, inf), yet "
               "T(x) > x always, so orbits march off to infinity (x_n grows "
               "like sqrt(2n)) and no fixed point exists.",
      .expression = "x1 + 1/x1",
  };
  return e;
}

inline GalleryEntry make_log_wardowski() {
  MetricSpaceHandle space = make_interval_space(-50.0, 50.0);
  MapUnderTest map(space, [](const Point& x) { return Point{0.9 * x[0]}; },
                   "log_wardowski");
  GalleryEntry e{
      .name = "log_wardowski",
      .map = std::move(map),
      .recommended_certificates =
          {WardowskiCertificate{modulus::constant(0.1), modulus::logarithm(),
                                ConditionSet::i_ii_iii},
           BanachCertificate{std::exp(-0.1)},
           CompatiblePairCertificate{modulus::scaled(0.95, modulus::identity()),
                                     modulus::identity()}},
      .expected_fixed_point = Point{0.0},
      .fixed_point_tolerance = 1e-9,
      .expected_behavior = ExpectedBehavior::picard,
      .starts = {{-30.0}, {0.7}, {42.0}},
      .notes = "Scaling by 0.9: with F = log the shifted inequality "
               "0.1 + log d(Tx, Ty) <= log d(x, y) is the same statement as "
               "d(Tx, Ty) <= exp(-0.1) d(x, y), so the Wardowski and rate "
               "classifications must agree pair by pair.",
      .expression = "0.9*x1",
  };
  return e;
}

inline GalleryEntry make_app4_alpha_f_map() {
  MetricSpaceHandle space = make_interval_space(0.0, 100.0);
  MapUnderTest map(space, [](const Point&) { return Point{3.0}; },
                   "app4_alpha_f_map");
  GalleryEntry e{
      .name = "app4_alpha_f_map",
      .map = std::move(map),
      .recommended_certificates = {AlphaFCertificate{0.4, modulus::app4_f()}},
      .expected_fixed_point = Point{3.0},
      .fixed_point_tolerance = 1e-12,
      .expected_behavior = ExpectedBehavior::picard,
      .starts = {{0.0}, {10.0}, {97.0}},
      .notes = "Companion map for app4_F with alpha = 2/5. app4_F never goes "
               "below 2, so whenever app4_F(d(x, y)) < 5 the bound "
               "(2/5) app4_F(d(x, y)) < 2 leaves no admissible value for "
               "app4_F(d(Tx, Ty)); on a connected interval that forces a "
               "constant map, which satisfies everything vacuously.",
      .expression = "3",
  };
  return e;
}

inline GalleryEntry make_picard_lindelof_exp() {
  constexpr std::size_t n = kQuadratureNodes;
  MetricSpaceHandle space = make_box_space(n, -10.0, 10.0, SupMetric{});
  MapUnderTest map(
      space,
      [](const Point& y) {
        Point out(kQuadratureNodes);
        out[0] = 1.0;
        for (std::size_t i = 1; i < kQuadratureNodes; ++i) {
          double acc = y[0] / 2.0;
          for (std::size_t j = 1; j < i; ++j) acc = acc + y[j];
          acc = acc + y[i] / 2.0;
          out[i] = 1.0 + acc / 64.0;
        }
        return out;
      },
      "picard_lindelof_exp");

  Point exp_samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    exp_samples[i] = std::exp(static_cast<double>(i) / 64.0);
  }
  GalleryEntry e{
      .name = "picard_lindelof_exp",
      .map = std::move(map),
      .recommended_certificates =
          {BanachCertificate{0.5},
           CompatiblePairCertificate{modulus::scaled(0.75, modulus::identity()),
                                     modulus::identity()}},
      .expected_fixed_point = exp_samples,
      .fixed_point_tolerance = 5e-4,
      .expected_behavior = ExpectedBehavior::picard,
      .starts = {Point(n, 0.0), Point(n, 1.0), exp_samples},
      .notes = "y -> 1 + integral of y from 0 to t on [0, 1/2], trapezoid "
               "rule on 33 uniform nodes, sup metric: the sup ratio is "
               "bounded by the interval length 1/2, and the discrete fixed "
               "point matches exp(t) to about 2e-5.",
      .expression = picard_lindelof_expression(),
  };
  return e;
}

inline GalleryEntry make_doubling() {
  MetricSpaceHandle space =
      make_interval_space(0.0, infinity(), /*complete=*/true, /*reach=*/10.0);
  MapUnderTest map(space, [](const Point& x) { return Point{2.0 * x[0]}; },
                   "doubling");
  GalleryEntry e{
      .name = "doubling",
      .map = std::move(map),
      .recommended_certificates = {},
      .expected_fixed_point = std::nullopt,
      .fixed_point_tolerance = 0.0,
      .expected_behavior = ExpectedBehavior::non_contractive,
      .starts = {{0.5}, {1.0}, {3.0}},
      .notes = "Doubling on [0, inf) expands every pair, so every "
               "certificate class fails; orbits from nonzero starts blow up.",
      .expression = "2*x1",
  };
  return e;
}

}  // namespace detail

inline std::vector<std::string> list_entries() {
  return {"halving",        "dottie_cos",       "babylonian_sqrt2",
          "x_plus_inv_x",   "log_wardowski",    "app4_alpha_f_map",
          "picard_lindelof_exp", "doubling"};
}

inline GalleryEntry instantiate(const std::string& name) {
  GalleryEntry e = [&name] {
    if (name == "halving") return detail::make_halving();
    if (name == "dottie_cos") return detail::make_dottie_cos();
    if (name == "babylonian_sqrt2") return detail::make_babylonian_sqrt2();
    if (name == "x_plus_inv_x") return detail::make_x_plus_inv_x();
    if (name == "log_wardowski") return detail::make_log_wardowski();
    if (name == "app4_alpha_f_map") return detail::make_app4_alpha_f_map();
    if (name == "picard_lindelof_exp") {
      return detail::make_picard_lindelof_exp();
    }
    if (name == "doubling") return detail::make_doubling();
    std::string known;
    for (const std::string& n : list_entries()) {
      if (!known.empty()) known += ", ";
      known += n;
    }
    throw std::invalid_argument("unknown gallery entry '" + name +
                                "' (known: " + known + ")");
  }();
  validate(e);
  return e;
}

inline std::vector<GalleryEntry> gallery_entries() {
  std::vector<GalleryEntry> all;
  for (const std::string& n : list_entries()) all.push_back(instantiate(n));
  return all;
}

}  // namespace fpcert
