#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "fpcert/expression.hpp"
#include "fpcert/gallery.hpp"

using namespace fpcert;

TEST_CASE("the registry lists the documented entries") {
  const auto names = list_entries();
  REQUIRE(names.size() >= 7);
  const std::set<std::string> set(names.begin(), names.end());
  CHECK(set.count("halving") == 1);
  CHECK(set.count("dottie_cos") == 1);
  CHECK(set.count("babylonian_sqrt2") == 1);
  CHECK(set.count("x_plus_inv_x") == 1);
  CHECK(set.count("log_wardowski") == 1);
  CHECK(set.count("app4_alpha_f_map") == 1);
  CHECK(set.count("picard_lindelof_exp") == 1);
  CHECK(set.size() == names.size());

  CHECK_THROWS_AS(instantiate("missing_entry"), std::invalid_argument);
  try {
    instantiate("missing_entry");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("halving") != std::string::npos);
  }
}

TEST_CASE("every entry is internally consistent") {
  for (const auto& entry : gallery_entries()) {
    INFO(entry.name);
    CHECK_NOTHROW(validate(entry));
    CHECK_FALSE(entry.starts.empty());
    for (const auto& s : entry.starts) {
      CHECK(entry.map.space.contains(s));
    }
    const bool expects_point =
        entry.expected_behavior == ExpectedBehavior::picard;
    CHECK(entry.expected_fixed_point.has_value() == expects_point);
    if (expects_point) {
      CHECK_FALSE(entry.recommended_certificates.empty());
    }
  }
}

TEST_CASE("declared fixed points are fixed points of the maps") {
  for (const auto& entry : gallery_entries()) {
    if (!entry.expected_fixed_point.has_value()) continue;
    INFO(entry.name);
    const Point& fp = *entry.expected_fixed_point;
    REQUIRE(entry.map.space.contains(fp));
    const double residual = distance(entry.map.space, fp, entry.map(fp));
    CHECK(residual <= entry.fixed_point_tolerance);
  }
}

TEST_CASE("expression forms reproduce the native maps bit for bit") {
  PairSampler s;
  s.count = 100;
  for (const auto& entry : gallery_entries()) {
    if (entry.expression.empty()) continue;
    INFO(entry.name);
    const auto expr_map = make_expression_map(entry.expression,
                                              entry.map.space);
    std::size_t checked = 0;
    s.seed = 17;
    for (const auto& [x, y] : sample_pairs(entry.map.space, s)) {
      const Point native = entry.map(x);
      const Point parsed = expr_map(x);
      REQUIRE(native.size() == parsed.size());
      for (std::size_t i = 0; i < native.size(); ++i) {
        CHECK(native[i] == parsed[i]);
      }
      ++checked;
      (void)y;
    }
    CHECK(checked == 100);
  }
}

TEST_CASE("the discretized integral operator fixes the geometric profile") {
  const auto entry = instantiate("picard_lindelof_exp");
  REQUIRE(entry.map.space.dimension() == 33);

  // The trapezoid update has the exact discrete fixed point rho^i with
  // rho = (1 + h/2)/(1 - h/2) at h = 1/64.
  const double rho = 129.0 / 127.0;
  Point discrete(33);
  for (int i = 0; i < 33; ++i) discrete[i] = std::pow(rho, i);
  const double residual =
      distance(entry.map.space, discrete, entry.map(discrete));
  CHECK(residual < 1e-12);

  // That discrete profile tracks the true solution to a few 1e-5.
  REQUIRE(entry.expected_fixed_point.has_value());
  double gap = 0.0;
  for (int i = 0; i < 33; ++i) {
    gap = std::max(gap,
                   std::fabs(discrete[i] - (*entry.expected_fixed_point)[i]));
  }
  CHECK(gap < 5e-5);
  CHECK(gap > 0.0);
}

TEST_CASE("certificate parameters stay consistent with their maps") {
  const auto halving = instantiate("halving");
  bool has_banach = false;
  for (const auto& cert : halving.recommended_certificates) {
    if (const auto* b = std::get_if<BanachCertificate>(&cert)) {
      has_banach = true;
      CHECK(b->lambda == 0.5);
    }
  }
  CHECK(has_banach);

  const auto log_entry = instantiate("log_wardowski");
  bool has_wardowski = false;
  for (const auto& cert : log_entry.recommended_certificates) {
    if (const auto* w = std::get_if<WardowskiCertificate>(&cert)) {
      has_wardowski = true;
      CHECK(w->conditions == ConditionSet::i_ii_iii);
      // phi = 0.1 must stay below the per-pair slack -ln(0.9).
      CHECK(w->phi(1.0) < -std::log(0.9));
    }
  }
  CHECK(has_wardowski);
}

TEST_CASE("the modulus family for the side-condition suite is diverse") {
  const auto family = phi_family();
  REQUIRE(family.size() >= 5);
  std::set<std::string> names;
  for (const auto& f : family) names.insert(f.name());
  CHECK(names.size() == family.size());
  CHECK(names.count("vanishing_above_one") == 1);

  // The designed violator drops to zero right above one.
  const auto* violator = [&]() -> const ModulusFunction* {
    for (const auto& f : family) {
      if (f.name() == "vanishing_above_one") return &f;
    }
    return nullptr;
  }();
  REQUIRE(violator != nullptr);
  CHECK((*violator)(1.0) == 1.0);
  CHECK((*violator)(1.1) == Catch::Approx(0.1));
  CHECK((*violator)(0.5) == 0.5);
}
