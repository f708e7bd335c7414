#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fpcert/gallery.hpp"
#include "fpcert/expression.hpp"
#include "fpcert/map_checks.hpp"

using namespace fpcert;

namespace {

PairSampler sampler_with(std::uint64_t seed, std::size_t count = 1000) {
  PairSampler s;
  s.seed = seed;
  s.count = count;
  return s;
}

}  // namespace

TEST_CASE("strict distance decrease separates the gallery maps") {
  const auto halving = instantiate("halving");
  const auto pass = check_contractive(halving.map, sampler_with(1));
  CHECK(pass.passed());
  REQUIRE(pass.conditions.size() == 1);
  CHECK(pass.conditions[0].margin > 0.0);

  const auto doubling = instantiate("doubling");
  const auto fail = check_contractive(doubling.map, sampler_with(1));
  CHECK(fail.overall() == Verdict::fail);
  REQUIRE(fail.conditions[0].witness.has_value());
  CHECK(fail.conditions[0].witness->points.size() == 2);
}

TEST_CASE("lambda estimation matches the derivative bound") {
  const auto halving = instantiate("halving");
  CHECK(estimate_banach_lambda(halving.map, sampler_with(2)) == 0.5);

  // Oracle: sup |cos'| = sin(1) on [0,1].
  const auto space = make_interval_space(0.0, 1.0);
  const auto cos_map = make_expression_map("cos(x1)", space);
  const double lambda_hat =
      estimate_banach_lambda(cos_map, sampler_with(2, 4000));
  CHECK(lambda_hat <= std::sin(1.0));
  CHECK(lambda_hat > std::sin(1.0) - 0.01);
}

TEST_CASE("ratio bound check accepts the true factor and rejects a lower one") {
  const auto halving = instantiate("halving");
  CHECK(check_banach(halving.map, 0.5, sampler_with(3)).passed());
  CHECK(check_banach(halving.map, 0.4, sampler_with(3)).overall() ==
        Verdict::fail);
  CHECK_THROWS_AS(check_banach(halving.map, 1.0, sampler_with(3)),
                  std::invalid_argument);
}

TEST_CASE("band conditions hold for halving with a proportional width") {
  const auto halving = instantiate("halving");
  const auto eps = default_eps_grid();
  // Width delta(eps) = eps keeps the band inside [eps, 2eps); halving the
  // distance then lands strictly below eps.
  const auto mk = check_meir_keeler(halving.map, modulus::identity(), eps,
                                    sampler_with(4));
  CHECK(mk.passed());
  const auto mw = check_mw_condition(halving.map, modulus::identity(), eps,
                                     sampler_with(4));
  CHECK(mw.passed());
  CHECK(mk.sample_size == mw.sample_size);

  const auto doubling = instantiate("doubling");
  const auto bad = check_meir_keeler(doubling.map, modulus::identity(), eps,
                                     sampler_with(4));
  CHECK(bad.overall() == Verdict::fail);
}

TEST_CASE("modulus search finds widths for halving and replays them") {
  const auto halving = instantiate("halving");
  const auto result =
      search_mw_modulus(halving.map, default_eps_grid(), sampler_with(5));
  REQUIRE(result.delta.has_value());
  REQUIRE(result.table.size() == default_eps_grid().size());
  // The first candidate eps/2 already works for halving.
  for (const auto& [eps, delta] : result.table) {
    CHECK(delta == eps * 0.5);
  }

  const auto replay = check_mw_condition(halving.map, *result.delta,
                                         default_eps_grid(), sampler_with(5));
  CHECK(replay.passed());
}

TEST_CASE("the search fails honestly when every band stays violated") {
  // Doubling violates the band conclusion at every width: any pair with
  // d(x,y) just above eps has d(Tx,Ty) = 2 d(x,y) > eps.
  const auto doubling = instantiate("doubling");
  const auto result =
      search_mw_modulus(doubling.map, {1.0}, sampler_with(6, 2000));
  CHECK_FALSE(result.delta.has_value());
  REQUIRE(result.report.overall() == Verdict::fail);
  // The failure carries the per-candidate violating pair chain.
  const auto& cond = result.report.conditions.back();
  REQUIRE(cond.witness.has_value());
  CHECK(cond.witness->indices.size() == default_delta_candidates().size());

  // The drifting-but-contractive map admits a table on its sampled window.
  const auto entry = instantiate("x_plus_inv_x");
  const auto near =
      search_mw_modulus(entry.map, {1.0}, sampler_with(6, 2000));
  CHECK(near.delta.has_value());
}

TEST_CASE("wardowski inequality margins match the closed form") {
  const auto entry = instantiate("log_wardowski");
  const auto pass = check_wardowski(entry.map, modulus::constant(0.1),
                                    modulus::logarithm(), sampler_with(7));
  CHECK(pass.passed());
  // Closed form: F(0.9d) - F(d) = ln(0.9), so the slack per pair is
  // -ln(0.9) - 0.1 regardless of the pair.
  const double expected = -std::log(0.9) - 0.1;
  REQUIRE(pass.conditions.size() == 1);
  CHECK(std::fabs(pass.conditions[0].margin - expected) < 1e-9);

  const auto fail = check_wardowski(entry.map, modulus::constant(0.2),
                                    modulus::logarithm(), sampler_with(7));
  CHECK(fail.overall() == Verdict::fail);
}

TEST_CASE("pair inequality checks for the scaled pair family") {
  const auto halving = instantiate("halving");
  const auto pass = check_ef_contraction(
      halving.map, modulus::scaled(0.75, modulus::identity()),
      modulus::identity(), sampler_with(8));
  CHECK(pass.passed());

  // E = 0.4 t undercuts the halved distance.
  const auto fail = check_ef_contraction(
      halving.map, modulus::scaled(0.4, modulus::identity()),
      modulus::identity(), sampler_with(8));
  CHECK(fail.overall() == Verdict::fail);
}

TEST_CASE("scaled-ratio certificate checks pass on the constant map") {
  const auto entry = instantiate("app4_alpha_f_map");
  const auto report =
      check_alpha_f(entry.map, 0.4, modulus::app4_f(), sampler_with(9),
                    default_t_grid(), default_anchors());
  CHECK(report.passed());
  const auto* ineq = report.find("alpha_f_inequality");
  REQUIRE(ineq != nullptr);
  // Every sampled pair collapses to the same image, so the inequality is
  // vacuous; the order gap and right limits carry the check.
  CHECK(ineq->note.find("vacuous") != std::string::npos);
  const auto* order = report.find("alpha_order_gap");
  REQUIRE(order != nullptr);
  CHECK(order->margin >= 1.0 - 1e-9);

  CHECK_THROWS_AS(check_alpha_f(entry.map, 1.0, modulus::app4_f(),
                                sampler_with(9), default_t_grid(),
                                default_anchors()),
                  std::invalid_argument);
}

TEST_CASE("derivation runs only on passing evidence") {
  const auto halving = instantiate("halving");
  const auto e = modulus::scaled(0.75, modulus::identity());
  const auto f = modulus::identity();

  EfEvidence ev;
  ev.c1 = check_c1(e, f, default_t_grid());
  ev.c2 = check_c2(e, f, default_anchors(), SequenceFamily{});
  ev.ef_inequality = check_ef_contraction(halving.map, e, f, sampler_with(10));
  ev.contractive = check_contractive(halving.map, sampler_with(10));
  REQUIRE(ev.c1.passed());
  REQUIRE(ev.c2.passed());
  REQUIRE(ev.ef_inequality.passed());
  REQUIRE(ev.contractive.passed());

  const auto derived = derive_cjmp_certificate(halving.map, ev,
                                               default_eps_grid(),
                                               sampler_with(10));
  REQUIRE(derived.certificate.has_value());
  CHECK(std::string(certificate_kind(*derived.certificate)) == "cjmp");
  CHECK(derived.report.passed());

  // The derived width must replay cleanly on the same samples.
  const auto& cjmp = std::get<CjmpCertificate>(*derived.certificate);
  CHECK(check_mw_condition(halving.map, cjmp.delta, default_eps_grid(),
                           sampler_with(10))
            .passed());

  EfEvidence broken = ev;
  broken.ef_inequality = check_ef_contraction(
      halving.map, modulus::scaled(0.4, modulus::identity()), f,
      sampler_with(10));
  REQUIRE_FALSE(broken.ef_inequality.passed());
  CHECK_THROWS_AS(derive_cjmp_certificate(halving.map, broken,
                                          default_eps_grid(),
                                          sampler_with(10)),
                  std::invalid_argument);
}

TEST_CASE("triple transfer holds under a contraction") {
  const auto halving = instantiate("halving");
  const auto report =
      check_band_triple_transfer(halving.map, 1.0, 0.5, sampler_with(11));
  CHECK(report.overall() != Verdict::fail);
}
