#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpcert/certificate.hpp"
#include "fpcert/iteration.hpp"
#include "fpcert/modulus_checks.hpp"
#include "fpcert/sampling.hpp"

namespace fpcert {

inline std::vector<double> default_eps_grid() {
  return {0.1, 0.5, 1.0, 2.0, 5.0};
}

// Geometric scale factors 2^-1 .. 2^-40, descending; effective candidates
// are eps * factor.
inline std::vector<double> default_delta_candidates() {
  std::vector<double> c;
  c.reserve(40);
  for (int k = 1; k <= 40; ++k) c.push_back(std::ldexp(1.0, -k));
  return c;
}

// Shared parameter bundle for the higher-level drivers.
struct CheckParams {
  PairSampler sampler;
  std::vector<double> eps_grid = default_eps_grid();
  std::vector<double> t_grid = default_t_grid();
  std::vector<double> anchors = default_anchors();
  SequenceFamily family;
  IterationConfig iteration;
  std::size_t band_pair_count = 200;
  std::vector<double> delta_candidates = default_delta_candidates();
};

namespace detail {

struct EvaluatedPair {
  Point x, y, tx, ty;
  double dxy = 0.0;
  double dtxy = 0.0;
};

inline std::vector<EvaluatedPair> evaluate_pairs(const MapUnderTest& map,
                                                 const PairSampler& sampler) {
  std::vector<EvaluatedPair> out;
  for (auto& [x, y] : sample_pairs(map.space, sampler)) {
    EvaluatedPair ep;
    ep.tx = map(x);
    ep.ty = map(y);
    ep.dxy = distance(map.space, x, y);
    ep.dtxy = distance(map.space, ep.tx, ep.ty);
    ep.x = std::move(x);
    ep.y = std::move(y);
    out.push_back(std::move(ep));
  }
  return out;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
}

}  // namespace detail

// Strict distance decrease on every sampled pair with x != y.
inline CheckReport check_contractive(const MapUnderTest& map,
                                     const PairSampler& sampler) {
  CheckReport report;
  report.certificate_kind = "contractive";
  report.seed = sampler.seed;

  ConditionResult c{.name = "strict_distance_decrease"};
  double min_gap = infinity();
  std::size_t vacuous = 0;
  const auto pairs = detail::evaluate_pairs(map, sampler);
  report.sample_size = pairs.size();
  for (const auto& ep : pairs) {
    if (ep.dxy <= kMinPositiveDistance) {
      ++vacuous;
      continue;
    }
    const double dtxy = ep.dtxy <= kMinPositiveDistance ? 0.0 : ep.dtxy;
    const double gap = ep.dxy - dtxy;
    if (!(gap > 0.0)) {
      c = make_fail("strict_distance_decrease",
                    Witness{"distance did not strictly decrease",
                            {ep.x, ep.y},
                            {ep.dxy, ep.dtxy},
                            {}},
                    gap);
      report.conditions.push_back(std::move(c));
      return report;
    }
    min_gap = std::min(min_gap, gap);
  }
  apply_strict_gap(c, min_gap);
  if (vacuous > 0) c.note = std::to_string(vacuous) + " vacuous pairs (x=y)";
  report.conditions.push_back(std::move(c));
  return report;
}

// Sup over sampled pairs of d(Tx,Ty)/d(x,y); 0 when every pair is vacuous.
inline double estimate_banach_lambda(const MapUnderTest& map,
                                     const PairSampler& sampler) {
  double sup_ratio = 0.0;
  for (const auto& ep : detail::evaluate_pairs(map, sampler)) {
    if (ep.dxy <= kMinPositiveDistance) continue;
    const double ratio = ep.dtxy <= kMinPositiveDistance
                             ? 0.0
                             : ep.dtxy / ep.dxy;
    sup_ratio = std::max(sup_ratio, ratio);
  }
  return sup_ratio;
}

// Per-pair ratio bound d(Tx,Ty) <= lambda d(x,y), with a one-ulp-scale
// relative allowance so exact-rate maps are not failed by rounding.
inline CheckReport check_banach(const MapUnderTest& map, double lambda,
                                const PairSampler& sampler) {
  if (!(lambda >= 0.0) || !(lambda < 1.0)) {
    throw std::invalid_argument("check_banach: lambda must lie in [0, 1)");
  }
  CheckReport report;
  report.certificate_kind = "banach";
  report.seed = sampler.seed;

  const double allowance = lambda * (1.0 + 1e-12);
  ConditionResult c{.name = "ratio_bound"};
  double worst = 0.0;
  const auto pairs = detail::evaluate_pairs(map, sampler);
  report.sample_size = pairs.size();
  for (const auto& ep : pairs) {
    if (ep.dxy <= kMinPositiveDistance) continue;
    const double ratio =
        ep.dtxy <= kMinPositiveDistance ? 0.0 : ep.dtxy / ep.dxy;
    if (ratio > allowance) {
      c = make_fail("ratio_bound",
                    Witness{"contraction ratio exceeds lambda",
                            {ep.x, ep.y},
                            {ep.dxy, ep.dtxy, ratio},
                            {}},
                    allowance - ratio);
      report.conditions.push_back(std::move(c));
      return report;
    }
    worst = std::max(worst, ratio);
  }
  c.margin = allowance - worst;
  c.note = "worst ratio " + fmt_double(worst);
  report.conditions.push_back(std::move(c));
  return report;
}

namespace detail {

// Shared band scan for the two band conditions. Strict flavor: band
// [eps, eps+delta) with strict conclusion d(Tx,Ty) < eps. Non-strict
// flavor: band (eps, eps+delta) with conclusion d(Tx,Ty) <= eps.
inline CheckReport band_condition_check(const MapUnderTest& map,
                                        const ModulusFunction& delta,
                                        const std::vector<double>& eps_grid,
                                        const PairSampler& sampler,
                                        bool strict_flavor,
                                        const char* kind) {
  require_grid(eps_grid, kind);
  CheckReport report;
  report.certificate_kind = kind;
  report.seed = sampler.seed;
  const auto pairs = evaluate_pairs(map, sampler);
  report.sample_size = pairs.size();

  for (double eps : eps_grid) {
    ConditionResult c{.name = std::string("band_eps_") + fmt_double(eps)};
    const double d_eps = delta(eps);
    if (!(d_eps > 0.0) || !std::isfinite(d_eps)) {
      c = make_fail(c.name,
                    Witness{"delta(eps) is not positive", {{eps}}, {d_eps}, {}},
                    quiet_nan());
      report.conditions.push_back(std::move(c));
      continue;
    }
    const double hi = eps + d_eps;
    double min_gap = infinity();
    std::size_t in_band = 0;
    for (const auto& ep : pairs) {
      const bool inside = strict_flavor ? (ep.dxy >= eps && ep.dxy < hi)
                                        : (ep.dxy > eps && ep.dxy < hi);
      if (!inside) continue;
      ++in_band;
      const double gap = eps - ep.dtxy;
      const bool ok = strict_flavor ? (gap > 0.0) : (gap >= 0.0);
      if (!ok) {
        c = make_fail(c.name,
                      Witness{"band implication violated",
                              {ep.x, ep.y},
                              {eps, ep.dxy, ep.dtxy},
                              {}},
                      gap);
        break;
      }
      min_gap = std::min(min_gap, gap);
    }
    if (c.verdict != Verdict::fail) {
      if (in_band == 0) {
        c.note = "vacuous: no sampled pair in the band";
      } else if (strict_flavor) {
        apply_strict_gap(c, min_gap);
      } else {
        c.margin = min_gap;
      }
    }
    report.conditions.push_back(std::move(c));
  }
  return report;
}

}  // namespace detail

// For each eps: every sampled pair with eps <= d(x,y) < eps + delta(eps)
// must satisfy d(Tx,Ty) < eps.
inline CheckReport check_meir_keeler(const MapUnderTest& map,
                                     const ModulusFunction& delta,
                                     const std::vector<double>& eps_grid,
                                     const PairSampler& sampler) {
  return detail::band_condition_check(map, delta, eps_grid, sampler,
                                      /*strict_flavor=*/true, "meir_keeler");
}

// Relaxed band flavor: strict lower bound, non-strict conclusion.
inline CheckReport check_mw_condition(const MapUnderTest& map,
                                      const ModulusFunction& delta,
                                      const std::vector<double>& eps_grid,
                                      const PairSampler& sampler) {
  return detail::band_condition_check(map, delta, eps_grid, sampler,
                                      /*strict_flavor=*/false,
                                      "mw_condition");
}

struct MwSearchResult {
  std::optional<ModulusFunction> delta;  // set iff every eps found a delta
  std::vector<std::pair<double, double>> table;  // (eps, delta)
  CheckReport report;
};

// For each eps, scans the candidate deltas from largest down and keeps the
// first one whose band produces no violation among sampler pairs plus
// band-targeted pairs. If even the smallest candidate is violated the
// result carries the per-candidate violating pair sequence.
inline MwSearchResult search_mw_modulus(
    const MapUnderTest& map, const std::vector<double>& eps_grid,
    const PairSampler& sampler,
    const std::vector<double>& delta_candidates = default_delta_candidates(),
    std::size_t band_pair_count = 200) {
  detail::require_grid(eps_grid, "search_mw_modulus");
  if (delta_candidates.empty()) {
    throw std::invalid_argument("search_mw_modulus: no candidates");
  }
  for (std::size_t i = 0; i < delta_candidates.size(); ++i) {
    if (!(delta_candidates[i] > 0.0)) {
      throw std::invalid_argument(
          "search_mw_modulus: candidates must be positive");
    }
    if (i > 0 && !(delta_candidates[i] < delta_candidates[i - 1])) {
      throw std::invalid_argument(
          "search_mw_modulus: candidates must be descending");
    }
  }

  MwSearchResult result;
  result.report.certificate_kind = "mw_modulus_search";
  result.report.seed = sampler.seed;
  const auto pairs = detail::evaluate_pairs(map, sampler);
  result.report.sample_size = pairs.size();

  for (std::size_t ei = 0; ei < eps_grid.size(); ++ei) {
    const double eps = eps_grid[ei];
    ConditionResult c{.name = std::string("search_eps_") + fmt_double(eps)};
    Witness chain{"violating pair per candidate, mirroring the shrinking "
                  "band construction",
                  {},
                  {},
                  {}};
    bool found = false;
    for (std::size_t k = 0; k < delta_candidates.size(); ++k) {
      const double d_eps = eps * delta_candidates[k];
      const double hi = eps + d_eps;
      const detail::EvaluatedPair* violating = nullptr;
      detail::EvaluatedPair targeted_violation;
      for (const auto& ep : pairs) {
        if (ep.dxy > eps && ep.dxy < hi && ep.dtxy > eps) {
          violating = &ep;
          break;
        }
      }
      if (violating == nullptr && band_pair_count > 0) {
        const auto targeted =
            band_pairs(map.space, eps, hi, band_pair_count,
                       detail::mix_seed(sampler.seed, ei * 64 + k));
        for (const auto& [x, y] : targeted) {
          const double dxy = distance(map.space, x, y);
          if (!(dxy > eps && dxy < hi)) continue;
          const Point tx = map(x);
          const Point ty = map(y);
          const double dtxy = distance(map.space, tx, ty);
          if (dtxy > eps) {
            targeted_violation = detail::EvaluatedPair{x, y, tx, ty, dxy, dtxy};
            violating = &targeted_violation;
            break;
          }
        }
      }
      if (violating == nullptr) {
        result.table.emplace_back(eps, d_eps);
        c.margin = delta_candidates[k];
        c.note = "delta " + fmt_double(d_eps) + " after " +
                 std::to_string(k) + " rejected candidates";
        found = true;
        break;
      }
      chain.points.push_back(violating->x);
      chain.points.push_back(violating->y);
      chain.values.push_back(violating->dxy);
      chain.values.push_back(violating->dtxy);
      chain.indices.push_back(static_cast<std::ptrdiff_t>(k));
    }
    if (!found) {
      c = make_fail(c.name, std::move(chain), quiet_nan());
      c.note = "violations persisted down to the smallest candidate";
      result.report.conditions.push_back(std::move(c));
      return result;
    }
    result.report.conditions.push_back(std::move(c));
  }

  // Table lookup modulus: nearest grid point in log scale.
  std::vector<std::pair<double, double>> table = result.table;
  result.delta = ModulusFunction(
      "mw_delta_table",
      [table](double eps) {
        double best_delta = table.front().second;
        double best_dist = infinity();
        for (const auto& [e, d] : table) {
          const double dist = std::fabs(std::log(eps) - std::log(e));
          if (dist < best_dist) {
            best_dist = dist;
            best_delta = d;
          }
        }
        return best_delta;
      },
      Monotonicity::none, true);
  return result;
}

// Distance transfer through the map on triples: d(x,y) < delta and
// d(y,z) <= eps together bound d(Tx,Tz) by eps.
inline CheckReport check_band_triple_transfer(const MapUnderTest& map,
                                              double eps, double delta,
                                              const PairSampler& sampler) {
  if (!(eps > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument(
        "check_band_triple_transfer: eps and delta must be positive");
  }
  CheckReport report;
  report.certificate_kind = "band_triple_transfer";
  report.seed = sampler.seed;

  ConditionResult c{.name = "triple_transfer"};
  double min_gap = infinity();
  std::size_t applicable = 0, skipped = 0;
  const auto triples = sample_triples(map.space, sampler);
  report.sample_size = triples.size();
  for (const auto& t : triples) {
    const Point& x = t[0];
    const Point& y = t[1];
    const Point& z = t[2];
    if (!(distance(map.space, x, y) < delta) ||
        !(distance(map.space, y, z) <= eps)) {
      ++skipped;
      continue;
    }
    ++applicable;
    const double dtxz = distance(map.space, map(x), map(z));
    const double gap = eps - dtxz;
    if (gap < 0.0) {
      c = make_fail("triple_transfer",
                    Witness{"transfer bound violated", {x, y, z}, {dtxz}, {}},
                    gap);
      report.conditions.push_back(std::move(c));
      return report;
    }
    min_gap = std::min(min_gap, gap);
  }
  if (applicable == 0) {
    c.verdict = Verdict::inapplicable;
    c.note = "no sampled triple satisfied the hypothesis band";
  } else {
    c.margin = min_gap;
    c.note = std::to_string(applicable) + " applicable, " +
             std::to_string(skipped) + " skipped";
  }
  report.conditions.push_back(std::move(c));
  return report;
}

// phi(d(x,y)) + F(d(Tx,Ty)) <= F(d(x,y)) on sampled pairs with Tx != Ty.
inline CheckReport check_wardowski(const MapUnderTest& map,
                                   const ModulusFunction& phi,
                                   const ModulusFunction& f,
                                   const PairSampler& sampler) {
  CheckReport report;
  report.certificate_kind = "wardowski";
  report.seed = sampler.seed;

  ConditionResult c{.name = "phi_F_inequality"};
  double min_gap = infinity();
  std::size_t vacuous_xy = 0, vacuous_txy = 0;
  const auto pairs = detail::evaluate_pairs(map, sampler);
  report.sample_size = pairs.size();
  for (const auto& ep : pairs) {
    if (ep.dxy <= kMinPositiveDistance) {
      ++vacuous_xy;
      continue;
    }
    if (ep.dtxy <= kMinPositiveDistance) {
      ++vacuous_txy;
      continue;
    }
    const double lhs = phi(ep.dxy) + f(ep.dtxy);
    const double rhs = f(ep.dxy);
    if (std::isnan(lhs) || std::isnan(rhs)) {
      c.unreliable = true;
      continue;
    }
    const double gap = rhs - lhs;
    if (lhs == infinity() || gap < 0.0) {
      c = make_fail("phi_F_inequality",
                    Witness{"inequality violated",
                            {ep.x, ep.y},
                            {ep.dxy, ep.dtxy, lhs, rhs},
                            {}},
                    gap);
      report.conditions.push_back(std::move(c));
      return report;
    }
    min_gap = std::min(min_gap, gap);
  }
  if (std::isfinite(min_gap)) c.margin = min_gap;
  c.note = std::to_string(vacuous_xy) + " vacuous (x=y), " +
           std::to_string(vacuous_txy) + " vacuous (Tx=Ty)";
  report.conditions.push_back(std::move(c));
  return report;
}

// F(d(Tx,Ty)) <= E(d(x,y)) on sampled pairs with Tx != Ty.
inline CheckReport check_ef_contraction(const MapUnderTest& map,
                                        const ModulusFunction& e,
                                        const ModulusFunction& f,
                                        const PairSampler& sampler) {
  CheckReport report;
  report.certificate_kind = "compatible_pair_ef";
  report.seed = sampler.seed;

  ConditionResult c{.name = "ef_inequality"};
  double min_gap = infinity();
  std::size_t vacuous_xy = 0, vacuous_txy = 0;
  const auto pairs = detail::evaluate_pairs(map, sampler);
  report.sample_size = pairs.size();
  for (const auto& ep : pairs) {
    if (ep.dxy <= kMinPositiveDistance) {
      ++vacuous_xy;
      continue;
    }
    if (ep.dtxy <= kMinPositiveDistance) {
      ++vacuous_txy;
      continue;
    }
    const double lhs = f(ep.dtxy);
    const double rhs = e(ep.dxy);
    if (std::isnan(lhs) || std::isnan(rhs)) {
      c.unreliable = true;
      continue;
    }
    const double gap = rhs - lhs;
    if (lhs == infinity() || gap < 0.0) {
      c = make_fail("ef_inequality",
                    Witness{"inequality violated",
                            {ep.x, ep.y},
                            {ep.dxy, ep.dtxy, lhs, rhs},
                            {}},
                    gap);
      report.conditions.push_back(std::move(c));
      return report;
    }
    min_gap = std::min(min_gap, gap);
  }
  if (std::isfinite(min_gap)) c.margin = min_gap;
  c.note = std::to_string(vacuous_xy) + " vacuous (x=y), " +
           std::to_string(vacuous_txy) + " vacuous (Tx=Ty)";
  report.conditions.push_back(std::move(c));
  return report;
}

// Scaled-F contraction: the pair inequality on samples, the scaled order
// gap on the grid, and positive right limits of F at the anchors.
inline CheckReport check_alpha_f(const MapUnderTest& map, double alpha,
                                 const ModulusFunction& f,
                                 const PairSampler& sampler,
                                 const std::vector<double>& grid,
                                 const std::vector<double>& anchors) {
  if (!(alpha >= 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("check_alpha_f: alpha must lie in [0, 1)");
  }
  CheckReport report;
  report.certificate_kind = "alpha_f";
  report.seed = sampler.seed;

  const ModulusFunction scaled_f = modulus::scaled(alpha, f);

  CheckReport inequality = check_ef_contraction(map, scaled_f, f, sampler);
  report.sample_size = inequality.sample_size;
  ConditionResult ineq = std::move(inequality.conditions.at(0));
  ineq.name = "alpha_f_inequality";
  report.conditions.push_back(std::move(ineq));

  CheckReport order = check_c1(scaled_f, f, grid);
  ConditionResult order_c = std::move(order.conditions.at(0));
  order_c.name = "alpha_order_gap";
  report.conditions.push_back(std::move(order_c));

  ConditionResult rl{.name = "F_right_limit_positive"};
  double min_est = infinity();
  for (double anchor : anchors) {
    if (!(anchor > 0.0)) continue;
    RightApproachSequence seq{anchor, RightApproachSequence::Generator::dyadic,
                              SequenceFamily{}.depth, {}};
    const LimitEstimate est = estimate_right_limit(f, anchor, seq);
    if (est.unreliable || std::isnan(est.value)) {
      rl.unreliable = true;
      continue;
    }
    if (!(est.value > 0.0)) {
      rl = make_fail("F_right_limit_positive",
                     Witness{"right limit estimate not positive",
                             {{anchor}},
                             {est.value},
                             {}},
                     est.value);
      break;
    }
    min_est = std::min(min_est, est.value);
  }
  if (rl.verdict != Verdict::fail) {
    apply_strict_gap(rl, min_est);
    detail::cap_refutation_only(rl);
  }
  report.conditions.push_back(std::move(rl));
  return report;
}

// Evidence bundle for deriving a banded certificate from the pair route.
// The relaxed route replaces the order-gap requirement with contractivity
// evidence alone.
struct EfEvidence {
  CheckReport c1;
  CheckReport c2;
  CheckReport ef_inequality;
  CheckReport contractive;
  bool relaxed_route = false;
};

struct DeriveCjmpResult {
  std::optional<Certificate> certificate;
  CheckReport report;  // the underlying modulus search
  std::string premise_to_reexamine;
};

// Runs the modulus search for a map whose pair-route premises all passed;
// a persistent band violation names the premises to re-examine.
inline DeriveCjmpResult derive_cjmp_certificate(
    const MapUnderTest& map, const EfEvidence& evidence,
    const std::vector<double>& eps_grid, const PairSampler& sampler,
    const std::vector<double>& delta_candidates = default_delta_candidates(),
    std::size_t band_pair_count = 200) {
  const auto require_passed = [](const CheckReport& r, const char* which) {
    if (!r.passed()) {
      throw std::invalid_argument(
          std::string("derive_cjmp_certificate: premise not passing: ") +
          which);
    }
  };
  if (!evidence.relaxed_route) require_passed(evidence.c1, "pair order gap");
  require_passed(evidence.c2, "pair band condition");
  require_passed(evidence.ef_inequality, "pair contraction inequality");
  require_passed(evidence.contractive, "contractive");

  MwSearchResult search = search_mw_modulus(map, eps_grid, sampler,
                                            delta_candidates,
                                            band_pair_count);
  DeriveCjmpResult out;
  out.report = std::move(search.report);
  if (search.delta) {
    out.certificate = Certificate(CjmpCertificate{*search.delta});
  } else {
    out.premise_to_reexamine =
        "pair band condition and pair contraction inequality on the witness "
        "pairs (or treat the violation as a sampling artifact at this reach)";
  }
  return out;
}

}  // namespace fpcert
