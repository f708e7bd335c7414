#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fpcert/certificate.hpp"
#include "fpcert/gallery.hpp"
#include "fpcert/iteration.hpp"
#include "fpcert/map_checks.hpp"
#include "fpcert/modulus_checks.hpp"

namespace fpcert {

enum class TheoremId {
  banach,
  meir_keeler,
  cjmp,
  wardowski,
  ri,
  ef_main,
  ef_relaxed,
  thm8_ri_improved,
  app2_phiF,
  app3_iii_doubleprime,
  app4_alphaF,
  app5_proinov,
};

inline const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::banach: return "banach";
    case TheoremId::meir_keeler: return "meir_keeler";
    case TheoremId::cjmp: return "cjmp";
    case TheoremId::wardowski: return "wardowski";
    case TheoremId::ri: return "ri";
    case TheoremId::ef_main: return "ef_main";
    case TheoremId::ef_relaxed: return "ef_relaxed";
    case TheoremId::thm8_ri_improved: return "thm8_ri_improved";
    case TheoremId::app2_phiF: return "app2_phiF";
    case TheoremId::app3_iii_doubleprime: return "app3_iii_doubleprime";
    case TheoremId::app4_alphaF: return "app4_alphaF";
    case TheoremId::app5_proinov: return "app5_proinov";
  }
  return "unknown";
}

inline std::vector<std::string> theorem_id_names() {
  return {"banach",          "meir_keeler",   "cjmp",
          "wardowski",       "ri",            "ef_main",
          "ef_relaxed",      "thm8_ri_improved", "app2_phiF",
          "app3_iii_doubleprime", "app4_alphaF", "app5_proinov"};
}

inline TheoremId theorem_id_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(TheoremId::app5_proinov); ++i) {
    const auto id = static_cast<TheoremId>(i);
    if (s == to_string(id)) return id;
  }
  throw std::invalid_argument("unknown theorem id '" + s + "'");
}

inline const char* expected_certificate_kind(TheoremId id) {
  switch (id) {
    case TheoremId::banach: return "banach";
    case TheoremId::meir_keeler: return "meir_keeler";
    case TheoremId::cjmp: return "cjmp";
    case TheoremId::wardowski: return "wardowski";
    case TheoremId::ri: return "ri";
    case TheoremId::ef_main: return "compatible_pair_ef";
    case TheoremId::ef_relaxed: return "compatible_pair_ef";
    case TheoremId::thm8_ri_improved: return "ri";
    case TheoremId::app2_phiF: return "wardowski";
    case TheoremId::app3_iii_doubleprime: return "wardowski";
    case TheoremId::app4_alphaF: return "alpha_f";
    case TheoremId::app5_proinov: return "proinov";
  }
  return "unknown";
}

// Checks the certificate kind and its variant flags against the theorem's
// hypothesis shape.
inline void require_certificate_matches(TheoremId id, const Certificate& c) {
  const std::string kind = certificate_kind(c);
  const std::string want = expected_certificate_kind(id);
  if (kind != want) {
    throw std::invalid_argument(std::string("theorem '") + to_string(id) +
                                "' expects a " + want + " certificate, got " +
                                kind);
  }
  const auto expect = [&](bool ok, const char* what) {
    if (!ok) {
      throw std::invalid_argument(std::string("theorem '") + to_string(id) +
                                  "': " + what);
    }
  };
  switch (id) {
    case TheoremId::wardowski:
      expect(std::get<WardowskiCertificate>(c).conditions ==
                 ConditionSet::i_ii_iii,
             "certificate must carry the i_ii_iii condition set");
      break;
    case TheoremId::app2_phiF:
      expect(std::get<WardowskiCertificate>(c).conditions ==
                 ConditionSet::iii_prime,
             "certificate must carry the iii_prime condition set");
      break;
    case TheoremId::app3_iii_doubleprime:
      expect(std::get<WardowskiCertificate>(c).conditions ==
                 ConditionSet::iii_doubleprime,
             "certificate must carry the iii_doubleprime condition set");
      break;
    case TheoremId::ri:
      expect(!std::get<RiCertificate>(c).improved,
             "certificate must not set improved");
      break;
    case TheoremId::thm8_ri_improved:
      expect(std::get<RiCertificate>(c).improved,
             "certificate must set improved");
      break;
    case TheoremId::ef_main:
      expect(!std::get<CompatiblePairCertificate>(c).relaxed,
             "certificate must not set relaxed");
      break;
    case TheoremId::ef_relaxed:
      expect(std::get<CompatiblePairCertificate>(c).relaxed,
             "certificate must set relaxed");
      break;
    default:
      break;
  }
}

// The theorem whose hypotheses this certificate instantiates.
inline TheoremId theorem_for_certificate(const Certificate& c) {
  struct Visitor {
    TheoremId operator()(const BanachCertificate&) const {
      return TheoremId::banach;
    }
    TheoremId operator()(const ContractiveCert&) const {
      throw std::invalid_argument(
          "a bare contractive certificate carries no fixed point theorem; "
          "use the counterexample flow");
    }
    TheoremId operator()(const MeirKeelerCertificate&) const {
      return TheoremId::meir_keeler;
    }
    TheoremId operator()(const CjmpCertificate&) const {
      return TheoremId::cjmp;
    }
    TheoremId operator()(const WardowskiCertificate& w) const {
      switch (w.conditions) {
        case ConditionSet::i_ii_iii: return TheoremId::wardowski;
        case ConditionSet::iii_prime: return TheoremId::app2_phiF;
        case ConditionSet::iii_doubleprime:
          return TheoremId::app3_iii_doubleprime;
      }
      return TheoremId::wardowski;
    }
    TheoremId operator()(const RiCertificate& r) const {
      return r.improved ? TheoremId::thm8_ri_improved : TheoremId::ri;
    }
    TheoremId operator()(const CompatiblePairCertificate& ef) const {
      return ef.relaxed ? TheoremId::ef_relaxed : TheoremId::ef_main;
    }
    TheoremId operator()(const AlphaFCertificate&) const {
      return TheoremId::app4_alphaF;
    }
    TheoremId operator()(const ProinovCertificate&) const {
      return TheoremId::app5_proinov;
    }
  };
  return std::visit(Visitor{}, c);
}

struct TheoremCase {
  TheoremId theorem_id;
  MapUnderTest map;
  Certificate certificate;
  std::vector<Point> starts;
  CheckParams params;
};

enum class OverallVerdict {
  verified_empirically,
  premise_failed,
  conclusion_failed,
  inconclusive,
};

inline const char* to_string(OverallVerdict v) {
  switch (v) {
    case OverallVerdict::verified_empirically: return "verified_empirically";
    case OverallVerdict::premise_failed: return "premise_failed";
    case OverallVerdict::conclusion_failed: return "conclusion_failed";
    case OverallVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct StartSummary {
  Point start;
  TraceVerdict verdict = TraceVerdict::budget_exhausted;
  std::size_t iterations = 0;
  double final_residual = quiet_nan();
};

struct VerificationReport {
  std::string theorem;
  std::vector<CheckReport> premise_reports;
  CheckReport conclusion;
  std::vector<StartSummary> start_summaries;
  std::vector<IterationTrace> traces;
  OverallVerdict overall = OverallVerdict::inconclusive;
  std::string failed_premise;  // "kind/condition" when a premise failed
  std::vector<std::string> refutation_only_premises;
  std::vector<std::string> inconclusive_reasons;
  std::optional<Certificate> derived;  // band certificate built along the way
  std::uint64_t seed = 0;

  double worst_margin() const {
    double worst = quiet_nan();
    const auto fold = [&worst](const CheckReport& r) {
      const double m = r.worst_margin();
      if (std::isnan(m)) return;
      if (std::isnan(worst) || m < worst) worst = m;
    };
    for (const auto& r : premise_reports) fold(r);
    fold(conclusion);
    return worst;
  }
};

// overall tag with the failing premise folded in, e.g.
// "premise_failed(compatible_pair_c1/order_gap)".
inline std::string overall_string(const VerificationReport& r) {
  if (r.overall == OverallVerdict::premise_failed) {
    return "premise_failed(" + r.failed_premise + ")";
  }
  return to_string(r.overall);
}

namespace detail {

inline CheckReport renamed(CheckReport r, const char* kind,
                           const char* condition_name = nullptr) {
  r.certificate_kind = kind;
  if (condition_name != nullptr && r.conditions.size() == 1) {
    r.conditions.front().name = condition_name;
  }
  return r;
}

}  // namespace detail

// The premise checks for one certificate, ordered as the corresponding
// theorem states its hypotheses (map-level contraction hypotheses first
// where the theorem assumes them, modulus conditions where it assumes
// those). Derivation steps are appended by verify_picard, not here.
inline std::vector<CheckReport> premise_checks(const MapUnderTest& map,
                                               const Certificate& cert,
                                               const CheckParams& p) {
  std::vector<CheckReport> out;
  if (const auto* b = std::get_if<BanachCertificate>(&cert)) {
    out.push_back(check_banach(map, b->lambda, p.sampler));
  } else if (std::get_if<ContractiveCert>(&cert)) {
    out.push_back(check_contractive(map, p.sampler));
  } else if (const auto* mk = std::get_if<MeirKeelerCertificate>(&cert)) {
    out.push_back(check_meir_keeler(map, mk->delta, p.eps_grid, p.sampler));
  } else if (const auto* cj = std::get_if<CjmpCertificate>(&cert)) {
    out.push_back(check_contractive(map, p.sampler));
    out.push_back(check_mw_condition(map, cj->delta, p.eps_grid, p.sampler));
  } else if (const auto* w = std::get_if<WardowskiCertificate>(&cert)) {
    if (w->conditions != ConditionSet::i_ii_iii) {
      out.push_back(check_contractive(map, p.sampler));
    }
    out.push_back(check_wardowski(map, w->phi, w->f, p.sampler));
    out.push_back(check_wardowski_side_conditions(w->phi, w->f, w->conditions,
                                                  p.t_grid, p.family));
  } else if (const auto* r = std::get_if<RiCertificate>(&cert)) {
    out.push_back(r->improved
                      ? check_improved_ri_modulus(r->phi, p.t_grid, p.family)
                      : check_ri(r->phi, p.t_grid, p.family));
    out.push_back(detail::renamed(
        check_ef_contraction(map, r->phi, modulus::identity(), p.sampler),
        "phi_map_bound", "pointwise_bound"));
  } else if (const auto* ef = std::get_if<CompatiblePairCertificate>(&cert)) {
    if (ef->relaxed) {
      out.push_back(check_contractive(map, p.sampler));
      out.push_back(check_c2(ef->e, ef->f, p.anchors, p.family));
      out.push_back(check_ef_contraction(map, ef->e, ef->f, p.sampler));
    } else {
      out.push_back(check_c1(ef->e, ef->f, p.t_grid));
      out.push_back(check_c2(ef->e, ef->f, p.anchors, p.family));
      out.push_back(check_ef_contraction(map, ef->e, ef->f, p.sampler));
      out.push_back(check_contractive(map, p.sampler));
    }
  } else if (const auto* af = std::get_if<AlphaFCertificate>(&cert)) {
    out.push_back(
        check_alpha_f(map, af->alpha, af->f, p.sampler, p.t_grid, p.anchors));
  } else if (const auto* pr = std::get_if<ProinovCertificate>(&cert)) {
    out.push_back(check_proinov(pr->e, pr->f, p.t_grid, p.anchors, p.family));
    out.push_back(detail::renamed(
        check_ef_contraction(map, pr->e, pr->f, p.sampler), "pair_inequality"));
  }
  return out;
}

namespace detail {

// Collects overall/refutation-only/inconclusive bookkeeping over the
// assembled reports; conclusion_ok is the already-judged conclusion status.
inline void settle_overall(VerificationReport& rep, bool conclusion_ok) {
  for (const auto& r : rep.premise_reports) {
    for (const auto& c : r.conditions) {
      if (c.verdict == Verdict::fail) {
        rep.overall = OverallVerdict::premise_failed;
        rep.failed_premise = r.certificate_kind + "/" + c.name;
        return;
      }
    }
  }
  for (const auto& r : rep.premise_reports) {
    for (const auto& c : r.conditions) {
      if (c.verdict == Verdict::inapplicable) {
        rep.inconclusive_reasons.push_back(r.certificate_kind + "/" + c.name +
                                           ": inapplicable");
      } else if (c.unreliable) {
        rep.inconclusive_reasons.push_back(r.certificate_kind + "/" + c.name +
                                           ": unreliable estimate");
      }
      if (c.verdict == Verdict::refutation_only_pass) {
        rep.refutation_only_premises.push_back(r.certificate_kind + "/" +
                                               c.name);
      }
    }
  }
  if (!conclusion_ok) {
    rep.overall = OverallVerdict::conclusion_failed;
    return;
  }
  rep.overall = rep.inconclusive_reasons.empty()
                    ? OverallVerdict::verified_empirically
                    : OverallVerdict::inconclusive;
}

inline void run_starts(VerificationReport& rep, const MapUnderTest& map,
                       const std::vector<Point>& starts,
                       const IterationConfig& config) {
  for (const Point& s : starts) {
    IterationTrace tr = picard_iterate(map, s, config);
    rep.start_summaries.push_back(StartSummary{
        s, tr.verdict, tr.iterations_used, tr.final_residual});
    rep.traces.push_back(std::move(tr));
  }
}

}  // namespace detail

// Checks the premises selected by the theorem id, runs the derivation step
// where the theorem provides one, then probes the conclusion: all starts
// converge to one common limit.
inline VerificationReport verify_picard(const TheoremCase& tc) {
  require_certificate_matches(tc.theorem_id, tc.certificate);
  validate(tc.certificate);
  if (tc.starts.size() < 2) {
    throw std::invalid_argument("verify_picard: need at least two starts");
  }
  for (const Point& s : tc.starts) {
    if (!tc.map.space.contains(s)) {
      throw std::invalid_argument("verify_picard: start outside the domain");
    }
  }

  VerificationReport rep;
  rep.theorem = to_string(tc.theorem_id);
  rep.seed = tc.params.sampler.seed;
  rep.premise_reports = premise_checks(tc.map, tc.certificate, tc.params);
  if (!tc.map.space.completeness_declared()) {
    rep.inconclusive_reasons.push_back(
        "space is not declared complete; the fixed point existence argument "
        "needs completeness");
  }

  bool premises_ok = true;
  for (const auto& r : rep.premise_reports) premises_ok &= r.passed();

  const bool is_ef = tc.theorem_id == TheoremId::ef_main ||
                     tc.theorem_id == TheoremId::ef_relaxed;
  if (is_ef && premises_ok) {
    const auto& reports = rep.premise_reports;
    EfEvidence ev;
    if (tc.theorem_id == TheoremId::ef_relaxed) {
      ev.relaxed_route = true;
      ev.contractive = reports[0];
      ev.c2 = reports[1];
      ev.ef_inequality = reports[2];
    } else {
      ev.c1 = reports[0];
      ev.c2 = reports[1];
      ev.ef_inequality = reports[2];
      ev.contractive = reports[3];
    }
    DeriveCjmpResult dr = derive_cjmp_certificate(
        tc.map, ev, tc.params.eps_grid, tc.params.sampler,
        tc.params.delta_candidates, tc.params.band_pair_count);
    rep.premise_reports.push_back(dr.report);
    if (dr.certificate) {
      rep.derived = dr.certificate;
    } else {
      premises_ok = false;
    }
  }

  detail::run_starts(rep, tc.map, tc.starts, tc.params.iteration);
  rep.conclusion = uniqueness_probe(tc.map, tc.starts, tc.params.iteration);
  detail::settle_overall(rep, rep.conclusion.passed());
  return rep;
}

// The opposite claim: distances strictly shrink yet Picard iteration does
// not settle. The conclusion check passes exactly when the probe fails.
inline VerificationReport verify_counterexample(const MapUnderTest& map,
                                                const std::vector<Point>& starts,
                                                const CheckParams& params) {
  if (starts.size() < 2) {
    throw std::invalid_argument(
        "verify_counterexample: need at least two starts");
  }
  VerificationReport rep;
  rep.theorem = "counterexample";
  rep.seed = params.sampler.seed;
  rep.premise_reports.push_back(check_contractive(map, params.sampler));

  detail::run_starts(rep, map, starts, params.iteration);
  rep.conclusion = uniqueness_probe(map, starts, params.iteration);
  const bool probe_failed = rep.conclusion.overall() == Verdict::fail;
  detail::settle_overall(rep, probe_failed);
  if (rep.overall == OverallVerdict::conclusion_failed) {
    rep.inconclusive_reasons.push_back(
        "orbits settled to a common fixed point, so the map is Picard on "
        "these starts and not a counterexample");
  }
  return rep;
}

struct ClassificationRow {
  std::string kind;
  std::string outcome;  // pass/fail/inapplicable/refutation_only_pass/not_attempted
  double margin = quiet_nan();
  std::string note;
};

namespace detail {

inline void fold_reports_into_row(ClassificationRow& row,
                                  const std::vector<CheckReport>& reports) {
  Verdict worst = Verdict::pass;
  double margin = quiet_nan();
  for (const auto& r : reports) {
    const Verdict v = r.overall();
    if (v == Verdict::fail) {
      worst = Verdict::fail;
    } else if (v == Verdict::inapplicable && worst != Verdict::fail) {
      worst = Verdict::inapplicable;
    } else if (v == Verdict::refutation_only_pass && worst == Verdict::pass) {
      worst = Verdict::refutation_only_pass;
    }
    const double m = r.worst_margin();
    if (!std::isnan(m) && (std::isnan(margin) || m < margin)) margin = m;
  }
  row.outcome = to_string(worst);
  row.margin = margin;
  if (worst == Verdict::fail) {
    for (const auto& r : reports) {
      for (const auto& c : r.conditions) {
        if (c.verdict == Verdict::fail) {
          row.note = r.certificate_kind + "/" + c.name + " failed";
          if (c.witness) row.note += ": " + c.witness->description;
          return;
        }
      }
    }
  }
}

inline const Certificate* find_supplied(const std::vector<Certificate>& certs,
                                        const std::string& kind) {
  for (const auto& c : certs) {
    if (certificate_kind(c) == kind) return &c;
  }
  return nullptr;
}

}  // namespace detail

// Runs every certificate class against one map. Classes that need a
// user-supplied modulus run only when one arrives via `supplied`; the rate
// and band classes are synthesized from the samples themselves.
inline std::vector<ClassificationRow> classify(
    const MapUnderTest& map, const CheckParams& params,
    const std::vector<Certificate>& supplied = {}) {
  std::vector<ClassificationRow> rows;
  const bool unbounded = [&map] {
    for (std::size_t i = 0; i < map.space.dimension(); ++i) {
      if (!std::isfinite(map.space.bounds()[i].upper)) return true;
    }
    return false;
  }();
  const std::string reach_caveat =
      unbounded ? "; sampled within reach " + fmt_double(map.space.sampling_reach()) +
                      " of the lower corner, ratios beyond are unobserved"
                : "";

  const double lambda_hat = estimate_banach_lambda(map, params.sampler);

  for (const std::string& kind : certificate_kind_names()) {
    ClassificationRow row;
    row.kind = kind;
    const Certificate* given = detail::find_supplied(supplied, kind);

    if (given != nullptr) {
      detail::fold_reports_into_row(row, premise_checks(map, *given, params));
      row.note += row.note.empty() ? "supplied certificate" : "; supplied certificate";
      rows.push_back(std::move(row));
      continue;
    }

    if (kind == "banach") {
      if (lambda_hat < 1.0) {
        row.outcome = to_string(Verdict::pass);
        row.margin = 1.0 - lambda_hat;
      } else {
        row.outcome = to_string(Verdict::fail);
        row.margin = 1.0 - lambda_hat;
      }
      row.note = "lambda_hat=" + fmt_double(lambda_hat) + reach_caveat;
    } else if (kind == "contractive") {
      detail::fold_reports_into_row(row, {check_contractive(map, params.sampler)});
      if (!reach_caveat.empty()) row.note += reach_caveat;
    } else if (kind == "cjmp") {
      std::vector<CheckReport> reports = {check_contractive(map, params.sampler)};
      MwSearchResult search =
          search_mw_modulus(map, params.eps_grid, params.sampler,
                            params.delta_candidates, params.band_pair_count);
      reports.push_back(search.report);
      detail::fold_reports_into_row(row, reports);
      if (search.delta) {
        row.note = "delta table found for " + std::to_string(search.table.size()) +
                   " band levels" + reach_caveat;
      } else if (row.note.empty()) {
        row.note = "band search exhausted its candidates" + reach_caveat;
      }
    } else if (kind == "wardowski") {
      const double target =
          lambda_hat > 0.0 ? -std::log(lambda_hat) - 1e-9 : 1.0;
      const double phi_level = std::max(target, 1e-9);
      const ModulusFunction phi = modulus::constant(phi_level);
      const ModulusFunction f = modulus::logarithm();
      detail::fold_reports_into_row(
          row, {check_wardowski(map, phi, f, params.sampler),
                check_wardowski_side_conditions(phi, f, ConditionSet::i_ii_iii,
                                                params.t_grid, params.family)});
      row.note = "default moduli phi=constant(" + fmt_double(phi_level) +
                 "), F=log" + (row.note.empty() ? "" : "; " + row.note);
    } else {
      row.outcome = "not_attempted";
      row.note = "needs a user-supplied modulus";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string to_text(const std::vector<ClassificationRow>& rows) {
  std::string out = "classification:\n";
  for (const auto& r : rows) {
    out += "  " + r.kind + ": " + r.outcome;
    if (!std::isnan(r.margin)) out += "  margin=" + fmt_double(r.margin);
    if (!r.note.empty()) out += "  (" + r.note + ")";
    out += "\n";
  }
  return out;
}

namespace detail {

inline ConditionResult implication_condition(const std::string& name,
                                             bool premise_passed,
                                             const CheckReport& implied,
                                             const char* vacuous_note) {
  ConditionResult c{.name = name};
  if (!premise_passed) {
    c.verdict = Verdict::pass;
    c.note = vacuous_note;
    return c;
  }
  if (implied.overall() == Verdict::fail) {
    for (const auto& cond : implied.conditions) {
      if (cond.verdict == Verdict::fail) {
        c = make_fail(name, cond.witness ? *cond.witness
                                         : Witness{"implied check failed"},
                      cond.margin,
                      "implied check " + implied.certificate_kind + "/" +
                          cond.name + " failed while the premise held");
        return c;
      }
    }
  }
  c.verdict = Verdict::pass;
  const double m = implied.worst_margin();
  if (!std::isnan(m)) c.margin = m;
  return c;
}

}  // namespace detail

// For every gallery entry and certificate it carries, checks the chains the
// theory promises on identical samples: rate bound -> strict shrinking,
// strict band -> relaxed band with the same modulus, compatible pair ->
// derived band certificate, alpha-F -> compatible pair route, and the
// vanishing side condition -> positive right limsup for the phi family.
inline CheckReport verify_implication_suite(const CheckParams& params) {
  CheckReport report;
  report.certificate_kind = "implication_suite";
  report.seed = params.sampler.seed;
  report.sample_size = params.sampler.count;

  for (const GalleryEntry& entry : gallery_entries()) {
    const MapUnderTest& map = entry.map;
    for (const Certificate& cert : entry.recommended_certificates) {
      const std::string kind = certificate_kind(cert);
      if (kind == "banach") {
        const auto& b = std::get<BanachCertificate>(cert);
        const CheckReport rate = check_banach(map, b.lambda, params.sampler);
        const CheckReport strict = check_contractive(map, params.sampler);
        report.conditions.push_back(detail::implication_condition(
            entry.name + "_banach_implies_contractive", rate.passed(), strict,
            "vacuous: the rate bound did not pass"));
      } else if (kind == "meir_keeler") {
        const auto& mk = std::get<MeirKeelerCertificate>(cert);
        const CheckReport strict =
            check_meir_keeler(map, mk.delta, params.eps_grid, params.sampler);
        const CheckReport relaxed =
            check_mw_condition(map, mk.delta, params.eps_grid, params.sampler);
        report.conditions.push_back(detail::implication_condition(
            entry.name + "_meir_keeler_implies_mw", strict.passed(), relaxed,
            "vacuous: the strict band condition did not pass"));
      } else if (kind == "compatible_pair_ef") {
        const auto& ef = std::get<CompatiblePairCertificate>(cert);
        EfEvidence ev;
        ev.relaxed_route = ef.relaxed;
        if (!ef.relaxed) ev.c1 = check_c1(ef.e, ef.f, params.t_grid);
        ev.c2 = check_c2(ef.e, ef.f, params.anchors, params.family);
        ev.ef_inequality = check_ef_contraction(map, ef.e, ef.f, params.sampler);
        ev.contractive = check_contractive(map, params.sampler);
        const bool pair_ok = (ef.relaxed || ev.c1.passed()) &&
                             ev.c2.passed() && ev.ef_inequality.passed();
        report.conditions.push_back(detail::implication_condition(
            entry.name + "_ef_implies_contractive", pair_ok, ev.contractive,
            "vacuous: the pair premises did not pass"));
        ConditionResult derive_cond{.name = entry.name + "_ef_implies_cjmp"};
        if (!(pair_ok && ev.contractive.passed())) {
          derive_cond.verdict = Verdict::pass;
          derive_cond.note = "vacuous: the pair premises did not pass";
        } else {
          const DeriveCjmpResult dr = derive_cjmp_certificate(
              map, ev, params.eps_grid, params.sampler,
              params.delta_candidates, params.band_pair_count);
          if (!dr.certificate) {
            derive_cond = make_fail(
                derive_cond.name,
                Witness{"no band modulus found although the pair premises "
                        "held; reexamine " + dr.premise_to_reexamine},
                dr.report.worst_margin());
          } else {
            const auto& cj = std::get<CjmpCertificate>(*dr.certificate);
            const CheckReport replay = check_mw_condition(
                map, cj.delta, params.eps_grid, params.sampler);
            derive_cond = detail::implication_condition(
                derive_cond.name, true, replay, "");
          }
        }
        report.conditions.push_back(std::move(derive_cond));
      } else if (kind == "wardowski") {
        const auto& w = std::get<WardowskiCertificate>(cert);
        const CheckReport ineq = check_wardowski(map, w.phi, w.f, params.sampler);
        const CheckReport side = check_wardowski_side_conditions(
            w.phi, w.f, w.conditions, params.t_grid, params.family);
        const CheckReport strict = check_contractive(map, params.sampler);
        report.conditions.push_back(detail::implication_condition(
            entry.name + "_wardowski_implies_contractive",
            ineq.passed() && side.passed(), strict,
            "vacuous: the shifted inequality or its side conditions did not "
            "pass"));
      } else if (kind == "alpha_f") {
        const auto& af = std::get<AlphaFCertificate>(cert);
        const CheckReport alpha_report = check_alpha_f(
            map, af.alpha, af.f, params.sampler, params.t_grid, params.anchors);
        ConditionResult chain{.name = entry.name + "_alpha_f_implies_cjmp"};
        if (!alpha_report.passed()) {
          chain.verdict = Verdict::pass;
          chain.note = "vacuous: the alpha_f premises did not pass";
        } else {
          const ModulusFunction e = modulus::scaled(af.alpha, af.f);
          EfEvidence ev;
          ev.c1 = check_c1(e, af.f, params.t_grid);
          ev.c2 = check_c2(e, af.f, params.anchors, params.family);
          ev.ef_inequality = check_ef_contraction(map, e, af.f, params.sampler);
          ev.contractive = check_contractive(map, params.sampler);
          if (!(ev.c1.passed() && ev.c2.passed() &&
                ev.ef_inequality.passed() && ev.contractive.passed())) {
            chain = make_fail(
                chain.name,
                Witness{"the pair route derived from the alpha_f certificate "
                        "did not hold although the alpha_f checks passed"});
          } else {
            const DeriveCjmpResult dr = derive_cjmp_certificate(
                map, ev, params.eps_grid, params.sampler,
                params.delta_candidates, params.band_pair_count);
            if (!dr.certificate) {
              chain = make_fail(
                  chain.name,
                  Witness{"no band modulus found along the alpha_f route; "
                          "reexamine " + dr.premise_to_reexamine},
                  dr.report.worst_margin());
            } else {
              chain.verdict = Verdict::pass;
              chain.margin = dr.report.worst_margin();
            }
          }
        }
        report.conditions.push_back(std::move(chain));
      }
    }
  }

  for (const ModulusFunction& phi : phi_family()) {
    const CheckReport r =
        check_iii_doubleprime_implies_iii_prime(phi, params.t_grid, params.family);
    ConditionResult c{.name = "phi_" + phi.name() +
                              "_iii_doubleprime_implies_iii_prime"};
    if (const ConditionResult* found = r.find("implication_consistent")) {
      c.verdict = found->verdict;
      c.margin = found->margin;
      c.note = found->note;
      c.witness = found->witness;
    } else {
      c = make_fail(c.name, Witness{"consistency condition missing"});
    }
    report.conditions.push_back(std::move(c));
  }
  return report;
}

inline std::string to_text(const VerificationReport& rep) {
  std::string out;
  out += "theorem: " + rep.theorem + "\n";
  out += "overall: " + overall_string(rep) + "\n";
  out += "seed: " + std::to_string(rep.seed) + "\n";
  if (!std::isnan(rep.worst_margin())) {
    out += "worst_margin: " + fmt_double(rep.worst_margin()) + "\n";
  }
  if (!rep.refutation_only_premises.empty()) {
    out += "refutation_only_premises:";
    for (const auto& p : rep.refutation_only_premises) out += " " + p;
    out += "\n";
  }
  for (const auto& reason : rep.inconclusive_reasons) {
    out += "inconclusive_reason: " + reason + "\n";
  }
  for (const auto& r : rep.premise_reports) {
    out += "premise " + to_text(r);
  }
  if (!rep.conclusion.certificate_kind.empty()) {
    out += "conclusion " + to_text(rep.conclusion);
  }
  for (const auto& s : rep.start_summaries) {
    out += "start " + fmt_point(s.start) + ": " +
           std::string(to_string(s.verdict)) + " after " +
           std::to_string(s.iterations) + " iterations";
    if (!std::isnan(s.final_residual)) {
      out += ", final residual " + fmt_double(s.final_residual);
    }
    out += "\n";
  }
  return out;
}

}  // namespace fpcert
