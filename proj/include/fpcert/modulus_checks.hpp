#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fpcert/certificate.hpp"
#include "fpcert/modulus.hpp"

namespace fpcert {

inline std::vector<double> default_t_grid() { return log_grid(1e-6, 1e6, 200); }
inline std::vector<double> default_anchors() {
  return {0.1, 0.25, 0.5, 1.0, 2.0};
}

// Right-approach estimates at anchors below this are dominated by float
// noise for vanishing moduli, so positivity-style conditions skip them.
inline constexpr double kMinSideConditionAnchor = 0.01;

namespace detail {

constexpr std::size_t kLimitTail = 8;

inline void cap_refutation_only(ConditionResult& c) {
  if (c.verdict == Verdict::pass) c.verdict = Verdict::refutation_only_pass;
}

inline void require_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty grid");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw std::invalid_argument(std::string(what) +
                                  ": grid values must be positive and finite");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(what) +
                                  ": grid must be strictly ascending");
    }
  }
}

inline std::vector<double> side_condition_anchors(
    const std::vector<double>& grid, bool include_zero) {
  std::vector<double> anchors;
  if (include_zero) anchors.push_back(0.0);
  for (double t : grid) {
    if (t >= kMinSideConditionAnchor) anchors.push_back(t);
  }
  return anchors;
}

// lhs(t) < rhs(t) on the grid; min gap as margin, first violation as witness.
inline ConditionResult pointwise_strict_gap(
    const std::string& name, const std::vector<double>& grid,
    const std::function<double(double)>& lhs,
    const std::function<double(double)>& rhs) {
  ConditionResult c{.name = name};
  double min_gap = infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = lhs(grid[i]);
    const double b = rhs(grid[i]);
    const double gap = b - a;
    if (std::isnan(gap)) {
      c.unreliable = true;
      continue;
    }
    if (!(gap > 0.0)) {
      return make_fail(name,
                       Witness{"strict inequality violated",
                               {{grid[i]}},
                               {a, b},
                               {static_cast<std::ptrdiff_t>(i)}},
                       gap);
    }
    min_gap = std::min(min_gap, gap);
  }
  apply_strict_gap(c, min_gap);
  return c;
}

// Right-approach estimate of phi stays at or above the positivity threshold
// at every anchor; an estimate below it refutes the limit claim.
inline ConditionResult right_estimate_positive(
    const std::string& name, const ModulusFunction& phi,
    const std::vector<double>& anchors, const SequenceFamily& family,
    bool use_liminf) {
  ConditionResult c{.name = name};
  if (anchors.empty()) {
    c.verdict = Verdict::inapplicable;
    c.note = "no anchors at or above " + fmt_double(kMinSideConditionAnchor);
    return c;
  }
  double min_margin = infinity();
  for (double anchor : anchors) {
    for (const auto& seq : family.at(anchor)) {
      std::vector<double> values;
      for (double t : seq.terms()) values.push_back(phi(t));
      const LimitEstimate est = use_liminf
                                    ? estimate_liminf(values, kLimitTail)
                                    : estimate_limsup(values, kLimitTail);
      if (est.unreliable || std::isnan(est.value)) {
        c.unreliable = true;
        continue;
      }
      const double margin = est.value - kPositiveTol;
      if (!(margin > 0.0)) {
        return make_fail(
            name,
            Witness{std::string("right-approach estimate at the anchor (") +
                        to_string(seq.generator) +
                        ") fell below the positivity threshold",
                    {{anchor}},
                    {est.value},
                    {}},
            margin);
      }
      min_margin = std::min(min_margin, margin);
    }
  }
  c.margin = min_margin;
  if (min_margin < kFragileGap) c.fragile = true;
  cap_refutation_only(c);
  return c;
}

// Right-approach estimate of phi stays strictly below the anchor.
inline ConditionResult right_estimate_below_identity(
    const std::string& name, const ModulusFunction& phi,
    const std::vector<double>& anchors, const SequenceFamily& family,
    bool use_liminf) {
  ConditionResult c{.name = name};
  double min_gap = infinity();
  for (double anchor : anchors) {
    if (!(anchor > 0.0)) continue;
    for (const auto& seq : family.at(anchor)) {
      std::vector<double> values;
      for (double t : seq.terms()) values.push_back(phi(t));
      const LimitEstimate est = use_liminf
                                    ? estimate_liminf(values, kLimitTail)
                                    : estimate_limsup(values, kLimitTail);
      if (est.unreliable || std::isnan(est.value)) {
        c.unreliable = true;
        continue;
      }
      const double gap = anchor - est.value;
      if (!(gap > 0.0)) {
        return make_fail(
            name,
            Witness{std::string("right-approach estimate at the anchor (") +
                        to_string(seq.generator) +
                        ") reached the identity bound",
                    {{anchor}},
                    {est.value},
                    {}},
            gap);
      }
      min_gap = std::min(min_gap, gap);
    }
  }
  apply_strict_gap(c, min_gap);
  cap_refutation_only(c);
  return c;
}

// Divergence trend toward -infinity along 2^-k: strictly decreasing values
// whose final decrement has not stalled (or an actual -inf is reached).
inline ConditionResult diverges_to_minus_infinity(const std::string& name,
                                                  const ModulusFunction& f,
                                                  int depth) {
  ConditionResult c{.name = name};
  RightApproachSequence seq{0.0, RightApproachSequence::Generator::dyadic,
                            depth, {}};
  std::vector<double> values;
  for (double t : seq.terms()) {
    const double v = f(t);
    if (std::isnan(v)) {
      c.verdict = Verdict::inapplicable;
      c.note = "non-numeric value along the approach sequence";
      c.unreliable = true;
      return c;
    }
    values.push_back(v);
    if (v == -infinity()) break;
  }
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!(values[i + 1] < values[i])) {
      return make_fail(name,
                       Witness{"values stop decreasing toward 0+",
                               {{std::ldexp(1.0, -static_cast<int>(i + 1))},
                                {std::ldexp(1.0, -static_cast<int>(i + 2))}},
                               {values[i], values[i + 1]},
                               {static_cast<std::ptrdiff_t>(i)}},
                       values[i] - values[i + 1]);
    }
  }
  if (values.back() == -infinity()) {
    c.note = "reached -inf within double range";
    cap_refutation_only(c);
    return c;
  }
  if (values.size() < 2) {
    c.verdict = Verdict::inapplicable;
    c.note = "sequence too short";
    return c;
  }
  const double last_decrement = values[values.size() - 2] - values.back();
  const double threshold = 1e-9 * (1.0 + std::fabs(values.back()));
  if (!(last_decrement >= threshold)) {
    return make_fail(
        name,
        Witness{"decrement trend stalls; values appear bounded below",
                {},
                {values.back(), last_decrement},
                {}},
        last_decrement - threshold);
  }
  c.margin = last_decrement;
  c.note = "trend check only; divergence itself is not finitely verifiable";
  cap_refutation_only(c);
  return c;
}

// Refutation hunt: a sequence decreasing to anchor > 0 whose phi-values
// vanish contradicts "phi(t_n) -> 0 forces t_n -> 0".
inline ConditionResult vanishing_forces_zero(const std::string& name,
                                             const ModulusFunction& phi,
                                             const std::vector<double>& anchors,
                                             const SequenceFamily& family) {
  ConditionResult c{.name = name};
  if (anchors.empty()) {
    c.verdict = Verdict::inapplicable;
    c.note = "no anchors at or above " + fmt_double(kMinSideConditionAnchor);
    return c;
  }
  double min_margin = infinity();
  for (double anchor : anchors) {
    if (!(anchor > 0.0)) continue;
    for (const auto& seq : family.at(anchor)) {
      std::vector<double> values;
      for (double t : seq.terms()) values.push_back(phi(t));
      const LimitEstimate est = estimate_limsup(values, kLimitTail);
      if (est.unreliable || std::isnan(est.value)) {
        c.unreliable = true;
        continue;
      }
      const double margin = est.value - kPositiveTol;
      if (!(margin > 0.0)) {
        return make_fail(
            name,
            Witness{std::string("phi vanishes along a sequence decreasing "
                                "to a positive anchor (") +
                        to_string(seq.generator) + ")",
                    {{anchor}},
                    {est.value},
                    {}},
            margin);
      }
      min_margin = std::min(min_margin, margin);
    }
  }
  c.margin = min_margin;
  cap_refutation_only(c);
  return c;
}

inline ConditionResult strictly_increasing_on_grid(
    const std::string& name, const ModulusFunction& f,
    const std::vector<double>& grid) {
  ConditionResult c{.name = name};
  double min_gap = infinity();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = f(grid[i]);
    const double b = f(grid[i + 1]);
    if (std::isnan(a) || std::isnan(b)) {
      c.unreliable = true;
      continue;
    }
    if (!(a < b)) {
      return make_fail(name,
                       Witness{"not strictly increasing",
                               {{grid[i]}, {grid[i + 1]}},
                               {a, b},
                               {static_cast<std::ptrdiff_t>(i)}},
                       b - a);
    }
    min_gap = std::min(min_gap, b - a);
  }
  apply_strict_gap(c, min_gap);
  return c;
}

inline ConditionResult nondecreasing_on_grid(const std::string& name,
                                             const ModulusFunction& f,
                                             const std::vector<double>& grid) {
  ConditionResult c{.name = name};
  double min_step = infinity();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = f(grid[i]);
    const double b = f(grid[i + 1]);
    if (std::isnan(a) || std::isnan(b)) {
      c.unreliable = true;
      continue;
    }
    if (a > b) {
      return make_fail(name,
                       Witness{"value decreases between grid points",
                               {{grid[i]}, {grid[i + 1]}},
                               {a, b},
                               {static_cast<std::ptrdiff_t>(i)}},
                       b - a);
    }
    min_step = std::min(min_step, b - a);
  }
  if (std::isfinite(min_step)) c.margin = min_step;
  return c;
}

inline ConditionResult right_limits_finite(const std::string& name,
                                           const ModulusFunction& f,
                                           const std::vector<double>& anchors,
                                           int depth) {
  ConditionResult c{.name = name};
  for (double anchor : anchors) {
    if (!(anchor > 0.0)) continue;
    RightApproachSequence seq{anchor, RightApproachSequence::Generator::dyadic,
                              depth, {}};
    const LimitEstimate est = estimate_right_limit(f, anchor, seq);
    if (est.unreliable) {
      c.unreliable = true;
      c.note = "oscillating window at anchor " + fmt_double(anchor);
      continue;
    }
    if (!std::isfinite(est.value)) {
      return make_fail(name,
                       Witness{"right-limit estimate is not finite",
                               {{anchor}},
                               {est.value},
                               {}},
                       quiet_nan());
    }
  }
  cap_refutation_only(c);
  return c;
}

}  // namespace detail

// Order gap between the pair: E(t) < F(s) for every grid pair t <= s.
// Witness on failure is the first violating pair in grid order; on success
// the margin is the minimum observed gap.
inline CheckReport check_c1(const ModulusFunction& e, const ModulusFunction& f,
                            const std::vector<double>& grid) {
  detail::require_grid(grid, "check_c1");
  CheckReport report;
  report.certificate_kind = "compatible_pair_c1";
  report.sample_size = grid.size() * (grid.size() + 1) / 2;

  std::vector<double> ev(grid.size()), fv(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ev[i] = e(grid[i]);
    fv[i] = f(grid[i]);
  }

  ConditionResult c{.name = "order_gap"};
  double min_gap = infinity();
  double min_t = quiet_nan(), min_s = quiet_nan();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i; j < grid.size(); ++j) {
      const double gap = fv[j] - ev[i];
      if (std::isnan(gap)) {
        c.unreliable = true;
        continue;
      }
      if (!(gap > 0.0)) {
        c = make_fail("order_gap",
                      Witness{"order gap violated",
                              {{grid[i]}, {grid[j]}},
                              {ev[i], fv[j]},
                              {static_cast<std::ptrdiff_t>(i),
                               static_cast<std::ptrdiff_t>(j)}},
                      gap);
        report.conditions.push_back(std::move(c));
        return report;
      }
      if (gap < min_gap) {
        min_gap = gap;
        min_t = grid[i];
        min_s = grid[j];
      }
    }
  }
  apply_strict_gap(c, min_gap);
  c.note = "minimum gap at t=" + fmt_double(min_t) + ", s=" + fmt_double(min_s);
  report.conditions.push_back(std::move(c));
  return report;
}

// Band condition of the pair: for sequences t_n decreasing to the anchor and
// an adversarial s_n in (anchor, t_n) minimizing F, the tail limsup of
// F(s_n) - E(t_n) must exceed the tolerance. Every generated sequence probes
// the same right-limit gap, but a probe's precision is its terminal distance
// to the anchor, so the verdict at each anchor comes from the finest probe;
// a coarser probe that has not resolved the gap carries no extra evidence.
inline CheckReport check_c2(const ModulusFunction& e, const ModulusFunction& f,
                            const std::vector<double>& anchors,
                            const SequenceFamily& family,
                            double tolerance = 0.0) {
  detail::require_grid(anchors, "check_c2");
  CheckReport report;
  report.certificate_kind = "compatible_pair_c2";
  report.sample_size = anchors.size();

  ConditionResult c{.name = "adversarial_band_limsup"};
  double min_margin = infinity();
  for (double anchor : anchors) {
    struct Probe {
      double width = infinity();
      double value = 0.0;
      RightApproachSequence::Generator generator =
          RightApproachSequence::Generator::dyadic;
    };
    std::optional<Probe> finest;
    for (const auto& seq : family.at(anchor)) {
      const std::vector<double> terms = seq.terms();
      std::vector<double> values;
      bool all_unbounded = true;
      for (double t_n : terms) {
        const double width = t_n - anchor;
        double s_best = anchor + width * std::ldexp(1.0, -20);
        double f_best = f(s_best);
        for (int j = 1; j <= 64; ++j) {
          const double s = anchor + width * static_cast<double>(j) / 65.0;
          if (!(s > anchor) || !(s < t_n)) continue;
          const double fs = f(s);
          if (fs < f_best) {
            f_best = fs;
            s_best = s;
          }
        }
        const double val = f_best - e(t_n);
        if (std::isfinite(val)) all_unbounded = false;
        values.push_back(val);
      }
      if (values.size() < 2) continue;
      if (all_unbounded) {
        c.verdict = Verdict::inapplicable;
        c.unreliable = true;
        c.note = "F unbounded below along every approach interval at anchor " +
                 fmt_double(anchor);
        report.conditions.push_back(std::move(c));
        return report;
      }
      const LimitEstimate est = estimate_limsup(values);
      if (est.unreliable || std::isnan(est.value)) {
        c.unreliable = true;
        continue;
      }
      const double width_end = terms.back() - anchor;
      if (!finest || width_end < finest->width) {
        finest = Probe{width_end, est.value, seq.generator};
      }
    }
    if (!finest) {
      c.unreliable = true;
      continue;
    }
    const double margin = finest->value - tolerance;
    if (!(margin > 0.0)) {
      c = make_fail(
          "adversarial_band_limsup",
          Witness{std::string("band limsup at the anchor (") +
                      to_string(finest->generator) +
                      ") is not above the tolerance",
                  {{anchor}},
                  {finest->value},
                  {}},
          margin);
      report.conditions.push_back(std::move(c));
      return report;
    }
    min_margin = std::min(min_margin, margin);
  }
  apply_strict_gap(c, min_margin);
  detail::cap_refutation_only(c);
  report.conditions.push_back(std::move(c));
  return report;
}

// Side conditions for the (phi, F) contraction theorems. The selected set
// decides which conditions apply:
//   i_ii_iii        - F strictly increasing, F -> -inf at 0+, right liminf
//                     of phi positive at every anchor (including 0).
//   iii_prime       - right limsup of phi positive at anchors > 0; F must
//                     have finite right limits.
//   iii_doubleprime - phi vanishing along a decreasing sequence forces the
//                     sequence to 0; F must be nondecreasing.
inline CheckReport check_wardowski_side_conditions(
    const ModulusFunction& phi, const ModulusFunction& f, ConditionSet set,
    const std::vector<double>& t_grid, const SequenceFamily& family) {
  detail::require_grid(t_grid, "check_wardowski_side_conditions");
  CheckReport report;
  report.certificate_kind = "wardowski_side_conditions";
  report.sample_size = t_grid.size();

  switch (set) {
    case ConditionSet::i_ii_iii: {
      report.conditions.push_back(detail::strictly_increasing_on_grid(
          "F_strictly_increasing", f, t_grid));
      report.conditions.push_back(detail::diverges_to_minus_infinity(
          "F_diverges_at_zero", f, family.depth));
      report.conditions.push_back(detail::right_estimate_positive(
          "phi_right_liminf_positive", phi,
          detail::side_condition_anchors(t_grid, /*include_zero=*/true),
          family, /*use_liminf=*/true));
      break;
    }
    case ConditionSet::iii_prime: {
      report.conditions.push_back(detail::right_estimate_positive(
          "phi_right_limsup_positive", phi,
          detail::side_condition_anchors(t_grid, /*include_zero=*/false),
          family, /*use_liminf=*/false));
      report.conditions.push_back(detail::right_limits_finite(
          "F_right_limits_finite", f,
          detail::side_condition_anchors(t_grid, /*include_zero=*/false),
          family.depth));
      break;
    }
    case ConditionSet::iii_doubleprime: {
      report.conditions.push_back(detail::vanishing_forces_zero(
          "phi_vanishing_forces_zero", phi,
          detail::side_condition_anchors(t_grid, /*include_zero=*/false),
          family));
      report.conditions.push_back(
          detail::nondecreasing_on_grid("F_nondecreasing", f, t_grid));
      break;
    }
  }
  return report;
}

// Consistency of the two phi side-condition checks: the vanishing check
// passing while the limsup-positivity check fails on the same anchors would
// be a defect in the checks themselves.
inline CheckReport check_iii_doubleprime_implies_iii_prime(
    const ModulusFunction& phi, const std::vector<double>& t_grid,
    const SequenceFamily& family) {
  detail::require_grid(t_grid, "check_iii_doubleprime_implies_iii_prime");
  CheckReport report;
  report.certificate_kind = "iii_doubleprime_implies_iii_prime";
  report.sample_size = t_grid.size();

  const auto anchors =
      detail::side_condition_anchors(t_grid, /*include_zero=*/false);
  ConditionResult dp = detail::vanishing_forces_zero("iii_doubleprime", phi,
                                                     anchors, family);
  ConditionResult p = detail::right_estimate_positive(
      "iii_prime", phi, anchors, family, /*use_liminf=*/false);

  ConditionResult consistent{.name = "implication_consistent"};
  consistent.note = std::string("iii_doubleprime=") + to_string(dp.verdict) +
                    ", iii_prime=" + to_string(p.verdict);
  const bool dp_holds = dp.verdict == Verdict::pass ||
                        dp.verdict == Verdict::refutation_only_pass;
  if (dp_holds && p.verdict == Verdict::fail) {
    consistent.verdict = Verdict::fail;
    consistent.witness = Witness{
        "internal inconsistency: the vanishing check passed while the "
        "limsup-positivity check refuted on the same anchors",
        p.witness ? p.witness->points : std::vector<Point>{},
        p.witness ? p.witness->values : std::vector<double>{},
        {}};
  }
  report.conditions.push_back(std::move(dp));
  report.conditions.push_back(std::move(p));
  report.conditions.push_back(std::move(consistent));
  return report;
}

// Modulus conditions of the contractive-map theorem with a right-limsup
// bound: phi(t) < t pointwise and right limsup of phi below the anchor.
inline CheckReport check_ri(const ModulusFunction& phi,
                            const std::vector<double>& t_grid,
                            const SequenceFamily& family) {
  detail::require_grid(t_grid, "check_ri");
  CheckReport report;
  report.certificate_kind = "ri_modulus";
  report.sample_size = t_grid.size();
  report.conditions.push_back(detail::pointwise_strict_gap(
      "phi_below_identity", t_grid, [&](double t) { return phi(t); },
      [](double t) { return t; }));
  report.conditions.push_back(detail::right_estimate_below_identity(
      "right_limsup_below_identity", phi, t_grid, family,
      /*use_liminf=*/false));
  return report;
}

// Relaxed variant: the right bound only has to hold for the liminf, and the
// modulus must stay positive (it bounds distances directly).
inline CheckReport check_improved_ri_modulus(const ModulusFunction& e,
                                             const std::vector<double>& t_grid,
                                             const SequenceFamily& family) {
  detail::require_grid(t_grid, "check_improved_ri_modulus");
  CheckReport report;
  report.certificate_kind = "improved_ri_modulus";
  report.sample_size = t_grid.size();
  report.conditions.push_back(detail::pointwise_strict_gap(
      "modulus_positive", t_grid, [](double) { return 0.0; },
      [&](double t) { return e(t); }));
  report.conditions.push_back(detail::pointwise_strict_gap(
      "modulus_below_identity", t_grid, [&](double t) { return e(t); },
      [](double t) { return t; }));
  report.conditions.push_back(detail::right_estimate_below_identity(
      "right_liminf_below_identity", e, t_grid, family,
      /*use_liminf=*/true));
  return report;
}

// Pair conditions in the nondecreasing-F formulation: F nondecreasing,
// E strictly below F pointwise, and per-anchor the right liminf of E below
// the right limit of F.
inline CheckReport check_proinov(const ModulusFunction& e,
                                 const ModulusFunction& f,
                                 const std::vector<double>& grid,
                                 const std::vector<double>& anchors,
                                 const SequenceFamily& family) {
  detail::require_grid(grid, "check_proinov");
  detail::require_grid(anchors, "check_proinov anchors");
  CheckReport report;
  report.certificate_kind = "proinov_pair";
  report.sample_size = grid.size();

  report.conditions.push_back(
      detail::nondecreasing_on_grid("F_nondecreasing", f, grid));
  report.conditions.push_back(detail::pointwise_strict_gap(
      "E_below_F", grid, [&](double t) { return e(t); },
      [&](double t) { return f(t); }));

  ConditionResult c{.name = "right_liminf_gap"};
  double min_gap = infinity();
  for (double anchor : anchors) {
    RightApproachSequence dyadic{
        anchor, RightApproachSequence::Generator::dyadic, family.depth, {}};
    const LimitEstimate f_right = estimate_right_limit(f, anchor, dyadic);
    if (f_right.unreliable || !std::isfinite(f_right.value)) {
      c.unreliable = true;
      c.note = "right limit of F unreliable at anchor " + fmt_double(anchor);
      continue;
    }
    for (const auto& seq : family.at(anchor)) {
      std::vector<double> values;
      for (double t : seq.terms()) values.push_back(e(t));
      const LimitEstimate est = estimate_liminf(values, detail::kLimitTail);
      if (est.unreliable || std::isnan(est.value)) {
        c.unreliable = true;
        continue;
      }
      const double gap = f_right.value - est.value;
      if (!(gap > 0.0)) {
        c = make_fail(
            "right_liminf_gap",
            Witness{std::string("right liminf of E at the anchor (") +
                        to_string(seq.generator) +
                        ") reaches the right limit of F",
                    {{anchor}},
                    {est.value, f_right.value},
                    {}},
            gap);
        report.conditions.push_back(std::move(c));
        return report;
      }
      min_gap = std::min(min_gap, gap);
    }
  }
  apply_strict_gap(c, min_gap);
  detail::cap_refutation_only(c);
  report.conditions.push_back(std::move(c));
  return report;
}

}  // namespace fpcert
