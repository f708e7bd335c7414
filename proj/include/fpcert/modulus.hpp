#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fpcert/report.hpp"

namespace fpcert {

enum class Monotonicity { none, nondecreasing, strictly_increasing };

inline const char* to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::none: return "none";
    case Monotonicity::nondecreasing: return "nondecreasing";
    case Monotonicity::strictly_increasing: return "strictly_increasing";
  }
  return "unknown";
}

// Scalar function on (0, inf) with extended-real values: +/-infinity are
// legal outputs, evaluation at t <= 0 is rejected.
class ModulusFunction {
 public:
  ModulusFunction()
      : name_("identity"),
        fn_([](double t) { return t; }),
        monotone_(Monotonicity::strictly_increasing),
        right_continuous_(true) {}

  ModulusFunction(std::string name, std::function<double(double)> fn,
                  Monotonicity monotone, bool right_continuous)
      : name_(std::move(name)),
        fn_(std::move(fn)),
        monotone_(monotone),
        right_continuous_(right_continuous) {
    if (!fn_) throw std::invalid_argument("modulus: empty evaluator");
  }

  double operator()(double t) const {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("modulus '" + name_ +
                                  "': argument must be a finite positive real");
    }
    return fn_(t);
  }

  const std::string& name() const { return name_; }
  Monotonicity declared_monotone() const { return monotone_; }
  bool declared_right_continuous() const { return right_continuous_; }

 private:
  std::string name_;
  std::function<double(double)> fn_;
  Monotonicity monotone_;
  bool right_continuous_;
};

inline double eval(const ModulusFunction& f, double t) { return f(t); }

// Strictly decreasing sequence approaching its anchor from the right.
struct RightApproachSequence {
  enum class Generator { dyadic, harmonic, custom };

  double anchor = 0.0;  // >= 0; generated terms stay strictly above it
  Generator generator = Generator::dyadic;
  int depth = 40;
  std::vector<double> custom_terms;

  std::vector<double> terms() const {
    if (!(anchor >= 0.0) || !std::isfinite(anchor)) {
      throw std::invalid_argument(
          "right-approach sequence: anchor must be finite and >= 0");
    }
    std::vector<double> t;
    switch (generator) {
      case Generator::dyadic: {
        if (depth < 1) {
          throw std::invalid_argument("right-approach sequence: depth >= 1");
        }
        t.reserve(static_cast<std::size_t>(depth));
        for (int k = 1; k <= depth; ++k) {
          const double term = anchor + std::ldexp(1.0, -k);
          if (term <= anchor) break;  // below double resolution at this anchor
          t.push_back(term);
        }
        break;
      }
      case Generator::harmonic: {
        if (depth < 1) {
          throw std::invalid_argument("right-approach sequence: depth >= 1");
        }
        t.reserve(static_cast<std::size_t>(depth));
        // Offsets scale with a positive anchor so convergence is relative
        // to it; at anchor 0 the offsets are absolute.
        const double scale = anchor > 0.0 ? anchor : 1.0;
        for (int k = 1; k <= depth; ++k) {
          const double term = anchor + scale / static_cast<double>(k);
          if (term <= anchor) break;
          t.push_back(term);
        }
        break;
      }
      case Generator::custom: {
        for (double v : custom_terms) {
          if (!(v > anchor)) {
            throw std::invalid_argument(
                "right-approach sequence: custom terms must stay above the "
                "anchor");
          }
        }
        t = custom_terms;
        break;
      }
    }
    if (t.empty()) {
      throw std::invalid_argument(
          "right-approach sequence: no representable terms");
    }
    return t;
  }
};

inline const char* to_string(RightApproachSequence::Generator g) {
  switch (g) {
    case RightApproachSequence::Generator::dyadic: return "dyadic";
    case RightApproachSequence::Generator::harmonic: return "harmonic";
    case RightApproachSequence::Generator::custom: return "custom";
  }
  return "unknown";
}

// The approach sequences a limit-style check runs at each anchor.
struct SequenceFamily {
  std::vector<RightApproachSequence::Generator> generators = {
      RightApproachSequence::Generator::dyadic,
      RightApproachSequence::Generator::harmonic};
  int depth = 40;

  std::vector<RightApproachSequence> at(double anchor) const {
    std::vector<RightApproachSequence> seqs;
    seqs.reserve(generators.size());
    for (auto g : generators) {
      seqs.push_back(RightApproachSequence{anchor, g, depth, {}});
    }
    return seqs;
  }
};

struct LimitEstimate {
  double value = quiet_nan();
  std::size_t window_tail = 2;  // >= 2
  bool refuted = false;    // set by checks that test an inequality claim
  bool unreliable = false;  // oscillation or mixed non-finite values
};

namespace detail {

struct TailStats {
  double mean = quiet_nan();
  double max = quiet_nan();
  double min = quiet_nan();
  bool all_finite = false;
  bool all_pos_inf = false;
  bool all_neg_inf = false;
  bool any_nan = false;
};

inline TailStats tail_stats(const std::vector<double>& v, std::size_t tail) {
  TailStats s;
  if (v.empty() || tail == 0) return s;
  tail = std::min(tail, v.size());
  const std::size_t begin = v.size() - tail;
  s.all_finite = true;
  s.all_pos_inf = true;
  s.all_neg_inf = true;
  double sum = 0.0, mx = -infinity(), mn = infinity();
  for (std::size_t i = begin; i < v.size(); ++i) {
    const double x = v[i];
    if (std::isnan(x)) {
      s.any_nan = true;
      s.all_finite = s.all_pos_inf = s.all_neg_inf = false;
      continue;
    }
    if (!std::isfinite(x)) {
      s.all_finite = false;
      if (x > 0) s.all_neg_inf = false;
      if (x < 0) s.all_pos_inf = false;
    } else {
      s.all_pos_inf = s.all_neg_inf = false;
    }
    sum += x;
    mx = std::max(mx, x);
    mn = std::min(mn, x);
  }
  s.mean = sum / static_cast<double>(tail);
  s.max = mx;
  s.min = mn;
  return s;
}

}  // namespace detail

inline std::size_t default_tail(std::size_t length) {
  return std::max<std::size_t>(16, length / 10);
}

// Finite proxy for limsup: the largest value among the trailing `tail`
// suffix maxima, i.e. the maximum over the tail window. tail == 0 selects
// the default max(16, length/10).
inline LimitEstimate estimate_limsup(const std::vector<double>& values,
                                     std::size_t tail = 0) {
  if (values.size() < 2) {
    throw std::invalid_argument("estimate_limsup: need at least two values");
  }
  if (tail == 0) tail = default_tail(values.size());
  tail = std::min(std::max<std::size_t>(tail, 2), values.size());
  const auto stats = detail::tail_stats(values, tail);
  LimitEstimate est;
  est.window_tail = tail;
  est.value = stats.max;
  est.unreliable = stats.any_nan;
  return est;
}

inline LimitEstimate estimate_liminf(const std::vector<double>& values,
                                     std::size_t tail = 0) {
  if (values.size() < 2) {
    throw std::invalid_argument("estimate_liminf: need at least two values");
  }
  if (tail == 0) tail = default_tail(values.size());
  tail = std::min(std::max<std::size_t>(tail, 2), values.size());
  const auto stats = detail::tail_stats(values, tail);
  LimitEstimate est;
  est.window_tail = tail;
  est.value = stats.min;
  est.unreliable = stats.any_nan;
  return est;
}

// Evaluates f along the approach sequence and averages the trailing window.
// The estimate is unreliable when the window still oscillates beyond
// oscillation_tol or mixes non-finite values.
inline LimitEstimate estimate_right_limit(const ModulusFunction& f, double t,
                                          const RightApproachSequence& seq,
                                          double oscillation_tol = 1e-6) {
  if (seq.anchor != t) {
    throw std::invalid_argument(
        "estimate_right_limit: sequence anchor must equal t");
  }
  const std::vector<double> terms = seq.terms();
  std::vector<double> values;
  values.reserve(terms.size());
  for (double s : terms) values.push_back(f(s));

  LimitEstimate est;
  est.window_tail =
      std::max<std::size_t>(2, std::min<std::size_t>(8, values.size()));
  const auto stats = detail::tail_stats(values, est.window_tail);
  if (stats.all_finite) {
    est.value = stats.mean;
    est.unreliable = (stats.max - stats.min) > oscillation_tol;
  } else if (stats.all_pos_inf) {
    est.value = infinity();
  } else if (stats.all_neg_inf) {
    est.value = -infinity();
  } else {
    est.value = quiet_nan();
    est.unreliable = true;
  }
  return est;
}

// Limit law for limsup against a convergent summand: with a_n convergent and
// b_n bounded, limsup(a_n + b_n) = lim a_n + limsup b_n. Reports
// inapplicable when a_n fails the convergence heuristic or b_n is unbounded.
inline CheckReport check_limsup_sum_rule(const std::vector<double>& a,
                                         const std::vector<double>& b,
                                         std::size_t tail = 0,
                                         double tolerance = 5e-2,
                                         double convergence_tol = 1e-3) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("limsup sum rule: length mismatch");
  }
  if (a.size() < 4) {
    throw std::invalid_argument("limsup sum rule: need at least four terms");
  }
  if (tail == 0) tail = default_tail(a.size());
  tail = std::min(std::max<std::size_t>(tail, 2), a.size());

  CheckReport report;
  report.certificate_kind = "limsup_sum_rule";
  report.sample_size = a.size();

  const auto a_stats = detail::tail_stats(a, tail);
  ConditionResult a_conv{.name = "a_convergent"};
  if (!a_stats.all_finite || (a_stats.max - a_stats.min) > convergence_tol) {
    a_conv.verdict = Verdict::inapplicable;
    a_conv.note = "tail oscillation " +
                  fmt_double(a_stats.max - a_stats.min) +
                  " exceeds heuristic tolerance " +
                  fmt_double(convergence_tol);
  } else {
    a_conv.margin = convergence_tol - (a_stats.max - a_stats.min);
    a_conv.note = "tail oscillation " + fmt_double(a_stats.max - a_stats.min);
  }

  ConditionResult b_bounded{.name = "b_bounded"};
  for (double x : b) {
    if (!std::isfinite(x)) {
      b_bounded.verdict = Verdict::inapplicable;
      b_bounded.note = "non-finite term";
      break;
    }
  }

  report.conditions.push_back(a_conv);
  report.conditions.push_back(b_bounded);
  if (a_conv.verdict != Verdict::pass || b_bounded.verdict != Verdict::pass) {
    return report;
  }

  std::vector<double> sum(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
  const double lhs = estimate_limsup(sum, tail).value;
  const double rhs = a_stats.mean + estimate_limsup(b, tail).value;

  ConditionResult rule{.name = "sum_rule"};
  rule.note = "lhs " + fmt_double(lhs) + " vs rhs " + fmt_double(rhs);
  rule.witness = Witness{"both sides of the identity", {}, {lhs, rhs}, {}};
  const double gap = tolerance - std::fabs(lhs - rhs);
  rule.margin = gap;
  if (!(gap > 0.0)) {
    rule.verdict = Verdict::fail;
    rule.witness->description = "sides differ beyond tolerance";
  }
  report.conditions.push_back(std::move(rule));
  return report;
}

namespace modulus {

inline ModulusFunction identity() {
  return ModulusFunction("identity", [](double t) { return t; },
                         Monotonicity::strictly_increasing, true);
}

inline ModulusFunction logarithm() {
  return ModulusFunction("log", [](double t) { return std::log(t); },
                         Monotonicity::strictly_increasing, true);
}

inline ModulusFunction affine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("affine modulus: coefficients must be finite");
  }
  const Monotonicity m = a > 0.0 ? Monotonicity::strictly_increasing
                        : a == 0.0 ? Monotonicity::nondecreasing
                                   : Monotonicity::none;
  return ModulusFunction(
      "affine(" + fmt_double(a) + "," + fmt_double(b) + ")",
      [a, b](double t) { return a * t + b; }, m, true);
}

inline ModulusFunction power(double p) {
  if (!std::isfinite(p)) {
    throw std::invalid_argument("power modulus: exponent must be finite");
  }
  const Monotonicity m = p > 0.0 ? Monotonicity::strictly_increasing
                                 : Monotonicity::none;
  return ModulusFunction("power(" + fmt_double(p) + ")",
                         [p](double t) { return std::pow(t, p); }, m, true);
}

inline ModulusFunction constant(double c) {
  if (std::isnan(c)) {
    throw std::invalid_argument("constant modulus: value must not be NaN");
  }
  return ModulusFunction("constant(" + fmt_double(c) + ")",
                         [c](double) { return c; },
                         Monotonicity::nondecreasing, true);
}

// Continuous but non-monotone: 5/2 on (0, 1/4), (1+t)/sqrt(t) from 1/4 on.
// Attains its minimum 2 at t = 1 and satisfies (2/5)F(t) < F(s) for t <= s.
inline ModulusFunction app4_f() {
  return ModulusFunction(
      "app4_F",
      [](double t) { return t < 0.25 ? 2.5 : (1.0 + t) / std::sqrt(t); },
      Monotonicity::none, true);
}

inline ModulusFunction scaled(double alpha, const ModulusFunction& f) {
  if (!std::isfinite(alpha)) {
    throw std::invalid_argument("scaled modulus: factor must be finite");
  }
  const Monotonicity m =
      alpha > 0.0 ? f.declared_monotone()
      : alpha == 0.0 ? Monotonicity::nondecreasing
                     : Monotonicity::none;
  ModulusFunction inner = f;
  return ModulusFunction(
      "scaled(" + fmt_double(alpha) + "," + f.name() + ")",
      [alpha, inner](double t) { return alpha * inner(t); }, m,
      f.declared_right_continuous());
}

// Tight step bound for the cosine map: |cos x - cos y| <= 2 sin(d/2) for
// d <= pi; past pi the bound is capped by an affine tail that stays below t.
inline ModulusFunction cos_chord() {
  return ModulusFunction(
      "cos_chord",
      [](double t) {
        constexpr double kPi = 3.14159265358979323846;
        if (t <= kPi) return 2.0 * std::sin(t / 2.0);
        return 2.0 + 1e-3 * (t - kPi);
      },
      Monotonicity::strictly_increasing, true);
}

// Band modulus under which the cosine map satisfies the Meir-Keeler
// condition: delta(eps) keeps eps + delta below 2*asin(eps/2) where the
// chord bound is the binding constraint, and is a constant past it.
inline ModulusFunction cos_mk_delta() {
  return ModulusFunction(
      "cos_mk_delta",
      [](double eps) {
        if (eps < 1.9) return 0.999 * (2.0 * std::asin(eps / 2.0) - eps);
        return 0.5;
      },
      Monotonicity::none, true);
}

}  // namespace modulus

namespace detail {

inline double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("modulus registry: bad " + what + " '" + s +
                                "'");
  }
}

}  // namespace detail

inline std::vector<std::string> builtin_names() {
  return {"identity",  "log",    "affine(a,b)", "power(p)",
          "constant(c)", "app4_F", "scaled(alpha,f)", "cos_chord",
          "cos_mk_delta"};
}

// Registry lookup. Parameterized entries use a colon-separated argument
// list: "affine:2,1", "power:0.5", "constant:0.1", "scaled:0.4,app4_F"
// (the scaled inner function may itself carry arguments).
inline ModulusFunction builtin(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : spec.substr(colon + 1);

  auto require_no_args = [&](const char* n) {
    if (!args.empty()) {
      throw std::invalid_argument(std::string("modulus registry: '") + n +
                                  "' takes no arguments");
    }
  };

  if (name == "identity") {
    require_no_args("identity");
    return modulus::identity();
  }
  if (name == "log") {
    require_no_args("log");
    return modulus::logarithm();
  }
  if (name == "app4_F") {
    require_no_args("app4_F");
    return modulus::app4_f();
  }
  if (name == "cos_chord") {
    require_no_args("cos_chord");
    return modulus::cos_chord();
  }
  if (name == "cos_mk_delta") {
    require_no_args("cos_mk_delta");
    return modulus::cos_mk_delta();
  }
  if (name == "affine") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("modulus registry: affine needs 'a,b'");
    }
    return modulus::affine(
        detail::parse_number(args.substr(0, comma), "affine coefficient"),
        detail::parse_number(args.substr(comma + 1), "affine offset"));
  }
  if (name == "power") {
    return modulus::power(detail::parse_number(args, "power exponent"));
  }
  if (name == "constant") {
    return modulus::constant(detail::parse_number(args, "constant value"));
  }
  if (name == "scaled") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument(
          "modulus registry: scaled needs 'alpha,<function>'");
    }
    const double alpha =
        detail::parse_number(args.substr(0, comma), "scale factor");
    return modulus::scaled(alpha, builtin(args.substr(comma + 1)));
  }
  throw std::invalid_argument("modulus registry: unknown name '" + name +
                              "'");
}

// Checks the declared monotonicity of f on an ascending grid.
inline CheckReport check_declared_monotonicity(const ModulusFunction& f,
                                               const std::vector<double>& grid) {
  CheckReport report;
  report.certificate_kind = "declared_monotonicity";
  report.sample_size = grid.size();
  ConditionResult c{.name = std::string("declared_") +
                            to_string(f.declared_monotone())};
  if (f.declared_monotone() == Monotonicity::none) {
    c.verdict = Verdict::inapplicable;
    c.note = "no monotonicity declared";
    report.conditions.push_back(std::move(c));
    return report;
  }
  double min_gap = infinity();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = f(grid[i]);
    const double b = f(grid[i + 1]);
    const double gap = b - a;
    min_gap = std::min(min_gap, gap);
    const bool ok = f.declared_monotone() == Monotonicity::strictly_increasing
                        ? (a < b)
                        : (a <= b);
    if (!ok) {
      c = make_fail(c.name,
                    Witness{"monotonicity violated between grid points",
                            {{grid[i]}, {grid[i + 1]}},
                            {a, b},
                            {static_cast<std::ptrdiff_t>(i)}},
                    gap);
      report.conditions.push_back(std::move(c));
      return report;
    }
  }
  if (std::isfinite(min_gap)) c.margin = min_gap;
  report.conditions.push_back(std::move(c));
  return report;
}

}  // namespace fpcert
