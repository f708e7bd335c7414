#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpcert/common.hpp"

namespace fpcert {

// refutation_only_pass marks conditions that quantify over limits: finite
// sampling can refute them but never confirm them, so a clean run earns at
// most this verdict.
enum class Verdict { pass, fail, inapplicable, refutation_only_pass };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inapplicable: return "inapplicable";
    case Verdict::refutation_only_pass: return "refutation_only_pass";
  }
  return "unknown";
}

struct Witness {
  std::string description;
  std::vector<Point> points;
  std::vector<double> values;
  std::vector<std::ptrdiff_t> indices;
};

struct ConditionResult {
  std::string name;
  Verdict verdict = Verdict::pass;
  // A fail verdict always carries a witness; passing conditions may carry
  // one to expose the tightest observed pair.
  std::optional<Witness> witness;
  // Smallest gap observed for the condition's inequality (NaN if not
  // meaningful for the condition).
  double margin = quiet_nan();
  bool fragile = false;     // 0 < margin < kFragileGap
  bool unreliable = false;  // estimate oscillated or was non-finite
  std::string note;
};

struct CheckReport {
  std::string certificate_kind;
  std::vector<ConditionResult> conditions;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;

  Verdict overall() const {
    bool any_inapplicable = false, any_refutation_only = false;
    for (const auto& c : conditions) {
      if (c.verdict == Verdict::fail) return Verdict::fail;
      if (c.verdict == Verdict::inapplicable) any_inapplicable = true;
      if (c.verdict == Verdict::refutation_only_pass) any_refutation_only = true;
    }
    if (any_inapplicable) return Verdict::inapplicable;
    if (any_refutation_only) return Verdict::refutation_only_pass;
    return Verdict::pass;
  }

  bool passed() const {
    const Verdict v = overall();
    return v == Verdict::pass || v == Verdict::refutation_only_pass;
  }

  const ConditionResult* find(const std::string& name) const {
    for (const auto& c : conditions) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  // Smallest finite margin across conditions (NaN when none is recorded).
  double worst_margin() const {
    double worst = quiet_nan();
    for (const auto& c : conditions) {
      if (std::isnan(c.margin)) continue;
      if (std::isnan(worst) || c.margin < worst) worst = c.margin;
    }
    return worst;
  }
};

inline ConditionResult make_fail(std::string name, Witness witness,
                                 double margin = quiet_nan(),
                                 std::string note = "") {
  ConditionResult c;
  c.name = std::move(name);
  c.verdict = Verdict::fail;
  c.witness = std::move(witness);
  c.margin = margin;
  c.note = std::move(note);
  return c;
}

// Verdict for a strict inequality asserted with margin 0: gap <= 0 fails,
// a positive gap below kFragileGap passes but is flagged fragile.
inline void apply_strict_gap(ConditionResult& c, double gap) {
  c.margin = gap;
  if (!(gap > 0.0)) {
    c.verdict = Verdict::fail;
  } else if (gap < kFragileGap) {
    c.fragile = true;
  }
}

inline std::string to_text(const CheckReport& r) {
  std::string out;
  out += "check: " + r.certificate_kind + "\n";
  out += "overall: " + std::string(to_string(r.overall())) + "\n";
  out += "samples: " + std::to_string(r.sample_size) +
         "  seed: " + std::to_string(r.seed) + "\n";
  for (const auto& c : r.conditions) {
    out += "  condition " + c.name + ": " + to_string(c.verdict);
    if (!std::isnan(c.margin)) out += "  margin=" + fmt_double(c.margin);
    if (c.fragile) out += "  [fragile]";
    if (c.unreliable) out += "  [unreliable]";
    if (!c.note.empty()) out += "  (" + c.note + ")";
    out += "\n";
    if (c.witness) {
      out += "    witness: " + c.witness->description + "\n";
      for (const auto& p : c.witness->points) {
        out += "      point " + fmt_point(p) + "\n";
      }
      if (!c.witness->values.empty()) {
        out += "      values:";
        for (double v : c.witness->values) out += " " + fmt_double(v);
        out += "\n";
      }
    }
  }
  return out;
}

}  // namespace fpcert
