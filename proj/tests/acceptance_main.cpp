// Acceptance gate: twelve end-to-end criteria, each printed as a single
// [PASS]/[FAIL] line. Any failure makes the process exit nonzero.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fpcert/cli.hpp"

using namespace fpcert;

namespace {

struct Criterion {
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

// Traces produced along the way, tagged with the map they came from, so the
// final step-monotonicity sweep can revisit every orbit.
std::vector<std::pair<std::string, IterationTrace>>& trace_registry() {
  static std::vector<std::pair<std::string, IterationTrace>> registry;
  return registry;
}

void record_trace(const std::string& map_name, IterationTrace trace) {
  trace_registry().emplace_back(map_name, std::move(trace));
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

// 1. cos settles on the Dottie number from 1.0 with stock settings, agreeing
//    with an independent brute-force orbit, within the time budget.
void criterion_1(Criterion& c) {
  const GalleryEntry entry = instantiate("dottie_cos");
  const Point x0{1.0};

  IterationTrace trace(entry.map.space);
  double best_ms = infinity();
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    IterationTrace t = picard_iterate(entry.map, x0, IterationConfig{});
    best_ms = std::min(best_ms, elapsed_ms(t0));
    trace = std::move(t);
  }

  c.require(trace.verdict == TraceVerdict::converged, "orbit must converge");
  c.require(trace.iterations_used <= 200,
            "must converge in at most 200 iterations, used " +
                std::to_string(trace.iterations_used));
  const double x = trace.limit.has_value() ? (*trace.limit)[0] : quiet_nan();
  c.require(std::fabs(x - 0.739085133215161) <= 1e-9,
            "limit must match 0.739085133215161 within 1e-9, got " +
                fmt_double(x));

  double oracle = 1.0;
  for (int i = 0; i < 10000; ++i) oracle = std::cos(oracle);
  c.require(std::fabs(x - oracle) <= 1e-9,
            "limit must match the 10^4-step brute-force orbit within 1e-9");

  c.require(best_ms < 1.0, "a single solve must finish in under 1 ms, took " +
                               fmt_double(best_ms) + " ms");
  record_trace(entry.name, std::move(trace));
}

// 2. The Babylonian step reaches sqrt(2) to full double precision from 1.
void criterion_2(Criterion& c) {
  const GalleryEntry entry = instantiate("babylonian_sqrt2");
  IterationTrace trace = picard_iterate(entry.map, Point{1.0});

  c.require(trace.verdict == TraceVerdict::converged, "orbit must converge");
  c.require(trace.iterations_used <= 10,
            "must converge in at most 10 iterations, used " +
                std::to_string(trace.iterations_used));
  const double x = trace.limit.has_value() ? (*trace.limit)[0] : quiet_nan();
  c.require(std::fabs(x - 1.4142135623730951) <= 1e-12,
            "limit must match 1.4142135623730951 within 1e-12, got " +
                fmt_double(x));
  c.require(std::fabs(x - std::sqrt(2.0)) <= 1e-12,
            "limit must match std::sqrt(2.0) within 1e-12");
  record_trace(entry.name, std::move(trace));
}

// 3. x + 1/x: pairwise strictly contractive with vanishing steps, yet the
//    orbit is not Cauchy and no start settles, all inside one second.
void criterion_3(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const GalleryEntry entry = instantiate("x_plus_inv_x");

  const ExperimentConfig ec = experiment_from_config(KeyValueConfig::parse(
      "[check]\n"
      "seed = 7\n"
      "count = 10000\n"
      "[iteration]\n"
      "cauchy_tol = 0.01\n"));

  const CheckReport contractive =
      check_contractive(entry.map, ec.params.sampler);
  c.require(contractive.sample_size == 10000,
            "the contraction check must see 10^4 sampled pairs");
  c.require(contractive.passed(),
            "every sampled pair must contract strictly (0 violations)");

  IterationTrace trace =
      picard_iterate(entry.map, Point{1.0}, ec.params.iteration);
  c.require(trace.verdict == TraceVerdict::budget_exhausted,
            "the orbit must run out of budget without settling, got " +
                std::string(to_string(trace.verdict)));

  const CheckReport steps = check_step_limit_zero(trace, 100);
  c.require(steps.passed(),
            "tail steps must drop below the configured 0.01 tolerance");

  const CauchyDiagnostics diag =
      detect_cauchy(trace, 16, ec.params.iteration.cauchy_tol);
  c.require(!diag.is_cauchy,
            "the tail must not be Cauchy at the same tolerance (spread " +
                fmt_double(diag.tail_spread) + ")");

  const CheckReport uniq =
      uniqueness_probe(entry.map, entry.starts, ec.params.iteration);
  c.require(!uniq.passed(), "no start may converge, so the probe must fail");

  c.require(elapsed_ms(t0) < 1000.0, "the whole criterion must run in < 1 s");
  record_trace(entry.name, std::move(trace));
}

// 4. The piecewise benchmark modulus: 2/5 of it stays strictly below itself
//    across ordered pairs of a wide log grid, with the documented gap, exact
//    plateau value at 1/4, and a clean right limit there.
void criterion_4(Criterion& c) {
  const ModulusFunction f = modulus::app4_f();
  const double alpha = 0.4;

  std::vector<double> grid(200);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = std::pow(10.0, -6.0 + 12.0 * static_cast<double>(i) / 199.0);
  }
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);

  std::size_t violations = 0;
  double min_gap = infinity();
  std::size_t arg_t = 0, arg_s = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i; j < grid.size(); ++j) {
      const double gap = values[j] - alpha * values[i];
      if (!(gap > 0.0)) ++violations;
      if (gap < min_gap) {
        min_gap = gap;
        arg_t = i;
        arg_s = j;
      }
    }
  }
  c.require(violations == 0,
            "0 violations expected over ordered grid pairs, found " +
                std::to_string(violations));
  c.require(min_gap >= 1.0 - 1e-9,
            "minimum gap must stay >= 1 - 1e-9, got " + fmt_double(min_gap));
  c.require(values[arg_t] == 2.5,
            "the tightest pair's lower value must sit on the 5/2 plateau");
  c.require(std::fabs(values[arg_s] - 2.0) <= 0.01,
            "the tightest pair's upper value must be near the minimum 2");

  c.require(f(0.25) == 2.5, "value at 1/4 must be exactly 5/2");
  const RightApproachSequence seq{
      0.25, RightApproachSequence::Generator::dyadic, 40, {}};
  const LimitEstimate est = estimate_right_limit(f, 0.25, seq);
  c.require(!est.unreliable, "the right-limit estimate must be reliable");
  c.require(std::fabs(est.value - 2.5) <= 1e-6,
            "right limit at 1/4 must be 2.5 within 1e-6, got " +
                fmt_double(est.value));
}

// 5. limsup(a_n + b_n) = lim a_n + limsup b_n when a_n converges; both sides
//    come out as 3.0 here, and a non-convergent a_n routes to inapplicable.
void criterion_5(Criterion& c) {
  std::vector<double> a(1000), b(1000), osc(1000);
  for (std::size_t n = 1; n <= 1000; ++n) {
    a[n - 1] = 2.0 + 1.0 / static_cast<double>(n);
    b[n - 1] = (n % 2 == 0) ? 1.0 : -1.0;
    osc[n - 1] = b[n - 1];
  }

  const CheckReport rep = check_limsup_sum_rule(a, b, 100);
  c.require(rep.passed(), "the sum rule must hold for a convergent summand");
  const ConditionResult* rule = rep.find("sum_rule");
  c.require(rule != nullptr && rule->witness.has_value() &&
                rule->witness->values.size() >= 2,
            "the sum-rule condition must expose both sides");
  if (rule != nullptr && rule->witness.has_value() &&
      rule->witness->values.size() >= 2) {
    const double lhs = rule->witness->values[0];
    const double rhs = rule->witness->values[1];
    c.require(std::fabs(lhs - 3.0) <= 1e-2,
              "left side must be 3.0 within 1e-2, got " + fmt_double(lhs));
    c.require(std::fabs(rhs - 3.0) <= 1e-2,
              "right side must be 3.0 within 1e-2, got " + fmt_double(rhs));
  }

  const CheckReport inapplicable = check_limsup_sum_rule(osc, b, 100);
  c.require(inapplicable.overall() == Verdict::inapplicable,
            "an oscillating summand must make the rule inapplicable");
  const ConditionResult* conv = inapplicable.find("a_convergent");
  c.require(conv != nullptr && conv->verdict == Verdict::inapplicable,
            "the convergence precondition must be flagged inapplicable");
  c.require(inapplicable.find("sum_rule") == nullptr,
            "the sum rule itself must not be judged without convergence");
}

// 6. Every entry carrying a compatible-pair certificate: when the pair
//    premises pass, the map is strictly contractive and a band certificate
//    can be derived, across three seeds, with no inconsistency.
void criterion_6(Criterion& c) {
  const std::vector<std::uint64_t> seeds{11, 22, 33};
  std::size_t combos = 0, passing = 0, inconsistencies = 0;
  std::vector<std::string> pair_entries;

  for (const GalleryEntry& entry : gallery_entries()) {
    const CompatiblePairCertificate* ef = nullptr;
    for (const Certificate& cert : entry.recommended_certificates) {
      if (const auto* p = std::get_if<CompatiblePairCertificate>(&cert)) {
        ef = p;
        break;
      }
    }
    if (ef == nullptr) continue;
    pair_entries.push_back(entry.name);

    for (const std::uint64_t seed : seeds) {
      ++combos;
      CheckParams p;
      p.sampler.seed = seed;

      EfEvidence evidence;
      evidence.relaxed_route = ef->relaxed;
      evidence.c1 = check_c1(ef->e, ef->f, p.t_grid);
      evidence.c2 = check_c2(ef->e, ef->f, p.anchors, p.family);
      evidence.ef_inequality =
          check_ef_contraction(entry.map, ef->e, ef->f, p.sampler);
      evidence.contractive = check_contractive(entry.map, p.sampler);

      const bool pair_premises = (ef->relaxed || evidence.c1.passed()) &&
                                 evidence.c2.passed() &&
                                 evidence.ef_inequality.passed();
      if (!pair_premises) continue;
      ++passing;

      if (!evidence.contractive.passed()) {
        ++inconsistencies;
        c.problems.push_back(entry.name + " seed " + std::to_string(seed) +
                             ": pair premises passed but the map is not "
                             "strictly contractive");
        continue;
      }
      const DeriveCjmpResult derived =
          derive_cjmp_certificate(entry.map, evidence, p.eps_grid, p.sampler,
                                  p.delta_candidates, p.band_pair_count);
      const bool got_cjmp =
          derived.certificate.has_value() &&
          std::get_if<CjmpCertificate>(&*derived.certificate) != nullptr;
      if (!got_cjmp) {
        ++inconsistencies;
        c.problems.push_back(entry.name + " seed " + std::to_string(seed) +
                             ": no band certificate could be derived");
      }
    }

    for (const Point& s : entry.starts) {
      record_trace(entry.name, picard_iterate(entry.map, s));
    }
  }

  c.require(pair_entries.size() == 5,
            "five entries must carry a compatible-pair certificate, found " +
                std::to_string(pair_entries.size()));
  c.require(combos == 15 && passing == combos,
            "all entry/seed combinations must pass the pair premises (" +
                std::to_string(passing) + "/" + std::to_string(combos) + ")");
  c.require(inconsistencies == 0, "zero inconsistencies expected");
}

// 7. Both band conditions hold with the same modulus on identical samples
//    for every entry that ships one.
void criterion_7(Criterion& c) {
  std::size_t band_entries = 0;
  for (const GalleryEntry& entry : gallery_entries()) {
    const MeirKeelerCertificate* mk = nullptr;
    for (const Certificate& cert : entry.recommended_certificates) {
      if (const auto* p = std::get_if<MeirKeelerCertificate>(&cert)) {
        mk = p;
        break;
      }
    }
    if (mk == nullptr) continue;
    ++band_entries;

    CheckParams p;
    const CheckReport closed =
        check_meir_keeler(entry.map, mk->delta, p.eps_grid, p.sampler);
    const CheckReport open =
        check_mw_condition(entry.map, mk->delta, p.eps_grid, p.sampler);
    c.require(closed.passed(),
              entry.name + ": the closed-band condition must pass");
    c.require(open.passed(),
              entry.name +
                  ": the open-band condition must pass with the same modulus");
    c.require(closed.seed == open.seed &&
                  closed.sample_size == open.sample_size,
              entry.name + ": both checks must see identical samples");
  }
  c.require(band_entries == 2,
            "two entries must carry a band certificate, found " +
                std::to_string(band_entries));
}

// 8. For the 0.9-scaling map, the shifted-logarithm inequality and the plain
//    rate bound exp(-0.1) classify every sampled pair identically.
void criterion_8(Criterion& c) {
  const GalleryEntry entry = instantiate("log_wardowski");
  const ModulusFunction phi = modulus::constant(0.1);
  const ModulusFunction f = modulus::logarithm();

  PairSampler sampler;
  sampler.seed = 8;
  sampler.count = 10000;

  const CheckReport rep = check_wardowski(entry.map, phi, f, sampler);
  c.require(rep.passed(),
            "the shifted-logarithm inequality must hold on all pairs");

  const double rate = std::exp(-0.1);
  std::size_t compared = 0, disagreements = 0;
  for (const auto& [x, y] : sample_pairs(entry.map.space, sampler)) {
    const double dxy = distance(entry.map.space, x, y);
    const double dtxy = distance(entry.map.space, entry.map(x), entry.map(y));
    if (dxy <= kMinPositiveDistance || dtxy <= kMinPositiveDistance) continue;
    ++compared;
    const bool shifted_holds = phi(dxy) + f(dtxy) <= f(dxy);
    const bool rate_holds = dtxy <= rate * dxy;
    if (shifted_holds != rate_holds) ++disagreements;
  }
  c.require(compared >= 9000,
            "nearly all of the 10^4 pairs must be comparable, got " +
                std::to_string(compared));
  c.require(disagreements == 0,
            "0 disagreements expected, found " +
                std::to_string(disagreements));
}

// 9. The vanishing-forces-zero condition never contradicts the positive
//    right-limsup condition on the built-in modulus family, whichever
//    approach sequences drive the estimates.
void criterion_9(Criterion& c) {
  const std::vector<double> grid{0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0};
  const std::vector<ModulusFunction> family = phi_family();
  c.require(family.size() >= 5, "the family must have at least 5 members");

  bool has_designed_violator = false;
  for (const ModulusFunction& m : family) {
    if (m.name() == "vanishing_above_one") has_designed_violator = true;
  }
  c.require(has_designed_violator,
            "the family must include the designed violator");

  using G = RightApproachSequence::Generator;
  const std::vector<std::pair<std::string, SequenceFamily>> families{
      {"dyadic", SequenceFamily{{G::dyadic}, 40}},
      {"harmonic", SequenceFamily{{G::harmonic}, 40}},
      {"dyadic+harmonic", SequenceFamily{}}};

  for (const ModulusFunction& phi : family) {
    for (const auto& [fam_name, fam] : families) {
      const CheckReport rep =
          check_iii_doubleprime_implies_iii_prime(phi, grid, fam);
      const ConditionResult* consistent = rep.find("implication_consistent");
      c.require(consistent != nullptr &&
                    consistent->verdict != Verdict::fail,
                phi.name() + " with " + fam_name +
                    " sequences must stay consistent");
    }
  }
}

// 10. The discretized integral operator reaches the sampled exponential from
//     the zero function quickly, with a tail rate comfortably below 0.55.
void criterion_10(Criterion& c) {
  const GalleryEntry entry = instantiate("picard_lindelof_exp");
  IterationTrace trace = picard_iterate(entry.map, entry.starts.front());

  c.require(trace.verdict == TraceVerdict::converged, "orbit must converge");
  c.require(trace.iterations_used <= 60,
            "must converge in at most 60 iterations, used " +
                std::to_string(trace.iterations_used));

  double sup_error = 0.0;
  if (trace.limit.has_value()) {
    const Point& fp = *trace.limit;
    for (std::size_t i = 0; i < fp.size(); ++i) {
      const double target = std::exp(static_cast<double>(i) / 64.0);
      sup_error = std::max(sup_error, std::fabs(fp[i] - target));
    }
  } else {
    sup_error = infinity();
  }
  c.require(sup_error < 5e-4,
            "sup error against exp(t) must stay below 5e-4, got " +
                fmt_double(sup_error));

  const double rate = estimate_rate(trace, 8);
  c.require(rate <= 0.55,
            "tail rate must be at most 0.55, got " + fmt_double(rate));
  record_trace(entry.name, std::move(trace));
}

// 11. Two full gallery runs with identical settings produce byte-identical
//     summary files and both exit clean.
void criterion_11(Criterion& c) {
  namespace fs = std::filesystem;
  const fs::path dir1 = fs::temp_directory_path() / "fpcert_acceptance_run1";
  const fs::path dir2 = fs::temp_directory_path() / "fpcert_acceptance_run2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);

  ExperimentConfig ec;
  ec.command = "gallery-run";

  std::ostringstream out1, err1, out2, err2;
  ec.out_dir = dir1.string();
  const int rc1 = run(ec, out1, err1);
  ec.out_dir = dir2.string();
  const int rc2 = run(ec, out2, err2);

  c.require(rc1 == 0, "first run must exit 0, got " + std::to_string(rc1) +
                          (err1.str().empty() ? "" : " (" + err1.str() + ")"));
  c.require(rc2 == 0, "second run must exit 0, got " + std::to_string(rc2));

  const std::string csv1 = slurp(dir1 / "summary.csv");
  const std::string csv2 = slurp(dir2 / "summary.csv");
  c.require(!csv1.empty(), "the first summary file must exist");
  c.require(csv1 == csv2, "summary files must be byte-identical");
  c.require(out1.str() == out2.str(),
            "printed summaries must be identical too");
  c.require(csv1.rfind("# fpcert summary v1\n", 0) == 0,
            "the summary must carry its format header");
}

// 12. Steps strictly decrease along every orbit recorded by the earlier
//     criteria; each recorded orbit belongs to a certified map.
void criterion_12(Criterion& c) {
  std::set<std::string> certified;
  for (const GalleryEntry& entry : gallery_entries()) {
    if (!entry.recommended_certificates.empty()) certified.insert(entry.name);
  }

  const auto& registry = trace_registry();
  c.require(registry.size() >= 10,
            "earlier criteria must have recorded traces, found " +
                std::to_string(registry.size()));

  std::size_t checked = 0;
  for (const auto& [name, trace] : registry) {
    c.require(certified.count(name) == 1,
              name + ": recorded traces must come from certified maps");
    if (certified.count(name) == 0) continue;
    ++checked;
    const CheckReport rep = check_step_monotonicity(trace);
    if (!rep.passed()) {
      std::string detail = name + ": steps must strictly decrease";
      if (!rep.conditions.empty() && rep.conditions.front().witness) {
        const Witness& w = *rep.conditions.front().witness;
        if (w.values.size() >= 2) {
          detail += " (saw " + fmt_double(w.values[0]) + " then " +
                    fmt_double(w.values[1]) + ")";
        }
      }
      c.problems.push_back(detail);
    }
  }
  c.require(checked == registry.size(),
            "every recorded trace must be checked");
}

}  // namespace

int main() {
  struct Entry {
    int id;
    std::string description;
    std::function<void(Criterion&)> fn;
  };
  const std::vector<Entry> criteria{
      {1, "cos reaches the Dottie number from 1.0 within 1e-9, <= 200 "
          "iterations, < 1 ms",
       criterion_1},
      {2, "Babylonian step reaches sqrt(2) within 1e-12 in <= 10 iterations",
       criterion_2},
      {3, "x + 1/x contracts pairwise and steps vanish, yet no orbit settles",
       criterion_3},
      {4, "benchmark modulus: scaled order gap >= 1, exact plateau at 1/4, "
          "clean right limit",
       criterion_4},
      {5, "limsup sum rule gives 3.0 on both sides and rejects oscillating "
          "summands",
       criterion_5},
      {6, "compatible-pair entries stay contractive and yield derived band "
          "certificates over 3 seeds",
       criterion_6},
      {7, "band certificates pass both the closed and open band conditions "
          "on identical samples",
       criterion_7},
      {8, "shifted-log inequality and exp(-0.1) rate bound agree on 10^4 "
          "pairs",
       criterion_8},
      {9, "vanishing-forces-zero never contradicts positive right limsup "
          "across sequence families",
       criterion_9},
      {10, "discretized integral operator reaches exp within 5e-4 in <= 60 "
           "iterations",
       criterion_10},
      {11, "two identical gallery runs produce byte-identical summaries",
       criterion_11},
      {12, "step distances strictly decrease on every recorded orbit",
       criterion_12},
  };

  int failed = 0;
  for (const Entry& entry : criteria) {
    Criterion c;
    try {
      entry.fn(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.problems.empty();
    if (!ok) ++failed;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << entry.id
              << ": " << entry.description << "\n";
    for (const std::string& p : c.problems) {
      std::cout << "         - " << p << "\n";
    }
  }

  if (failed == 0) {
    std::cout << "all 12 acceptance criteria passed\n";
    return 0;
  }
  std::cout << failed << " of 12 acceptance criteria failed\n";
  return 1;
}
