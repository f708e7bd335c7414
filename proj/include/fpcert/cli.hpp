#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fpcert/config.hpp"
#include "fpcert/expression.hpp"
#include "fpcert/gallery.hpp"
#include "fpcert/verifier.hpp"

namespace fpcert {

// Exit contract: 0 the asserted property held, 2 a premise or check failed
// (or the run stayed inconclusive), 3 the conclusion failed (or iteration
// did not converge), 64 the input could not be used.
inline constexpr int kExitPass = 0;
inline constexpr int kExitPremiseFailure = 2;
inline constexpr int kExitConclusionFailure = 3;
inline constexpr int kExitUsage = 64;

struct ExperimentConfig {
  std::string command;  // iterate, certify, verify, classify, sweep, gallery-run

  // Target: a gallery name or an inline expression with its space.
  std::string gallery;
  std::string expression;
  std::string label;
  std::size_t dimension = 1;
  std::optional<double> lower, upper;
  std::string metric = "euclidean";
  double reach = kDefaultReach;
  bool complete = true;

  // Certificate / theorem selection.
  std::string cert_kind;
  std::string theorem;
  std::string as = "picard";  // or "counterexample"
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::string phi_spec, f_spec, e_spec, delta_spec;
  std::string conditions = "i_ii_iii";
  bool relaxed = false;
  bool improved = false;

  // Starts, kept as text until the target fixes the dimension.
  std::optional<std::string> x0_text;
  std::optional<std::string> starts_text;

  CheckParams params;
  std::string out_dir;  // falls back to the FPCERT_OUT environment variable
};

inline Point parse_point(const std::string& text, std::size_t dimension) {
  std::vector<double> coords;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = detail::trim(
        text.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start));
    try {
      std::size_t used = 0;
      if (item.empty()) throw std::exception();
      coords.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::exception();
    } catch (...) {
      throw ConfigError("point '" + text + "': expected a number, got '" +
                        item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (coords.size() != dimension) {
    throw ConfigError("point '" + text + "' has " +
                      std::to_string(coords.size()) +
                      " coordinate(s), the space has dimension " +
                      std::to_string(dimension));
  }
  return coords;
}

// Semicolon-separated points, comma-separated coordinates.
inline std::vector<Point> parse_points(const std::string& text,
                                       std::size_t dimension) {
  std::vector<Point> points;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t semi = text.find(';', start);
    const std::string item =
        text.substr(start, semi == std::string::npos ? std::string::npos
                                                     : semi - start);
    points.push_back(parse_point(detail::trim(item), dimension));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return points;
}

inline ExperimentConfig experiment_from_config(const KeyValueConfig& c) {
  ExperimentConfig ec;
  ec.command = c.get("experiment", "command").value_or("");
  ec.gallery = c.get("experiment", "gallery").value_or("");
  ec.expression = c.get("experiment", "expression").value_or("");
  ec.label = c.get("experiment", "label").value_or("");
  ec.theorem = c.get("experiment", "theorem").value_or("");
  ec.as = c.get("experiment", "as").value_or("picard");
  ec.out_dir = c.get("experiment", "out").value_or("");

  ec.dimension = static_cast<std::size_t>(c.get_uint("space", "dimension", 1));
  if (ec.dimension == 0) {
    throw ConfigError("key 'dimension' in section [space]: must be positive");
  }
  if (c.find("space", "lower") != nullptr) {
    ec.lower = c.require_double("space", "lower");
  }
  if (c.find("space", "upper") != nullptr) {
    ec.upper = c.require_double("space", "upper");
  }
  ec.metric = c.get("space", "metric").value_or("euclidean");
  ec.reach = c.get_double("space", "reach", kDefaultReach);
  ec.complete = c.get_bool("space", "complete", true);

  ec.cert_kind = c.get("certificate", "kind").value_or("");
  if (c.find("certificate", "lambda") != nullptr) {
    ec.lambda = c.require_double("certificate", "lambda");
  }
  if (c.find("certificate", "alpha") != nullptr) {
    ec.alpha = c.require_double("certificate", "alpha");
  }
  ec.phi_spec = c.get("certificate", "phi").value_or("");
  ec.f_spec = c.get("certificate", "f").value_or("");
  ec.e_spec = c.get("certificate", "e").value_or("");
  ec.delta_spec = c.get("certificate", "delta").value_or("");
  ec.conditions = c.get("certificate", "conditions").value_or("i_ii_iii");
  ec.relaxed = c.get_bool("certificate", "relaxed", false);
  ec.improved = c.get_bool("certificate", "improved", false);

  ec.x0_text = c.get("starts", "x0");
  ec.starts_text = c.get("starts", "starts");

  ec.params.sampler.seed = c.get_uint("check", "seed", 0);
  ec.params.sampler.count =
      static_cast<std::size_t>(c.get_uint("check", "count", 1000));
  const std::string strategy =
      c.get("check", "strategy").value_or("uniform_random");
  if (strategy == "uniform_random") {
    ec.params.sampler.strategy = PairSampler::Strategy::uniform_random;
  } else if (strategy == "grid") {
    ec.params.sampler.strategy = PairSampler::Strategy::grid;
  } else if (strategy == "boundary_biased") {
    ec.params.sampler.strategy = PairSampler::Strategy::boundary_biased;
  } else {
    throw ConfigError("key 'strategy' in section [check]: unknown strategy '" +
                      strategy +
                      "' (uniform_random, grid, boundary_biased)");
  }
  ec.params.eps_grid = c.get_double_list("check", "eps_grid", ec.params.eps_grid);
  ec.params.t_grid = c.get_double_list("check", "t_grid", ec.params.t_grid);
  ec.params.anchors = c.get_double_list("check", "anchors", ec.params.anchors);
  ec.params.band_pair_count = static_cast<std::size_t>(
      c.get_uint("check", "band_pair_count", ec.params.band_pair_count));

  IterationConfig& it = ec.params.iteration;
  it.max_iter =
      static_cast<std::size_t>(c.get_uint("iteration", "max_iter", it.max_iter));
  it.residual_tol = c.get_double("iteration", "residual_tol", it.residual_tol);
  it.cauchy_window = static_cast<std::size_t>(
      c.get_uint("iteration", "cauchy_window", it.cauchy_window));
  it.cauchy_tol = c.get_double("iteration", "cauchy_tol", it.cauchy_tol);
  it.divergence_bound =
      c.get_double("iteration", "divergence_bound", it.divergence_bound);
  return ec;
}

namespace cli_detail {

struct ResolvedTarget {
  MapUnderTest map;
  std::optional<GalleryEntry> entry;
  std::string label;
};

inline MetricKind metric_from_string(const std::string& s) {
  if (s == "euclidean") return Euclidean{};
  if (s == "sup") return SupMetric{};
  if (s == "discrete") return DiscreteMetric{};
  if (s.rfind("p:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double p = std::stod(s.substr(2), &used);
      if (used != s.size() - 2) throw std::exception();
      return PMetric{p};
    } catch (...) {
      throw ConfigError("metric '" + s + "': expected p:<exponent>");
    }
  }
  throw ConfigError("unknown metric '" + s +
                    "' (euclidean, sup, discrete, p:<exponent>)");
}

inline ResolvedTarget resolve_target(const ExperimentConfig& ec) {
  if (!ec.gallery.empty() && !ec.expression.empty()) {
    throw ConfigError("give either a gallery name or an expression, not both");
  }
  if (!ec.gallery.empty()) {
    GalleryEntry entry = instantiate(ec.gallery);
    MapUnderTest map = entry.map;
    return ResolvedTarget{std::move(map), std::move(entry),
                          ec.label.empty() ? ec.gallery : ec.label};
  }
  if (ec.expression.empty()) {
    throw ConfigError("no target: set a gallery name or an expression");
  }
  if (!ec.lower.has_value() || !ec.upper.has_value()) {
    throw ConfigError(
        "an expression target needs space bounds: keys 'lower' and 'upper' "
        "in section [space]");
  }
  MetricSpaceHandle space =
      make_box_space(ec.dimension, *ec.lower, *ec.upper,
                     metric_from_string(ec.metric), ec.complete, ec.reach);
  MapUnderTest map = make_expression_map(ec.expression, space);
  return ResolvedTarget{std::move(map), std::nullopt,
                        ec.label.empty() ? std::string("expression")
                                         : ec.label};
}

inline bool has_user_certificate_params(const ExperimentConfig& ec) {
  return ec.lambda.has_value() || ec.alpha.has_value() ||
         !ec.phi_spec.empty() || !ec.f_spec.empty() || !ec.e_spec.empty() ||
         !ec.delta_spec.empty();
}

inline ModulusFunction require_modulus(const std::string& spec,
                                       const char* key) {
  if (spec.empty()) {
    throw ConfigError(std::string("certificate needs key '") + key +
                      "' in section [certificate]");
  }
  return builtin(spec);
}

inline Certificate certificate_from_config(const ExperimentConfig& ec) {
  const std::string& k = ec.cert_kind;
  if (k == "banach") {
    if (!ec.lambda.has_value()) {
      throw ConfigError(
          "certificate kind banach needs key 'lambda' in section "
          "[certificate]");
    }
    return BanachCertificate{*ec.lambda};
  }
  if (k == "contractive") return ContractiveCert{};
  if (k == "meir_keeler") {
    return MeirKeelerCertificate{require_modulus(ec.delta_spec, "delta")};
  }
  if (k == "cjmp") {
    return CjmpCertificate{require_modulus(ec.delta_spec, "delta")};
  }
  if (k == "wardowski") {
    return WardowskiCertificate{require_modulus(ec.phi_spec, "phi"),
                                require_modulus(ec.f_spec, "f"),
                                condition_set_from_string(ec.conditions)};
  }
  if (k == "ri") {
    return RiCertificate{require_modulus(ec.phi_spec, "phi"), ec.improved};
  }
  if (k == "compatible_pair_ef") {
    return CompatiblePairCertificate{require_modulus(ec.e_spec, "e"),
                                     require_modulus(ec.f_spec, "f"),
                                     ec.relaxed};
  }
  if (k == "alpha_f") {
    if (!ec.alpha.has_value()) {
      throw ConfigError(
          "certificate kind alpha_f needs key 'alpha' in section "
          "[certificate]");
    }
    return AlphaFCertificate{*ec.alpha, require_modulus(ec.f_spec, "f")};
  }
  if (k == "proinov") {
    return ProinovCertificate{require_modulus(ec.e_spec, "e"),
                              require_modulus(ec.f_spec, "f")};
  }
  std::string known;
  for (const auto& name : certificate_kind_names()) {
    if (!known.empty()) known += ", ";
    known += name;
  }
  throw ConfigError("unknown certificate kind '" + k + "' (known: " + known +
                    ")");
}

// Config-provided parameters win; otherwise fall back to the gallery
// entry's recommended certificate of the requested kind.
inline Certificate select_certificate(const ExperimentConfig& ec,
                                      const ResolvedTarget& target) {
  if (ec.cert_kind.empty()) {
    throw ConfigError("set key 'kind' in section [certificate]");
  }
  if (!has_user_certificate_params(ec) && target.entry.has_value()) {
    for (const Certificate& c : target.entry->recommended_certificates) {
      if (certificate_kind(c) == ec.cert_kind) return c;
    }
  }
  return certificate_from_config(ec);
}

inline std::string output_dir(const ExperimentConfig& ec) {
  if (!ec.out_dir.empty()) return ec.out_dir;
  const char* env = std::getenv("FPCERT_OUT");
  return env != nullptr ? std::string(env) : std::string();
}

inline std::string sanitize_name(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out.empty() ? std::string("case") : out;
}

inline void write_file_atomic(const std::string& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
  }
  fs::rename(tmp, p);
}

struct SummaryRow {
  std::string case_name;
  std::string overall;
  double margin = quiet_nan();
};

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "# fpcert summary v1\ncase,overall,worst_margin\n";
  for (const auto& r : rows) {
    out += r.case_name + "," + r.overall + "," + fmt_double(r.margin) + "\n";
  }
  return out;
}

inline std::string trace_csv_text(const IterationTrace& trace) {
  std::ostringstream buf;
  trace_to_csv(trace, buf);
  return buf.str();
}

inline void write_verification_artifacts(const std::string& dir,
                                         const std::string& case_name,
                                         const VerificationReport& rep) {
  if (dir.empty()) return;
  const std::string base = dir + "/" + sanitize_name(case_name);
  write_file_atomic(base + "_report.txt", to_text(rep));
  for (std::size_t i = 0; i < rep.traces.size(); ++i) {
    write_file_atomic(base + "_start" + std::to_string(i) + "_trace.csv",
                      trace_csv_text(rep.traces[i]));
  }
}

inline int exit_code_for(const VerificationReport& rep) {
  switch (rep.overall) {
    case OverallVerdict::verified_empirically: return kExitPass;
    case OverallVerdict::premise_failed: return kExitPremiseFailure;
    case OverallVerdict::inconclusive: return kExitPremiseFailure;
    case OverallVerdict::conclusion_failed: return kExitConclusionFailure;
  }
  return kExitUsage;
}

inline std::vector<Point> select_starts(const ExperimentConfig& ec,
                                        const ResolvedTarget& target) {
  if (ec.starts_text.has_value()) {
    return parse_points(*ec.starts_text, target.map.space.dimension());
  }
  if (target.entry.has_value()) return target.entry->starts;
  throw ConfigError(
      "no starts: set key 'starts' in section [starts] or use a gallery "
      "target");
}

// What the registry expects a gallery verification row to say.
inline std::string expected_overall(const GalleryEntry& entry) {
  switch (entry.expected_behavior) {
    case ExpectedBehavior::picard: return "verified_empirically";
    case ExpectedBehavior::contractive_no_fixed_point:
      return "verified_empirically";
    case ExpectedBehavior::non_contractive: return "premise_failed";
  }
  return "unknown";
}

inline bool row_matches(const SummaryRow& row, const std::string& expected) {
  return row.overall.rfind(expected, 0) == 0;
}

inline VerificationReport verify_entry_case(const GalleryEntry& entry,
                                            const Certificate& cert,
                                            const CheckParams& params) {
  TheoremCase tc{theorem_for_certificate(cert), entry.map, cert, entry.starts,
                 params};
  return verify_picard(tc);
}

}  // namespace cli_detail

inline int run_iterate(const ExperimentConfig& ec, std::ostream& out) {
  const auto target = cli_detail::resolve_target(ec);
  Point x0;
  if (ec.x0_text.has_value()) {
    x0 = parse_point(*ec.x0_text, target.map.space.dimension());
  } else if (target.entry.has_value() && !target.entry->starts.empty()) {
    x0 = target.entry->starts.front();
  } else {
    throw ConfigError("iterate needs key 'x0' in section [starts]");
  }

  const IterationTrace trace =
      picard_iterate(target.map, x0, ec.params.iteration);
  const Point last = trace.limit.has_value() ? *trace.limit
                                             : trace.last_points(1).front();
  out << "verdict: " << to_string(trace.verdict) << "\n";
  out << "iterations: " << trace.iterations_used << "\n";
  out << "final_point: " << fmt_point(last) << "\n";
  if (!std::isnan(trace.final_residual)) {
    out << "final_residual: " << fmt_double(trace.final_residual) << "\n";
  }
  if (!trace.note.empty()) out << "note: " << trace.note << "\n";

  const std::string dir = cli_detail::output_dir(ec);
  if (!dir.empty()) {
    const std::string path =
        dir + "/" + cli_detail::sanitize_name(target.label) + "_trace.csv";
    cli_detail::write_file_atomic(path, cli_detail::trace_csv_text(trace));
    out << "trace_csv: " << path << "\n";
  }
  return trace.verdict == TraceVerdict::converged ? kExitPass
                                                  : kExitConclusionFailure;
}

inline int run_certify(const ExperimentConfig& ec, std::ostream& out) {
  const auto target = cli_detail::resolve_target(ec);
  const Certificate cert = cli_detail::select_certificate(ec, target);
  validate(cert);

  const std::vector<CheckReport> reports =
      premise_checks(target.map, cert, ec.params);
  std::string text;
  for (const auto& r : reports) text += to_text(r);
  out << text;

  const std::string dir = cli_detail::output_dir(ec);
  if (!dir.empty()) {
    cli_detail::write_file_atomic(
        dir + "/" + cli_detail::sanitize_name(target.label) + "_report.txt",
        text);
  }
  bool ok = true;
  for (const auto& r : reports) ok &= r.passed();
  return ok ? kExitPass : kExitPremiseFailure;
}

inline int run_verify(const ExperimentConfig& ec, std::ostream& out) {
  const auto target = cli_detail::resolve_target(ec);
  const std::vector<Point> starts = cli_detail::select_starts(ec, target);

  VerificationReport rep = [&] {
    if (ec.as == "counterexample") {
      return verify_counterexample(target.map, starts, ec.params);
    }
    if (ec.as != "picard") {
      throw ConfigError("key 'as' must be picard or counterexample, got '" +
                        ec.as + "'");
    }
    Certificate cert = [&]() -> Certificate {
      if (!ec.cert_kind.empty()) {
        return cli_detail::select_certificate(ec, target);
      }
      if (!ec.theorem.empty() && target.entry.has_value()) {
        const TheoremId id = theorem_id_from_string(ec.theorem);
        for (const Certificate& c : target.entry->recommended_certificates) {
          if (certificate_kind(c) == expected_certificate_kind(id)) {
            try {
              require_certificate_matches(id, c);
              return c;
            } catch (const std::invalid_argument&) {
              continue;
            }
          }
        }
        throw ConfigError("gallery entry '" + target.entry->name +
                          "' carries no certificate for theorem '" +
                          ec.theorem + "'");
      }
      if (target.entry.has_value() &&
          !target.entry->recommended_certificates.empty()) {
        return target.entry->recommended_certificates.front();
      }
      throw ConfigError(
          "verify needs a certificate: set [certificate] kind or use a "
          "gallery target with recommendations");
    }();
    const TheoremId id = ec.theorem.empty()
                             ? theorem_for_certificate(cert)
                             : theorem_id_from_string(ec.theorem);
    TheoremCase tc{id, target.map, cert, starts, ec.params};
    return verify_picard(tc);
  }();

  out << to_text(rep);
  cli_detail::write_verification_artifacts(cli_detail::output_dir(ec),
                                           target.label, rep);
  return cli_detail::exit_code_for(rep);
}

inline int run_classify(const ExperimentConfig& ec, std::ostream& out) {
  const auto target = cli_detail::resolve_target(ec);
  std::vector<Certificate> supplied;
  if (target.entry.has_value()) {
    supplied = target.entry->recommended_certificates;
  }
  if (!ec.cert_kind.empty()) {
    supplied.push_back(cli_detail::select_certificate(ec, target));
  }
  const auto rows = classify(target.map, ec.params, supplied);
  const std::string text = to_text(rows);
  out << text;
  const std::string dir = cli_detail::output_dir(ec);
  if (!dir.empty()) {
    cli_detail::write_file_atomic(
        dir + "/" + cli_detail::sanitize_name(target.label) + "_classify.txt",
        text);
  }
  return kExitPass;
}

namespace cli_detail {

// Shared by sweep and gallery-run: verify entries against their expected
// behavior, emit summary rows and artifacts, and fold the mismatches into
// an exit code.
inline int finish_gallery_rows(const ExperimentConfig& ec, std::ostream& out,
                               std::vector<SummaryRow> rows,
                               const std::vector<std::string>& expectations) {
  const std::string csv = summary_csv(rows);
  out << csv;
  const std::string dir = output_dir(ec);
  if (!dir.empty()) write_file_atomic(dir + "/summary.csv", csv);

  bool premise_mismatch = false, conclusion_mismatch = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (row_matches(rows[i], expectations[i])) continue;
    if (rows[i].overall == "conclusion_failed") {
      conclusion_mismatch = true;
    } else {
      premise_mismatch = true;
    }
  }
  if (conclusion_mismatch) return kExitConclusionFailure;
  if (premise_mismatch) return kExitPremiseFailure;
  return kExitPass;
}

}  // namespace cli_detail

// One verification per entry: the first recommended certificate for maps
// expected to settle, the counterexample flow otherwise.
inline int run_gallery_run(const ExperimentConfig& ec, std::ostream& out) {
  std::vector<cli_detail::SummaryRow> rows;
  std::vector<std::string> expectations;
  const std::string dir = cli_detail::output_dir(ec);
  for (const GalleryEntry& entry : gallery_entries()) {
    VerificationReport rep =
        entry.expected_behavior == ExpectedBehavior::picard
            ? cli_detail::verify_entry_case(
                  entry, entry.recommended_certificates.front(), ec.params)
            : verify_counterexample(entry.map, entry.starts, ec.params);
    rows.push_back(cli_detail::SummaryRow{entry.name, overall_string(rep),
                                          rep.worst_margin()});
    expectations.push_back(cli_detail::expected_overall(entry));
    cli_detail::write_verification_artifacts(dir, entry.name, rep);
  }
  return cli_detail::finish_gallery_rows(ec, out, std::move(rows),
                                         expectations);
}

// The full matrix: every recommended certificate of every entry, plus the
// counterexample flow for entries that are not expected to settle.
inline int run_sweep(const ExperimentConfig& ec, std::ostream& out) {
  std::vector<cli_detail::SummaryRow> rows;
  std::vector<std::string> expectations;
  const std::string dir = cli_detail::output_dir(ec);
  for (const GalleryEntry& entry : gallery_entries()) {
    if (entry.expected_behavior == ExpectedBehavior::picard) {
      for (const Certificate& cert : entry.recommended_certificates) {
        VerificationReport rep =
            cli_detail::verify_entry_case(entry, cert, ec.params);
        const std::string name =
            entry.name + "/" + certificate_kind(cert);
        rows.push_back(cli_detail::SummaryRow{name, overall_string(rep),
                                              rep.worst_margin()});
        expectations.push_back(cli_detail::expected_overall(entry));
        cli_detail::write_verification_artifacts(dir, name, rep);
      }
    } else {
      VerificationReport rep =
          verify_counterexample(entry.map, entry.starts, ec.params);
      const std::string name = entry.name + "/counterexample";
      rows.push_back(cli_detail::SummaryRow{name, overall_string(rep),
                                            rep.worst_margin()});
      expectations.push_back(cli_detail::expected_overall(entry));
      cli_detail::write_verification_artifacts(dir, name, rep);
    }
  }
  return cli_detail::finish_gallery_rows(ec, out, std::move(rows),
                                         expectations);
}

inline int run(const ExperimentConfig& ec, std::ostream& out,
               std::ostream& err) {
  try {
    if (ec.command == "iterate") return run_iterate(ec, out);
    if (ec.command == "certify") return run_certify(ec, out);
    if (ec.command == "verify") return run_verify(ec, out);
    if (ec.command == "classify") return run_classify(ec, out);
    if (ec.command == "sweep") return run_sweep(ec, out);
    if (ec.command == "gallery-run") return run_gallery_run(ec, out);
    err << "error: unknown command '" << ec.command
        << "' (iterate, certify, verify, classify, sweep, gallery-run)\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace fpcert
