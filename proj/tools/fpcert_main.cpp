// Command line front end: maps flags onto an ExperimentConfig and runs it.
// Flags override values from --config; either source alone is enough.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fpcert/cli.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> gallery, expression, label;
  std::optional<std::size_t> dimension;
  std::optional<double> lower, upper, reach;
  std::optional<std::string> metric;
  bool incomplete = false;

  std::optional<std::string> cert_kind, theorem, as;
  std::optional<double> lambda, alpha;
  std::optional<std::string> phi_spec, f_spec, e_spec, delta_spec, conditions;
  bool relaxed = false;
  bool improved = false;

  std::optional<std::string> x0_text, starts_text;
  std::optional<std::uint64_t> seed, count;
  std::optional<std::string> strategy;
  std::optional<std::size_t> max_iter;
  std::optional<double> residual_tol, cauchy_tol;
  std::optional<std::size_t> cauchy_window;
  std::optional<std::string> out_dir;
};

void add_common_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path,
                  "key-value config file; flags override its values");
  sub->add_option("--gallery", o.gallery, "gallery entry name");
  sub->add_option("--expression", o.expression,
                  "map expression, one part per coordinate, ';' separated");
  sub->add_option("--label", o.label, "name used for output files");
  sub->add_option("--dimension", o.dimension, "space dimension (default 1)");
  sub->add_option("--lower", o.lower, "box lower bound (per coordinate)");
  sub->add_option("--upper", o.upper, "box upper bound, may be inf");
  sub->add_option("--metric", o.metric,
                  "euclidean, sup, discrete, or p:<exponent>");
  sub->add_option("--reach", o.reach,
                  "sampling reach above the lower corner on unbounded boxes");
  sub->add_flag("--incomplete", o.incomplete,
                "declare the space not complete");

  sub->add_option("--certificate", o.cert_kind, "certificate kind");
  sub->add_option("--theorem", o.theorem, "theorem id to verify against");
  sub->add_option("--as", o.as, "picard (default) or counterexample");
  sub->add_option("--lambda", o.lambda, "banach contraction factor");
  sub->add_option("--alpha", o.alpha, "alpha_f scale factor");
  sub->add_option("--phi", o.phi_spec, "modulus spec, e.g. constant:0.1");
  sub->add_option("--f", o.f_spec, "modulus spec, e.g. log");
  sub->add_option("--e", o.e_spec, "modulus spec, e.g. scaled:0.75,identity");
  sub->add_option("--delta", o.delta_spec, "modulus spec for band widths");
  sub->add_option("--conditions", o.conditions,
                  "wardowski side conditions: i_ii_iii, iii_prime, "
                  "iii_doubleprime");
  sub->add_flag("--relaxed", o.relaxed, "use the relaxed pair route");
  sub->add_flag("--improved", o.improved, "use the improved ri premises");

  sub->add_option("--x0", o.x0_text, "start point, comma separated");
  sub->add_option("--starts", o.starts_text,
                  "start points, ';' between points");
  sub->add_option("--seed", o.seed, "sampler seed");
  sub->add_option("--count", o.count, "sampled pair count");
  sub->add_option("--strategy", o.strategy,
                  "uniform_random, grid, boundary_biased");
  sub->add_option("--max-iter", o.max_iter, "iteration budget");
  sub->add_option("--residual-tol", o.residual_tol, "convergence residual");
  sub->add_option("--cauchy-window", o.cauchy_window,
                  "window for the stagnation check");
  sub->add_option("--cauchy-tol", o.cauchy_tol,
                  "step size treated as stagnation");
  sub->add_option("--out", o.out_dir,
                  "output directory (default: FPCERT_OUT)");
}

fpcert::ExperimentConfig build_experiment(const Overrides& o,
                                          const std::string& command) {
  fpcert::ExperimentConfig ec;
  if (o.config_path.has_value()) {
    ec = fpcert::experiment_from_config(
        fpcert::KeyValueConfig::parse_file(*o.config_path));
  }
  ec.command = command;
  if (o.gallery) ec.gallery = *o.gallery;
  if (o.expression) ec.expression = *o.expression;
  if (o.label) ec.label = *o.label;
  if (o.dimension) ec.dimension = *o.dimension;
  if (o.lower) ec.lower = *o.lower;
  if (o.upper) ec.upper = *o.upper;
  if (o.metric) ec.metric = *o.metric;
  if (o.reach) ec.reach = *o.reach;
  if (o.incomplete) ec.complete = false;

  if (o.cert_kind) ec.cert_kind = *o.cert_kind;
  if (o.theorem) ec.theorem = *o.theorem;
  if (o.as) ec.as = *o.as;
  if (o.lambda) ec.lambda = *o.lambda;
  if (o.alpha) ec.alpha = *o.alpha;
  if (o.phi_spec) ec.phi_spec = *o.phi_spec;
  if (o.f_spec) ec.f_spec = *o.f_spec;
  if (o.e_spec) ec.e_spec = *o.e_spec;
  if (o.delta_spec) ec.delta_spec = *o.delta_spec;
  if (o.conditions) ec.conditions = *o.conditions;
  if (o.relaxed) ec.relaxed = true;
  if (o.improved) ec.improved = true;

  if (o.x0_text) ec.x0_text = *o.x0_text;
  if (o.starts_text) ec.starts_text = *o.starts_text;
  if (o.seed) ec.params.sampler.seed = *o.seed;
  if (o.count) ec.params.sampler.count = static_cast<std::size_t>(*o.count);
  if (o.strategy) {
    if (*o.strategy == "uniform_random") {
      ec.params.sampler.strategy =
          fpcert::PairSampler::Strategy::uniform_random;
    } else if (*o.strategy == "grid") {
      ec.params.sampler.strategy = fpcert::PairSampler::Strategy::grid;
    } else if (*o.strategy == "boundary_biased") {
      ec.params.sampler.strategy =
          fpcert::PairSampler::Strategy::boundary_biased;
    } else {
      throw fpcert::ConfigError("unknown strategy '" + *o.strategy + "'");
    }
  }
  if (o.max_iter) ec.params.iteration.max_iter = *o.max_iter;
  if (o.residual_tol) ec.params.iteration.residual_tol = *o.residual_tol;
  if (o.cauchy_window) ec.params.iteration.cauchy_window = *o.cauchy_window;
  if (o.cauchy_tol) ec.params.iteration.cauchy_tol = *o.cauchy_tol;
  if (o.out_dir) ec.out_dir = *o.out_dir;
  return ec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpcert: empirical checks for fixed point certificates"};
  app.require_subcommand(1);

  Overrides o;
  const std::pair<const char*, const char*> commands[] = {
      {"iterate", "run the iteration from one start and write a trace"},
      {"certify", "run the premise checks for one certificate"},
      {"verify", "check premises, iterate, and compare the conclusion"},
      {"classify", "try every certificate kind and print a table"},
      {"sweep", "verify the whole gallery against every recommendation"},
      {"gallery-run", "one verification per gallery entry, with summary.csv"},
  };
  for (const auto& [name, help] : commands) {
    add_common_options(app.add_subcommand(name, help), o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fpcert::kExitUsage;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    const fpcert::ExperimentConfig ec = build_experiment(o, command);
    return fpcert::run(ec, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fpcert::kExitUsage;
  }
}
