// twistor: curvature, taming and twistor-space reports from the command line.
//
//   twistor analyze --metric round-s4 --grid 3
//   twistor sphere-regularity --N 24
//   twistor run --config run.ini

#include <iostream>
#include <optional>
#include <vector>

#include "CLI11.hpp"
#include "twistor/commands.hpp"
#include "twistor/errors.hpp"

using namespace twistor;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> metric;
  std::optional<int> orientation;
  std::optional<int> grid;
  std::optional<double> half_width;
  std::vector<double> center;
  std::optional<int> N;
  std::optional<double> gap_factor;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> samples;
  std::optional<unsigned> seed;
  std::vector<double> t;
  std::optional<std::string> perturbation;
  std::optional<std::string> format;
  std::optional<std::string> output;
};

void add_options(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config, "INI run configuration");
  app.add_option("--metric", o.metric, "catalog chart name or 'expression'");
  app.add_option("--orientation", o.orientation, "override the chart orientation (+1 or -1)");
  app.add_option("--grid", o.grid, "grid points per axis of the sample region");
  app.add_option("--half-width", o.half_width, "half width of the sample region");
  app.add_option("--center", o.center, "centre of the sample region (four numbers)")->expected(4);
  app.add_option("--N", o.N, "sphere grid size (even, 16..48)");
  app.add_option("--gap-factor", o.gap_factor, "relative singular value threshold");
  app.add_option("--tol", o.tol, "Newton tolerance (discrete sup norm)");
  app.add_option("--max-iter", o.max_iter, "Newton iteration limit");
  app.add_option("--samples", o.samples, "random samples for pointwise checks");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--t", o.t, "perturbation amplitudes");
  app.add_option("--perturbation", o.perturbation, "none, bolt or expression");
  app.add_option("--format", o.format, "json or markdown");
  app.add_option("--output", o.output, "report path (default: standard output)");
}

RunConfig build_config(const Overrides& o, const std::string& command) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (command != "run") c.command = command_from_string(command);
  if (o.metric) c.metric.name = *o.metric;
  if (o.orientation) c.metric.orientation = *o.orientation;
  if (o.grid) c.region.n = *o.grid;
  if (o.half_width) c.region.half_width = *o.half_width;
  if (!o.center.empty())
    for (int i = 0; i < kDim; ++i) c.region.center[i] = o.center[i];
  if (o.N) c.numerics.N = *o.N;
  if (o.gap_factor) c.numerics.gap_factor = *o.gap_factor;
  if (o.tol) c.numerics.tol = *o.tol;
  if (o.max_iter) c.numerics.max_iter = *o.max_iter;
  if (o.samples) c.numerics.samples = *o.samples;
  if (o.seed) c.numerics.seed = *o.seed;
  if (!o.t.empty()) c.perturbation.t = o.t;
  if (o.perturbation) c.perturbation.kind = *o.perturbation;
  if (o.format) {
    try {
      c.output.format = report_format_from_string(*o.format);
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
  }
  if (o.output) c.output.path = *o.output;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature, taming and twistor-space reports for 4-dimensional metrics"};
  app.require_subcommand(1);
  Overrides o;
  add_options(app, o);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"analyze", "curvature blocks and taming verdict at every region point"},
      {"taming-scan", "region taming verdict (exit 3 inside the dead zone)"},
      {"nijenhuis", "Nijenhuis tensors of J+ and J- at random twistor points"},
      {"reznikov-check", "fibre integral, closedness, taming and horizontal degeneracy"},
      {"sphere-regularity", "kernel and cokernel of the bolt sphere's linearized operator"},
      {"mechanism-demo", "continue the bolt sphere under g + t h and integrate omega"},
      {"run", "run the command named in the configuration file"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig config;
  try {
    config = build_config(o, command);
  } catch (const std::exception& e) {
    OutputConfig out;
    if (o.output) out.path = *o.output;
    return write_report(error_report(command, "validation", e.what(), kExitValidation), out,
                        kExitValidation, std::cout);
  }
  const RunOutcome outcome = run(config);
  const int code = write_report(outcome.report, config.output, outcome.exit_code, std::cout);
  if (code != outcome.exit_code)
    std::cerr << "twistor: cannot write " << config.output.path << "\n";
  return code;
}
