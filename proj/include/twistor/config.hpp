#pragma once

// Run configuration: one INI document with the sections [run], [metric],
// [region], [perturbation], [numerics] and [output]. Unknown sections or
// keys are rejected. See README.md for the full key list.

#include <array>
#include <istream>
#include <string>
#include <vector>

#include "twistor/expr.hpp"
#include "twistor/metric.hpp"
#include "twistor/report.hpp"
#include "twistor/taming.hpp"

namespace twistor {

enum class Command { Analyze, TamingScan, Nijenhuis, ReznikovCheck, SphereRegularity, MechanismDemo };
std::string to_string(Command c);
// Throws ConfigError.
Command command_from_string(const std::string& s);

struct MetricConfig {
  // Catalog name or "expression". Empty selects the command default.
  std::string name;
  int orientation = 0;  // 0 keeps the chart default
  // Expression metrics: either `factor` (conformal) or the ten g_ij.
  std::string factor;
  std::array<std::string, kSymSize> components;  // packed, empty = unset
  std::string domain = "ball";                   // ball or box
  double radius = 1.0;                           // radius or half width
  double margin = 0.05;
};

struct RegionConfig {
  Point center{};
  double half_width = 0.5;
  int n = 3;
  double r_min = 0.0;
  double r_max = 0.0;
};

struct PerturbationConfig {
  // default (bolt for mechanism-demo, none otherwise), none, bolt or
  // expression
  std::string kind = "default";
  std::string factor;
  std::array<std::string, kSymSize> components;
  std::vector<double> t = {0.0, 1e-3, 1e-2};
};

struct NumericsConfig {
  int N = 24;
  double gap_factor = 1e-5;
  double tol = 1e-10;
  int max_iter = 12;
  int samples = 20;
  double fd_step = 1e-4;
  unsigned seed = 1;
};

struct OutputConfig {
  std::string path;  // empty writes to standard output
  ReportFormat format = ReportFormat::Json;
};

struct RunConfig {
  Command command = Command::Analyze;
  MetricConfig metric;
  RegionConfig region;
  PerturbationConfig perturbation;
  NumericsConfig numerics;
  OutputConfig output;
};

// Throws ConfigError naming the offending key.
RunConfig read_config(std::istream& in);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& c);
Json config_echo(const RunConfig& c);

// Metric named by the config; the command default is used when no name is
// given. Throws ConfigError, LookupError or ParseError.
MetricChart resolve_metric(const RunConfig& c);
// h of the perturbation section, or nullptr-like empty function for none.
MetricEvaluator resolve_perturbation(const RunConfig& c);
GridSpec resolve_region(const RunConfig& c);

// Packed component key: "g" followed by 1-based indices i <= j.
std::string component_key(int k);

}  // namespace twistor
