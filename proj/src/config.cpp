#include "twistor/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "twistor/continuation.hpp"
#include "twistor/errors.hpp"

namespace twistor {

namespace {

namespace pt = boost::property_tree;

struct CommandName {
  Command c;
  const char* name;
};
constexpr CommandName kCommands[] = {
    {Command::Analyze, "analyze"},
    {Command::TamingScan, "taming-scan"},
    {Command::Nijenhuis, "nijenhuis"},
    {Command::ReznikovCheck, "reznikov-check"},
    {Command::SphereRegularity, "sphere-regularity"},
    {Command::MechanismDemo, "mechanism-demo"},
};

bool bolt_command(Command c) {
  return c == Command::SphereRegularity || c == Command::MechanismDemo;
}

std::string where(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < v.size() && std::isspace(static_cast<unsigned char>(v[used]))) ++used;
  if (used == 0 || used != v.size() || !std::isfinite(d))
    throw ConfigError(where(section, key) + ": expected a finite number, got '" + v + "'");
  return d;
}

int to_int(const std::string& section, const std::string& key, const std::string& v) {
  const double d = to_double(section, key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9)
    throw ConfigError(where(section, key) + ": expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

std::vector<double> to_list(const std::string& section, const std::string& key,
                            const std::string& v) {
  std::string s = v;
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::vector<double> out;
  std::string item;
  while (in >> item) out.push_back(to_double(section, key, item));
  return out;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int component_index(const std::string& key) {
  for (int k = 0; k < kSymSize; ++k)
    if (component_key(k) == key) return k;
  return -1;
}

void read_metric(const pt::ptree& sec, MetricConfig& m) {
  for (const auto& [key, node] : sec) {
    const std::string v = trimmed(node.data());
    if (key == "name") {
      m.name = v;
    } else if (key == "orientation") {
      m.orientation = to_int("metric", key, v);
    } else if (key == "factor") {
      m.factor = v;
    } else if (key == "domain") {
      m.domain = v;
    } else if (key == "radius") {
      m.radius = to_double("metric", key, v);
    } else if (key == "margin") {
      m.margin = to_double("metric", key, v);
    } else if (const int k = component_index(key); k >= 0) {
      m.components[k] = v;
    } else {
      throw ConfigError("unknown key " + where("metric", key));
    }
  }
}

void read_region(const pt::ptree& sec, RegionConfig& r) {
  for (const auto& [key, node] : sec) {
    const std::string v = trimmed(node.data());
    if (key == "center") {
      const std::vector<double> c = to_list("region", key, v);
      if (c.size() != kDim) throw ConfigError(where("region", key) + ": expected four numbers");
      for (int i = 0; i < kDim; ++i) r.center[i] = c[i];
    } else if (key == "half_width") {
      r.half_width = to_double("region", key, v);
    } else if (key == "n") {
      r.n = to_int("region", key, v);
    } else if (key == "r_min") {
      r.r_min = to_double("region", key, v);
    } else if (key == "r_max") {
      r.r_max = to_double("region", key, v);
    } else {
      throw ConfigError("unknown key " + where("region", key));
    }
  }
}

void read_perturbation(const pt::ptree& sec, PerturbationConfig& p) {
  for (const auto& [key, node] : sec) {
    const std::string v = trimmed(node.data());
    if (key == "kind") {
      p.kind = v;
    } else if (key == "factor") {
      p.factor = v;
    } else if (key == "t") {
      p.t = to_list("perturbation", key, v);
    } else if (const int k = component_index(key); k >= 0) {
      p.components[k] = v;
    } else {
      throw ConfigError("unknown key " + where("perturbation", key));
    }
  }
}

void read_numerics(const pt::ptree& sec, NumericsConfig& n) {
  for (const auto& [key, node] : sec) {
    const std::string v = trimmed(node.data());
    if (key == "N") {
      n.N = to_int("numerics", key, v);
    } else if (key == "gap_factor") {
      n.gap_factor = to_double("numerics", key, v);
    } else if (key == "tol") {
      n.tol = to_double("numerics", key, v);
    } else if (key == "max_iter") {
      n.max_iter = to_int("numerics", key, v);
    } else if (key == "samples") {
      n.samples = to_int("numerics", key, v);
    } else if (key == "fd_step") {
      n.fd_step = to_double("numerics", key, v);
    } else {
      throw ConfigError("unknown key " + where("numerics", key));
    }
  }
}

TensorExpr tensor_from(const std::string& factor,
                       const std::array<std::string, kSymSize>& components,
                       const std::string& section) {
  if (!factor.empty()) {
    for (const auto& c : components)
      if (!c.empty())
        throw ConfigError("[" + section + "]: give either factor or components, not both");
    return conformal_tensor(parse_expr(factor));
  }
  TensorExpr t;
  for (int k = 0; k < kSymSize; ++k)
    t[k] = parse_expr(components[k].empty() ? "0" : components[k]);
  return t;
}

std::string effective_metric(const RunConfig& c) {
  if (!c.metric.name.empty()) return c.metric.name;
  return bolt_command(c.command) ? "eguchi-hanson-bolt" : "";
}

std::string effective_perturbation(const RunConfig& c) {
  if (c.perturbation.kind != "default") return c.perturbation.kind;
  return c.command == Command::MechanismDemo ? "bolt" : "none";
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& cn : kCommands)
    if (cn.c == c) return cn.name;
  return "unknown";
}

Command command_from_string(const std::string& s) {
  for (const auto& cn : kCommands)
    if (s == cn.name) return cn.c;
  throw ConfigError("unknown command '" + s + "'");
}

std::string component_key(int k) {
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j)
      if (sym_index(i, j) == k) return "g" + std::to_string(i + 1) + std::to_string(j + 1);
  throw ArgumentError("component_key: index out of range");
}

RunConfig read_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig c;
  for (const auto& [section, sec] : tree) {
    if (!sec.data().empty() && sec.empty())
      throw ConfigError("config: key '" + section + "' outside a section");
    if (section == "run") {
      for (const auto& [key, node] : sec) {
        const std::string v = trimmed(node.data());
        if (key == "command") {
          c.command = command_from_string(v);
        } else if (key == "seed") {
          const int s = to_int("run", key, v);
          if (s < 0) throw ConfigError("[run] seed: must be non-negative");
          c.numerics.seed = static_cast<unsigned>(s);
        } else {
          throw ConfigError("unknown key " + where("run", key));
        }
      }
    } else if (section == "metric") {
      read_metric(sec, c.metric);
    } else if (section == "region") {
      read_region(sec, c.region);
    } else if (section == "perturbation") {
      read_perturbation(sec, c.perturbation);
    } else if (section == "numerics") {
      read_numerics(sec, c.numerics);
    } else if (section == "output") {
      for (const auto& [key, node] : sec) {
        const std::string v = trimmed(node.data());
        if (key == "path") {
          c.output.path = v;
        } else if (key == "format") {
          try {
            c.output.format = report_format_from_string(v);
          } catch (const ArgumentError& e) {
            throw ConfigError(std::string("[output] format: ") + e.what());
          }
        } else {
          throw ConfigError("unknown key " + where("output", key));
        }
      }
    } else {
      throw ConfigError("config: unknown section [" + section + "]");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return read_config(in);
}

void validate(const RunConfig& c) {
  const MetricConfig& m = c.metric;
  if (m.orientation < -1 || m.orientation > 1)
    throw ConfigError("[metric] orientation: must be -1, 0 or 1");
  if (m.domain != "ball" && m.domain != "box")
    throw ConfigError("[metric] domain: must be ball or box");
  if (!(m.radius > 0.0)) throw ConfigError("[metric] radius: must be positive");
  if (!(m.margin >= 0.0 && m.margin < m.radius))
    throw ConfigError("[metric] margin: must lie in [0, radius)");
  if (effective_metric(c).empty()) throw ConfigError("[metric] name: required for this command");
  if (bolt_command(c.command) && effective_metric(c) != "eguchi-hanson-bolt")
    throw ConfigError("[metric] name: " + to_string(c.command) +
                      " runs on eguchi-hanson-bolt only");

  const RegionConfig& r = c.region;
  if (!(r.half_width > 0.0)) throw ConfigError("[region] half_width: must be positive");
  if (r.n < 1 || r.n > 64) throw ConfigError("[region] n: must lie in [1, 64]");
  if (r.r_min < 0.0 || r.r_max < 0.0) throw ConfigError("[region] r_min, r_max: must be >= 0");

  const std::string kind = effective_perturbation(c);
  if (kind != "none" && kind != "bolt" && kind != "expression")
    throw ConfigError("[perturbation] kind: must be none, bolt or expression");
  if (c.perturbation.t.empty() || c.perturbation.t.size() > 32)
    throw ConfigError("[perturbation] t: between 1 and 32 values");
  if (c.command == Command::MechanismDemo && kind == "none")
    throw ConfigError("[perturbation] kind: mechanism-demo needs a perturbation");
  if (!bolt_command(c.command) && kind != "none" && c.perturbation.t.size() != 1)
    throw ConfigError("[perturbation] t: pointwise commands take exactly one value");

  const NumericsConfig& n = c.numerics;
  if (n.N < 16 || n.N > 48 || n.N % 2 != 0)
    throw ConfigError("[numerics] N: must be even and lie in [16, 48]");
  if (!(n.gap_factor > 0.0 && n.gap_factor < 1.0))
    throw ConfigError("[numerics] gap_factor: must lie in (0, 1)");
  if (!(n.tol > 0.0)) throw ConfigError("[numerics] tol: must be positive");
  if (n.max_iter < 1 || n.max_iter > 100)
    throw ConfigError("[numerics] max_iter: must lie in [1, 100]");
  if (n.samples < 1 || n.samples > 100000)
    throw ConfigError("[numerics] samples: must lie in [1, 100000]");
  if (!(n.fd_step > 0.0 && n.fd_step < 0.1))
    throw ConfigError("[numerics] fd_step: must lie in (0, 0.1)");
}

Json config_echo(const RunConfig& c) {
  Json metric{{"name", effective_metric(c)}, {"orientation", c.metric.orientation}};
  if (c.metric.name == "expression") {
    metric["domain"] = c.metric.domain;
    metric["radius"] = json_number(c.metric.radius);
    metric["margin"] = json_number(c.metric.margin);
    if (!c.metric.factor.empty()) metric["factor"] = c.metric.factor;
    for (int k = 0; k < kSymSize; ++k)
      if (!c.metric.components[k].empty()) metric[component_key(k)] = c.metric.components[k];
  }
  Json pert{{"kind", effective_perturbation(c)}};
  Json ts = Json::array();
  for (double t : c.perturbation.t) ts.push_back(json_number(t));
  pert["t"] = ts;
  if (!c.perturbation.factor.empty()) pert["factor"] = c.perturbation.factor;
  for (int k = 0; k < kSymSize; ++k)
    if (!c.perturbation.components[k].empty())
      pert[component_key(k)] = c.perturbation.components[k];
  return Json{
      {"command", to_string(c.command)},
      {"metric", metric},
      {"region",
       {{"center", json_point(c.region.center)},
        {"half_width", json_number(c.region.half_width)},
        {"n", c.region.n},
        {"r_min", json_number(c.region.r_min)},
        {"r_max", json_number(c.region.r_max)}}},
      {"perturbation", pert},
      {"numerics",
       {{"N", c.numerics.N},
        {"gap_factor", json_number(c.numerics.gap_factor)},
        {"tol", json_number(c.numerics.tol)},
        {"max_iter", c.numerics.max_iter},
        {"samples", c.numerics.samples},
        {"fd_step", json_number(c.numerics.fd_step)},
        {"seed", c.numerics.seed}}},
      {"output", {{"format", to_string(c.output.format)}}},
  };
}

MetricChart resolve_metric(const RunConfig& c) {
  const std::string name = effective_metric(c);
  if (name.empty()) throw ConfigError("[metric] name: required for this command");
  if (name == "expression") {
    const Domain d = c.metric.domain == "box" ? Domain::box(c.metric.radius, c.metric.margin)
                                              : Domain::ball(c.metric.radius, c.metric.margin);
    return expression_chart("expression", tensor_from(c.metric.factor, c.metric.components, "metric"),
                            d, c.metric.orientation == 0 ? 1 : c.metric.orientation);
  }
  MetricChart chart = catalog(name);
  if (c.metric.orientation != 0) chart.orientation = c.metric.orientation;
  return chart;
}

MetricEvaluator resolve_perturbation(const RunConfig& c) {
  const std::string kind = effective_perturbation(c);
  if (kind == "none") return {};
  if (kind == "bolt") return bolt_perturbation();
  if (kind == "expression")
    return expression_tensor(
        tensor_from(c.perturbation.factor, c.perturbation.components, "perturbation"));
  throw ConfigError("[perturbation] kind: must be none, bolt or expression");
}

GridSpec resolve_region(const RunConfig& c) {
  GridSpec g;
  g.center = c.region.center;
  g.half_width = c.region.half_width;
  g.n = c.region.n;
  g.r_min = c.region.r_min;
  g.r_max = c.region.r_max;
  return g;
}

}  // namespace twistor
