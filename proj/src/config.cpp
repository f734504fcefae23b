#include "esjj/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace esjj {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    fail(ErrKind::ConfigError, "value of '" + key + "' is not a number: " + v);
  return d;
}

long parse_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  long n = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    fail(ErrKind::ConfigError, "value of '" + key + "' is not an integer: " + v);
  return n;
}

// "name:k1=v1,k2=v2" -> (name, options); bare "name" gives empty options
std::pair<std::string, std::map<std::string, std::string>> split_spec(const std::string& spec) {
  std::string name = spec;
  std::map<std::string, std::string> opts;
  size_t colon = spec.find(':');
  if (colon != std::string::npos) {
    name = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      size_t eq = item.find('=');
      if (eq == std::string::npos)
        fail(ErrKind::ConfigError, "malformed option '" + item + "' in spec " + spec);
      opts[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
  }
  return {trim(name), opts};
}

double opt_double(const std::map<std::string, std::string>& o, const std::string& key,
                  double fallback) {
  auto it = o.find(key);
  return it == o.end() ? fallback : parse_double(key, it->second);
}

void reject_unknown(const std::map<std::string, std::string>& opts,
                    std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [k, v] : opts) {
    bool ok = false;
    for (const char* good : known) ok = ok || k == good;
    if (!ok) fail(ErrKind::ConfigError, "unknown option '" + k + "' in " + where);
  }
}

} // namespace

ConfigSections parse_ini_text(const std::string& text) {
  ConfigSections out;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(ErrKind::ConfigError, "unterminated section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        fail(ErrKind::ConfigError, "empty section name at line " + std::to_string(lineno));
      out[section];
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrKind::ConfigError, "expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(ErrKind::ConfigError, "empty key at line " + std::to_string(lineno));
    if (section.empty())
      fail(ErrKind::ConfigError, "key outside any section at line " + std::to_string(lineno));
    out[section][key] = val;
  }
  return out;
}

ConfigSections parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrKind::IoError, "cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_ini_text(buf.str());
}

RunConfig config_from_sections(const ConfigSections& sections) {
  RunConfig rc;
  for (const auto& [section, kv] : sections) {
    if (section == "model") {
      for (const auto& [k, v] : kv) {
        if (k == "alpha") rc.params.alpha = parse_double(k, v);
        else if (k == "epsilon") rc.params.epsilon = parse_double(k, v);
        else if (k == "lambda") rc.params.lambda = parse_double(k, v);
        else if (k == "length") rc.params.length = parse_double(k, v);
        else if (k == "horizon") rc.params.horizon = parse_double(k, v);
        else fail(ErrKind::ConfigError, "unknown key '" + k + "' in [model]");
      }
    } else if (section == "data") {
      for (const auto& [k, v] : kv) {
        if (k == "h0") rc.h0 = v;
        else if (k == "h1") rc.h1 = v;
        else if (k == "source") rc.source = v;
        else fail(ErrKind::ConfigError, "unknown key '" + k + "' in [data]");
      }
    } else if (section == "grid") {
      for (const auto& [k, v] : kv) {
        long n = parse_int(k, v);
        if (n < 2) fail(ErrKind::ConfigError, "grid counts must be at least 2");
        if (k == "x_points") rc.x_points = static_cast<size_t>(n);
        else if (k == "t_points") rc.t_points = static_cast<size_t>(n);
        else fail(ErrKind::ConfigError, "unknown key '" + k + "' in [grid]");
      }
    } else if (section == "quadrature") {
      for (const auto& [k, v] : kv) {
        if (k == "xi_points") rc.quad.xi_points = static_cast<int>(parse_int(k, v));
        else if (k == "tau_points") rc.quad.tau_points = static_cast<int>(parse_int(k, v));
        else if (k == "rule") {
          if (v == "simpson") rc.quad.rule = QuadRule::CompositeSimpson;
          else if (v == "gauss") rc.quad.rule = QuadRule::GaussLegendreComposite;
          else fail(ErrKind::ConfigError, "unknown quadrature rule " + v);
        } else fail(ErrKind::ConfigError, "unknown key '" + k + "' in [quadrature]");
      }
    } else if (section == "truncation") {
      for (const auto& [k, v] : kv) {
        if (k == "modes") rc.truncation = v;
        else fail(ErrKind::ConfigError, "unknown key '" + k + "' in [truncation]");
      }
    } else if (section == "solver") {
      for (const auto& [k, v] : kv) {
        if (k == "kind") {
          if (v == "linear") rc.solver = SolverKind::Linear;
          else if (v == "picard") rc.solver = SolverKind::Picard;
          else if (v == "fd") rc.solver = SolverKind::FdOracle;
          else fail(ErrKind::ConfigError, "unknown solver kind " + v);
        } else if (k == "weight") {
          if (v == "selfadjoint") rc.weight = WeightMode::SelfAdjoint;
          else if (v == "onesided") rc.weight = WeightMode::OneSided;
          else fail(ErrKind::ConfigError, "unknown weight mode " + v);
        } else fail(ErrKind::ConfigError, "unknown key '" + k + "' in [solver]");
      }
    } else if (section == "picard") {
      for (const auto& [k, v] : kv) {
        if (k == "tol") rc.picard.tol = parse_double(k, v);
        else if (k == "max_iter") rc.picard.max_iter = static_cast<int>(parse_int(k, v));
        else if (k == "window") rc.picard.window = parse_double(k, v);
        else if (k == "damping") rc.picard.damping = parse_double(k, v);
        else if (k == "start") {
          if (v == "linear") rc.picard.start = PicardStart::LinearSolution;
          else if (v == "zero") rc.picard.start = PicardStart::ZeroField;
          else fail(ErrKind::ConfigError, "unknown picard start " + v);
        } else fail(ErrKind::ConfigError, "unknown key '" + k + "' in [picard]");
      }
    } else if (section == "fd") {
      for (const auto& [k, v] : kv) {
        if (k == "nx") rc.fd.nx = static_cast<int>(parse_int(k, v));
        else if (k == "dt") rc.fd.dt = parse_double(k, v);
        else if (k == "scheme") {
          if (v == "rk4") rc.fd.scheme = FdScheme::ExplicitRK4;
          else if (v == "semi-implicit") rc.fd.scheme = FdScheme::SemiImplicit;
          else fail(ErrKind::ConfigError, "unknown fd scheme " + v);
        } else fail(ErrKind::ConfigError, "unknown key '" + k + "' in [fd]");
      }
    } else if (section == "output") {
      for (const auto& [k, v] : kv) {
        if (k == "dir") rc.out_dir = v;
        else if (k == "format") {
          if (v == "csv") rc.format = OutputFormat::Csv;
          else if (v == "bin") rc.format = OutputFormat::Binary;
          else if (v == "json") rc.format = OutputFormat::Json;
          else fail(ErrKind::ConfigError, "unknown output format " + v);
        } else fail(ErrKind::ConfigError, "unknown key '" + k + "' in [output]");
      }
    } else {
      fail(ErrKind::ConfigError, "unknown section [" + section + "]");
    }
  }
  rc.fd.t_end = rc.params.horizon;
  validate_params(rc.params);
  validate_quadrature(rc.quad);
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  return config_from_sections(parse_ini_file(path));
}

Profile profile_from_spec(const std::string& spec, double length) {
  auto [name, opts] = split_spec(spec);
  if (name == "zero") {
    reject_unknown(opts, {}, spec);
    return zero_profile();
  }
  if (name == "sine") {
    reject_unknown(opts, {"k", "amp"}, spec);
    long k = opts.count("k") ? parse_int("k", opts.at("k")) : 1;
    if (k < 1) fail(ErrKind::ConfigError, "sine profile needs k >= 1");
    return sine_mode(static_cast<int>(k), opt_double(opts, "amp", 1.0), length);
  }
  if (name == "bump") {
    reject_unknown(opts, {"amp"}, spec);
    return poly_bump(opt_double(opts, "amp", 1.0), length);
  }
  if (name == "parabola") {
    reject_unknown(opts, {"amp"}, spec);
    return parabola(opt_double(opts, "amp", 1.0), length);
  }
  if (name == "table") {
    reject_unknown(opts, {"path", "reg"}, spec);
    auto it = opts.find("path");
    if (it == opts.end()) fail(ErrKind::ConfigError, "table profile needs path=FILE");
    std::ifstream in(it->second);
    if (!in) fail(ErrKind::IoError, "cannot read table file " + it->second);
    std::vector<double> xs, vs;
    std::string line;
    while (std::getline(in, line)) {
      for (char& c : line)
        if (c == ',') c = ' ';
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      std::stringstream ls(line);
      double x, v;
      if (!(ls >> x >> v)) fail(ErrKind::ConfigError, "malformed table line: " + line);
      xs.push_back(x);
      vs.push_back(v);
    }
    Regularity reg = Regularity::C0;
    auto rit = opts.find("reg");
    if (rit != opts.end()) {
      if (rit->second == "c0") reg = Regularity::C0;
      else if (rit->second == "c1") reg = Regularity::C1;
      else if (rit->second == "c2") reg = Regularity::C2;
      else fail(ErrKind::ConfigError, "unknown regularity " + rit->second);
    }
    return tabulated(std::move(xs), std::move(vs), reg);
  }
  fail(ErrKind::ConfigError, "unknown profile '" + name + "'");
}

SourceFn source_from_spec(const std::string& spec, double length) {
  auto [name, opts] = split_spec(spec);
  if (name == "zero") {
    reject_unknown(opts, {}, spec);
    return zero_source();
  }
  if (name == "constant") {
    reject_unknown(opts, {"value"}, spec);
    double c = opt_double(opts, "value", 0.0);
    return plain_source([c](double, double) { return c; });
  }
  if (name == "mode") {
    reject_unknown(opts, {"k", "amp", "rate"}, spec);
    long k = opts.count("k") ? parse_int("k", opts.at("k")) : 1;
    if (k < 1) fail(ErrKind::ConfigError, "mode source needs k >= 1");
    double amp = opt_double(opts, "amp", 1.0);
    double rate = opt_double(opts, "rate", 0.0);
    double gamma = static_cast<double>(k) * 3.14159265358979323846 / length;
    return plain_source(
        [amp, rate, gamma](double x, double t) { return amp * std::sin(gamma * x) * std::exp(-rate * t); });
  }
  if (name == "sine-gordon") {
    reject_unknown(opts, {"bias"}, spec);
    return sine_gordon_source(opt_double(opts, "bias", 0.0));
  }
  if (name == "explip") {
    reject_unknown(opts, {"gain", "rate"}, spec);
    double gain = opt_double(opts, "gain", 1.0);
    double rate = opt_double(opts, "rate", 0.0);
    if (rate < 0.0) fail(ErrKind::ConfigError, "explip rate must be nonnegative");
    SourceFn s;
    s.f = [gain, rate](double, double t, double u) { return gain * u * std::exp(-rate * t); };
    s.lipschitz_const = std::abs(gain);
    s.depends_on_u = true;
    return s;
  }
  fail(ErrKind::ConfigError, "unknown source '" + name + "'");
}

GreenEvaluator evaluator_from_config(const RunConfig& rc) {
  const std::string& t = rc.truncation;
  if (t.rfind("tol=", 0) == 0)
    return evaluator_tail_tol(rc.params, parse_double("truncation", t.substr(4)), 0.1, rc.weight);
  long n = parse_int("truncation", t);
  if (n < 1) fail(ErrKind::ConfigError, "truncation needs a positive mode count");
  return evaluator_fixed_n(rc.params, static_cast<int>(n), rc.weight);
}

std::string doubled_truncation(const std::string& spec) {
  if (spec.rfind("tol=", 0) == 0)
    fail(ErrKind::ConfigError, "cannot double a tolerance-driven truncation; give a mode count");
  long n = parse_int("truncation", spec);
  if (n < 1) fail(ErrKind::ConfigError, "truncation needs a positive mode count");
  return std::to_string(2 * n);
}

} // namespace esjj
