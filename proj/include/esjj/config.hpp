#pragma once

#include <map>
#include <string>

#include "esjj/fd.hpp"
#include "esjj/green.hpp"
#include "esjj/params.hpp"
#include "esjj/picard.hpp"
#include "esjj/profile.hpp"
#include "esjj/quadrature.hpp"

namespace esjj {

// sectioned key-value text: [section] headers, key = value lines, # comments
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;
ConfigSections parse_ini_text(const std::string& text);
ConfigSections parse_ini_file(const std::string& path);

enum class SolverKind { Linear, Picard, FdOracle };
enum class OutputFormat { Csv, Binary, Json };

// One run, fully determined: model constants, named data, grids, solver
// selection, output plumbing. Unknown sections or keys are rejected so typos
// cannot silently fall back to defaults.
struct RunConfig {
  Parameters params{1.0, 1.0, 0.0, 3.14159265358979323846, 1.0};
  std::string h0 = "zero";
  std::string h1 = "zero";
  std::string source = "zero";
  size_t x_points = 65;
  size_t t_points = 129;
  QuadratureSpec quad;
  std::string truncation = "512";  // integer mode count or "tol=X"
  SolverKind solver = SolverKind::Linear;
  WeightMode weight = WeightMode::SelfAdjoint;
  FdGrid fd;
  PicardConfig picard;
  std::string out_dir = ".";
  OutputFormat format = OutputFormat::Csv;
};

RunConfig config_from_sections(const ConfigSections& s);
RunConfig load_run_config(const std::string& path);

// Named data library.
// Profiles: "zero", "sine:k=1,amp=1", "bump:amp=1", "parabola:amp=1",
//           "table:path=FILE[,reg=c0|c1|c2]" (two-column x v text file)
Profile profile_from_spec(const std::string& spec, double length);
// Sources: "zero", "constant:value=c", "mode:k=1,amp=a[,rate=m]" (amp sin(k pi x/l) e^{-m t}),
//          "sine-gordon:bias=g", "explip:gain=g,rate=d" (gain u e^{-d t})
SourceFn source_from_spec(const std::string& spec, double length);

// evaluator for the config's truncation spec: integer -> fixed mode count,
// "tol=X" -> tail-bound driven selection
GreenEvaluator evaluator_from_config(const RunConfig& rc);

// "2x" support: integer counts double; tolerance specs are rejected since
// doubling has no single meaning for them
std::string doubled_truncation(const std::string& spec);

} // namespace esjj
