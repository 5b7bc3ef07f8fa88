// perigid: command-line front end.
//
//   perigid gen stressed -o fw.json
//   perigid gen simplex --dim 3 --variant removed:1 [--regular] -o fw.json
//   perigid analyze fw.json
//   perigid cone fw.json --radius 2 --out-dir out/
//   perigid star fw.json --orbit red
//   perigid simulate fw.json --ray 0 --steps 50 --h 0.01 --out-dir out/
//
// Exit codes: 0 success, 2 usage or invalid input, 3 numerical failure,
// 4 I/O or parse error.

#include <perigid/perigid.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace perigid;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
      return kExitIo;
    case ErrorCode::LoopEdge:
    case ErrorCode::DuplicateEdgeOrbit:
    case ErrorCode::DuplicateVertexOrbit:
    case ErrorCode::SingularLattice:
    case ErrorCode::ZeroLengthEdge:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::UnknownOrbit:
    case ErrorCode::InvalidDimension:
    case ErrorCode::NotSimplexFamily:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

double env_or(const char* name, double fallback) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return fallback;
  try {
    const double v = std::stod(raw);
    if (v > 0.0) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidDimension, std::string(name) + " must be a positive number");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir);
}

SimplexVariant parse_variant(const std::string& s) {
  if (s == "base") return SimplexVariant::base();
  if (s == "enhanced") return SimplexVariant::enhanced();
  if (s.rfind("removed:", 0) == 0) {
    try {
      return SimplexVariant::removed_edge(std::stoi(s.substr(8)));
    } catch (const std::exception&) {
    }
  }
  throw CLI::ValidationError("--variant", "expected base, enhanced or removed:K");
}

Vec load_direction(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::ParseError, "direction file must hold a JSON array");
  Vec v(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) throw Error(ErrorCode::ParseError, "direction entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = doc[i].get<double>();
  }
  return v;
}

struct Options {
  std::string family;
  int dim = 3;
  std::string variant = "base";
  bool regular = false;
  std::string input;
  std::string output;
  std::string out_dir = ".";
  std::string orbit;
  int radius = kDefaultRadius;
  std::optional<int> ray;
  std::string direction_file;
  bool reverse = false;
  int steps = 50;
  double h = 0.01;
  int supercell = 1;
  std::string format = "obj";
  std::optional<double> tol_rank;
  std::optional<double> tol_newton;
  double tol_audit = 1e-8;
};

int run_gen(const Options& o) {
  PeriodicFramework fw = o.family == "stressed" ? stressed_framework()
                                                 : simplex_framework(o.dim, parse_variant(o.variant), o.regular);
  emit(framework_to_string(fw), o.output);
  return 0;
}

int run_analyze(const Options& o, double tol_rank) {
  const auto fw = load_framework(o.input);
  emit(report_json(analyze(fw, tol_rank)).dump(2) + "\n", o.output);
  return 0;
}

int run_cone(const Options& o, double tol_rank) {
  const auto fw = load_framework(o.input);
  const auto report = analyze(fw, tol_rank);
  const auto cone = expansive_cone(fw, report, o.radius);
  const auto stable = report.dof > 0 ? stable_radius(fw, report, o.radius) : std::optional<int>(o.radius);
  make_dir(o.out_dir);
  emit(cone_json(cone, stable).dump(2) + "\n", (fs::path(o.out_dir) / "cone.json").string());

  Vec interior = Vec::Zero(static_cast<Eigen::Index>(fw.num_unknowns()));
  for (std::size_t i = 0; i < cone.rays.size(); ++i) interior += cone.ray_motion(i);
  std::ostringstream csv;
  write_pair_csv(csv, fw, o.radius, interior);
  emit(csv.str(), (fs::path(o.out_dir) / "pairs.csv").string());
  std::cout << cone_json(cone, stable).dump(2) << "\n";
  return 0;
}

int run_star(const Options& o) {
  const auto fw = load_framework(o.input);
  const auto analysis = analyze_star(vertex_star(fw, o.orbit), fw.dimension());
  auto j = star_json(analysis);
  j["num_vectors"] = vertex_star(fw, o.orbit).vectors.size();
  emit(j.dump(2) + "\n", o.output);
  return 0;
}

int run_simulate(const Options& o, double tol_rank, double tol_newton) {
  const auto fw = load_framework(o.input);
  const auto report = analyze(fw, tol_rank);

  PeriodicFramework mechanism = fw;
  Vec direction;
  if (o.ray) {
    if (report.dof == 0) throw Error(ErrorCode::NotAFlex, "framework has no nontrivial flex");
    const auto cone = expansive_cone(fw, report, o.radius);
    if (*o.ray < 0 || static_cast<std::size_t>(*o.ray) >= cone.rays.size())
      throw Error(ErrorCode::IndexOutOfRange, "ray index " + std::to_string(*o.ray) + " of " +
                                                  std::to_string(cone.rays.size()));
    direction = cone.ray_motion(static_cast<std::size_t>(*o.ray));
    mechanism = ray_mechanism(fw, cone, static_cast<std::size_t>(*o.ray));
  } else {
    direction = load_direction(o.direction_file);
  }
  if (o.reverse) direction = -direction;

  ContinuationOptions copts;
  copts.steps = o.steps;
  copts.step_size = o.h;
  copts.newton_tol = tol_newton;
  copts.rank_tol = tol_rank;
  MotionPath path = continue_motion(mechanism, direction, copts);
  // Report geometry on the input graph; inserted holding bars are not drawn.
  for (auto& frame : path.frames) frame = fw.with_placement(frame.placement());

  make_dir(o.out_dir);
  export_frames(path, o.supercell, o.format == "csv" ? FrameFormat::Csv : FrameFormat::Obj, o.out_dir);
  const auto audit = audit_expansiveness(path, o.radius, o.tol_audit);
  std::ostringstream csv;
  write_audit_csv(csv, audit, fw.dimension());
  emit(csv.str(), (fs::path(o.out_dir) / "audit.csv").string());

  OrderedJson summary;
  summary["steps"] = o.steps;
  summary["step_size"] = path.step_size;
  summary["max_residual"] = *std::max_element(path.residuals.begin(), path.residuals.end());
  summary["audit_passed"] = audit.passed;
  summary["violations"] = audit.violations.size();
  if (is_simplex_family(fw)) summary["facet_separation"] = facet_separation(path);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic framework rigidity and expansive-motion toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Write a built-in framework as JSON");
  gen->add_option("family", o.family, "stressed | simplex")->required()->check(CLI::IsMember({"stressed", "simplex"}));
  gen->add_option("--dim", o.dim, "Dimension for the simplex family")->check(CLI::Range(2, 12));
  gen->add_option("--variant", o.variant, "base | enhanced | removed:K");
  gen->add_flag("--regular", o.regular, "Use a regular simplex lattice instead of the standard basis");
  gen->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* an = app.add_subcommand("analyze", "Rigidity report");
  an->add_option("framework", o.input)->required();
  an->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* cone = app.add_subcommand("cone", "Infinitesimal expansive cone");
  cone->add_option("framework", o.input)->required();
  cone->add_option("--radius", o.radius, "Pair truncation radius")->check(CLI::PositiveNumber);
  cone->add_option("--out-dir", o.out_dir, "Directory for cone.json and pairs.csv");

  auto* star = app.add_subcommand("star", "Cone analysis of one vertex star");
  star->add_option("framework", o.input)->required();
  star->add_option("--orbit", o.orbit, "Vertex orbit id")->required();
  star->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Continue a flex and audit expansiveness");
  sim->set_help_flag("--help", "Print this help message and exit");  // frees the name h for the step size
  sim->add_option("framework", o.input)->required();
  auto* ray_opt = sim->add_option("--ray", o.ray, "Extremal ray index of the expansive cone");
  auto* dir_opt = sim->add_option("--direction", o.direction_file, "JSON array holding a motion vector");
  ray_opt->excludes(dir_opt);
  sim->add_flag("--reverse", o.reverse, "Follow the opposite direction");
  sim->add_option("--steps", o.steps)->check(CLI::PositiveNumber);
  sim->add_option("--h", o.h, "Step size in units of the shortest edge length")->check(CLI::PositiveNumber);
  sim->add_option("--radius", o.radius, "Pair truncation radius")->check(CLI::PositiveNumber);
  sim->add_option("--supercell", o.supercell, "Box radius of exported lattice cells")->check(CLI::NonNegativeNumber);
  sim->add_option("--format", o.format)->check(CLI::IsMember({"obj", "csv"}));
  sim->add_option("--out-dir", o.out_dir, "Directory for frames and audit.csv");

  for (auto* sub : {an, cone, sim}) {
    sub->add_option("--tol-rank", o.tol_rank, "Relative rank tolerance")->check(CLI::PositiveNumber);
  }
  sim->add_option("--tol-newton", o.tol_newton, "Newton residual tolerance")->check(CLI::PositiveNumber);
  sim->add_option("--tol-audit", o.tol_audit, "Audit tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim && !o.ray && o.direction_file.empty())
      throw CLI::RequiredError("simulate needs --ray or --direction");
    const double tol_rank = o.tol_rank.value_or(env_or("PERIGID_TOL_RANK", kDefaultRankTolerance));
    const double tol_newton = o.tol_newton.value_or(env_or("PERIGID_TOL_NEWTON", 1e-10));
    if (*gen) return run_gen(o);
    if (*an) return run_analyze(o, tol_rank);
    if (*cone) return run_cone(o, tol_rank);
    if (*star) return run_star(o);
    return run_simulate(o, tol_rank, tol_newton);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}
