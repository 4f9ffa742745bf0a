// spod: generate data, compute shifted/plain POD decompositions, compare and export.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "spod/decomposition_io.hpp"
#include "spod/generators.hpp"
#include "spod/optimizer.hpp"
#include "spod/pod.hpp"

using json = nlohmann::ordered_json;
using namespace spod;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kNumerical = 1, kUsage = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// output helpers

void write_atomically(const std::string& path, const std::function<void(std::ostream&)>& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw IoError("cannot open " + tmp + " for writing");
    body(f);
    f.flush();
    if (!f) throw IoError("failed writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

struct Manifest {
  json j;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Manifest(const std::string& command, int argc, char** argv) {
    j["command"] = command;
    j["argv"] = std::vector<std::string>(argv, argv + argc);
    j["versions"] = {{"spod", kVersion},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)}};
  }
  void write(const std::string& output) {
    j["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_atomically(output + ".manifest.json", [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }
};

// ---------------------------------------------------------------------------
// frame specs: "r=2,path=linear:0.185[:intercept],init=first|zeros"
//              path=nodal-file:p.csv | poly:c0:c1:...

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  double v;
  if (!parse_double(s, v)) throw UsageError("invalid number '" + s + "' in " + what);
  return v;
}

Vector read_path_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open path file " + path);
  std::vector<double> vals;
  std::string tok;
  while (f >> tok) {
    for (const auto& part : split(tok, ',')) {
      if (part.empty()) continue;
      double v;
      if (!parse_double(part, v)) throw ParseError(0, path + ": invalid value '" + part + "'");
      vals.push_back(v);
    }
  }
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

FrameInit parse_frame_spec(const std::string& spec, const TimeGrid& tgrid) {
  int rank = 0;
  std::optional<PathRepr> path;
  ModeInit modes = ModeInit::first_snapshots;
  for (const auto& item : split(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("frame spec item '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "r") {
      const double r = to_double(val, "frame rank");
      if (r < 1 || r != static_cast<int>(r)) throw UsageError("frame rank must be a positive integer");
      rank = static_cast<int>(r);
    } else if (key == "path") {
      const auto colon = val.find(':');
      const std::string kind = val.substr(0, colon);
      const std::string rest = colon == std::string::npos ? "" : val.substr(colon + 1);
      if (kind == "linear") {
        const auto parts = split(rest, ':');
        if (parts.empty() || parts.size() > 2) throw UsageError("path=linear:<slope>[:<intercept>]");
        path = linear_path(tgrid, to_double(parts[0], "slope"), parts.size() > 1 ? to_double(parts[1], "intercept") : 0.0);
      } else if (kind == "nodal-file") {
        path = PathRepr::nodal(read_path_file(rest));
      } else if (kind == "poly") {
        const auto parts = split(rest, ':');
        Vector c(parts.size());
        for (std::size_t i = 0; i < parts.size(); ++i) c[i] = to_double(parts[i], "polynomial coefficient");
        path = PathRepr::polynomial(c);
      } else {
        throw UsageError("unknown path kind '" + kind + "' (linear, nodal-file, poly)");
      }
    } else if (key == "init") {
      if (val == "first") modes = ModeInit::first_snapshots;
      else if (val == "zeros") modes = ModeInit::snapshot_then_zeros;
      else throw UsageError("init must be 'first' or 'zeros'");
    } else {
      throw UsageError("unknown frame spec key '" + key + "'");
    }
  }
  if (rank == 0 || !path) throw UsageError("frame spec needs r=<rank> and path=<kind:...>");
  return FrameInit{rank, *path, modes};
}

// ---------------------------------------------------------------------------
// optimizer options: --config JSON first, explicit flags override

struct OptFlags {
  std::string config_path;
  int max_iters = 2000;
  double grad_tol = 1e-10;
  int memory = 10;
  double C = 10.0;
  double lambda = 0.0;
  int threads = 1;
  std::string vars = "coeffs,paths,modes";
};

void add_opt_flags(CLI::App* app, OptFlags& o) {
  app->add_option("--config", o.config_path, "JSON file with optimizer settings");
  app->add_option("--max-iters", o.max_iters, "iteration cap")->check(CLI::NonNegativeNumber);
  app->add_option("--grad-tol", o.grad_tol, "gradient infinity-norm tolerance");
  app->add_option("--memory", o.memory, "L-BFGS history length")->check(CLI::PositiveNumber);
  app->add_option("--C", o.C, "penalty bound");
  app->add_option("--lambda", o.lambda, "penalty coefficient");
  app->add_option("--threads", o.threads, "threads for cost evaluation")->check(CLI::PositiveNumber);
  app->add_option("--vars", o.vars, "blocks to optimize: comma list of coeffs, paths, modes");
}

OptimizerConfig resolve_config(const CLI::App* app, const OptFlags& o, json& echo) {
  OptimizerConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream f(o.config_path);
    if (!f) throw IoError("cannot open config " + o.config_path);
    json c;
    try {
      c = json::parse(f);
    } catch (const json::exception& e) {
      throw ParseError(0, o.config_path + ": " + e.what());
    }
    try {
      for (const auto& [key, val] : c.items()) {
        if (key == "max_iters") cfg.max_iters = val.get<int>();
        else if (key == "grad_tol") cfg.grad_tol = val.get<double>();
        else if (key == "lbfgs_memory") cfg.lbfgs_memory = val.get<int>();
        else if (key == "armijo_c") cfg.armijo_c = val.get<double>();
        else if (key == "backtrack_factor") cfg.backtrack_factor = val.get<double>();
        else if (key == "initial_step") cfg.initial_step = val.get<double>();
        else if (key == "C") cfg.C = val.get<double>();
        else if (key == "lambda") cfg.lambda = val.get<double>();
        else if (key == "threads") cfg.threads = val.get<int>();
        else if (key == "variables") {
          cfg.variables.coeffs = val.value("coeffs", true);
          cfg.variables.paths = val.value("paths", true);
          cfg.variables.modes = val.value("modes", true);
        } else throw UsageError("unknown config key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw UsageError(o.config_path + ": " + e.what());
    }
  }
  if (app->count("--max-iters")) cfg.max_iters = o.max_iters;
  if (app->count("--grad-tol")) cfg.grad_tol = o.grad_tol;
  if (app->count("--memory")) cfg.lbfgs_memory = o.memory;
  if (app->count("--C")) cfg.C = o.C;
  if (app->count("--lambda")) cfg.lambda = o.lambda;
  if (app->count("--threads")) cfg.threads = o.threads;
  if (app->count("--vars")) {
    cfg.variables = {false, false, false};
    for (const auto& v : split(o.vars, ',')) {
      if (v == "coeffs") cfg.variables.coeffs = true;
      else if (v == "paths") cfg.variables.paths = true;
      else if (v == "modes") cfg.variables.modes = true;
      else throw UsageError("unknown variable block '" + v + "'");
    }
  }
  cfg.validate();
  echo = {{"max_iters", cfg.max_iters},
          {"grad_tol", cfg.grad_tol},
          {"lbfgs_memory", cfg.lbfgs_memory},
          {"armijo_c", cfg.armijo_c},
          {"backtrack_factor", cfg.backtrack_factor},
          {"initial_step", cfg.initial_step},
          {"C", cfg.C},
          {"lambda", cfg.lambda},
          {"threads", cfg.threads},
          {"variables",
           {{"coeffs", cfg.variables.coeffs}, {"paths", cfg.variables.paths}, {"modes", cfg.variables.modes}}}};
  return cfg;
}

bool is_decomposition_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  std::string first;
  std::getline(f, first);
  return first == "# spod-decomp-v1";
}

// bundled gradient-check fixture: two frames, mixed path kinds, fixed seed
std::pair<SnapshotSet, Decomposition> gradcheck_fixture() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SpatialGrid g(24, 1.0);
  const TimeGrid t = TimeGrid::uniform(12, 1.0);
  auto rnd = [&](Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = u(rng);
    return m;
  };
  Vector nodal(13);
  for (int k = 0; k <= 12; ++k) nodal[k] = 0.11 * k + 0.013;  // stays off cell boundaries
  Vector poly(3);
  poly << 0.27, -0.31, 0.05;
  Decomposition d{{Frame{PathRepr::nodal(nodal), rnd(2, 24), rnd(13, 2)},
                   Frame{PathRepr::polynomial(poly), rnd(1, 24), rnd(13, 1)}},
                  g, t};
  return {SnapshotSet(g, t, rnd(13, 24)), std::move(d)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shifted proper orthogonal decomposition"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // generate
  auto* gen = app.add_subcommand("generate", "write a snapshot file");
  gen->require_subcommand(1);
  std::string out;
  BurgersParams bp;
  auto* gb = gen->add_subcommand("burgers", "closed-form viscous Burgers solution on [0, 1)");
  gb->add_option("--re", bp.reynolds, "Reynolds number");
  gb->add_option("--nx", bp.nx_intervals, "spatial intervals")->check(CLI::PositiveNumber);
  gb->add_option("--nt", bp.nt_intervals, "time intervals")->check(CLI::PositiveNumber);
  gb->add_option("--tfinal", bp.tfinal, "final time");
  gb->add_option("-o,--output", out, "snapshot file")->required();

  FhnParams fp;
  std::string scaling = "unit";
  auto* gf = gen->add_subcommand("fhn", "periodic FitzHugh-Nagumo wave train");
  gf->add_option("--nu", fp.nu, "diffusion coefficient");
  gf->add_option("--spacing", fp.h, "grid spacing h");
  gf->add_option("--length", fp.length, "domain length");
  gf->add_option("--tfinal", fp.tfinal, "final time");
  gf->add_option("--dt-out", fp.dt_out, "sampling interval");
  gf->add_option("--dt", fp.dt_int, "RK4 step");
  gf->add_option("--scaling", scaling, "Laplacian stencil scaling")->check(CLI::IsMember({"unit", "mesh"}));
  gf->add_option("-o,--output", out, "snapshot file")->required();

  int syn_n = 64, syn_m = 32, speed_cells = 1;
  double width = 0.05, center = 0.3;
  std::string profile = "gaussian", truth_out;
  auto* gs = gen->add_subcommand("synthetic", "one profile moving a whole number of cells per step on [0, 1)");
  gs->add_option("--n", syn_n, "spatial nodes")->check(CLI::Range(3, 1 << 20));
  gs->add_option("--m", syn_m, "time intervals on [0, 1]")->check(CLI::PositiveNumber);
  gs->add_option("--profile", profile, "gaussian or spike")->check(CLI::IsMember({"gaussian", "spike"}));
  gs->add_option("--width", width, "Gaussian width");
  gs->add_option("--center", center, "initial center");
  gs->add_option("--speed-cells", speed_cells, "cells travelled per time step");
  gs->add_option("--truth", truth_out, "also write the generating decomposition");
  gs->add_option("-o,--output", out, "snapshot file")->required();

  // decompose
  std::string input, init_decomp, mode = "full";
  std::vector<std::string> frame_specs;
  int r = 0;
  bool require_converged = false, quiet = false;
  OptFlags of;
  auto* dec = app.add_subcommand("decompose", "optimize a shifted decomposition");
  dec->add_option("input", input, "snapshot file")->required();
  dec->add_option("--frames", frame_specs, "frame spec, repeat per frame: r=2,path=linear:0.185[,init=first|zeros]");
  dec->add_option("--init-decomp", init_decomp, "start from a saved decomposition instead of --frames");
  dec->add_option("--mode", mode, "full or path-only")->check(CLI::IsMember({"full", "path-only"}));
  dec->add_option("--r", r, "rank for path-only mode");
  dec->add_flag("--require-converged", require_converged, "exit 1 unless the gradient tolerance was met");
  dec->add_flag("-q,--quiet", quiet, "no progress output");
  dec->add_option("-o,--output", out, "decomposition file")->required();
  add_opt_flags(dec, of);

  // pod
  auto* podc = app.add_subcommand("pod", "weighted POD baseline");
  podc->add_option("input", input, "snapshot file")->required();
  podc->add_option("--r", r, "rank")->required()->check(CLI::PositiveNumber);
  podc->add_option("-o,--output", out, "decomposition file")->required();

  // compare
  std::vector<std::string> decomps;
  std::string csv_out;
  auto* cmp = app.add_subcommand("compare", "relative L2 errors of decompositions, by rank and method");
  cmp->add_option("input", input, "snapshot file")->required();
  cmp->add_option("decompositions", decomps, "decomposition files")->required();
  cmp->add_option("--csv", csv_out, "also write the table as CSV");

  // gradcheck
  std::string gc_decomp;
  double gc_tol = 1e-5;
  auto* gc = app.add_subcommand("gradcheck", "analytic gradient against central finite differences");
  gc->add_option("input", input, "snapshot file (default: bundled fixture)");
  gc->add_option("decomposition", gc_decomp, "decomposition to linearize about");
  gc->add_option("--tol", gc_tol, "maximum relative deviation");

  // export-heatmap
  auto* ex = app.add_subcommand("export-heatmap", "write t,x,value CSV of a snapshot file or a reconstruction");
  ex->add_option("input", input, "snapshot or decomposition file")->required();
  ex->add_option("-o,--output", out, "CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) {
      Manifest man("generate", argc, argv);
      SnapshotSet z = [&] {
        if (*gb) {
          man.j["generator"] = "burgers";
          man.j["config"] = {{"reynolds", bp.reynolds}, {"nx", bp.nx_intervals}, {"nt", bp.nt_intervals}, {"tfinal", bp.tfinal}};
          return burgers_analytic(bp);
        }
        if (*gf) {
          fp.scaling = scaling == "unit" ? LaplacianScaling::unit_spacing : LaplacianScaling::mesh;
          man.j["generator"] = "fhn";
          man.j["config"] = {{"nu", fp.nu}, {"h", fp.h}, {"length", fp.length}, {"tfinal", fp.tfinal},
                             {"dt_out", fp.dt_out}, {"dt", fp.dt_int}, {"scaling", scaling}};
          return fhn_simulate(fp);
        }
        man.j["generator"] = "synthetic";
        man.j["config"] = {{"n", syn_n}, {"m", syn_m}, {"profile", profile}, {"width", width},
                           {"center", center}, {"speed_cells", speed_cells}};
        const SpatialGrid g(syn_n, 1.0);
        const TimeGrid t = TimeGrid::uniform(syn_m, 1.0);
        const double speed = speed_cells * g.h() * syn_m;
        TravelingProfile tp{profile == "gaussian" ? gaussian_shape(width) : spike_shape(g.h()), center, speed};
        auto [zz, truth] = synthetic_traveling({tp}, g, t);
        if (!truth_out.empty()) {
          write_atomically(truth_out, [&](std::ostream& o) { save_decomposition(truth, o, "truth"); });
          man.j["outputs"].push_back(truth_out);
        }
        return zz;
      }();
      write_atomically(out, [&](std::ostream& o) { save_snapshots(z, o); });
      man.j["outputs"].push_back(out);
      man.j["nt"] = z.nt();
      man.j["nx"] = z.nx();
      man.write(out);
      std::printf("wrote %s (%d x %d)\n", out.c_str(), z.nt(), z.nx());
      return kOk;
    }

    if (*dec) {
      Manifest man("decompose", argc, argv);
      json echo;
      const OptimizerConfig cfg = resolve_config(dec, of, echo);
      const SnapshotSet z = load_snapshots(input);
      man.j["inputs"] = {input};
      man.j["config"] = echo;
      man.j["mode"] = mode;
      ProgressFn progress;
      if (!quiet)
        progress = [](int it, double f, double g) {
          if (it % 50 == 0) std::fprintf(stderr, "iter %5d  cost %.6e  |grad| %.3e\n", it, f, g);
        };
      const OptimizerResult res = [&] {
        if (mode == "path-only") {
          if (r < 1) throw UsageError("--mode path-only needs --r >= 1");
          if (frame_specs.size() != 1) throw UsageError("--mode path-only needs exactly one --frames spec for the initial path");
          if (r > std::min(z.nt(), z.nx())) throw InvalidArgument("rank exceeds the data dimensions");
          const FrameInit fi = parse_frame_spec(frame_specs[0], z.tgrid);
          man.j["frames"] = frame_specs;
          man.j["r"] = r;
          auto po = optimize_path_only(z, fi.path, r, cfg, progress);
          man.j["isometry_defect"] = po.isometry_defect;
          return po;
        }
        Decomposition d0 = [&] {
          if (!init_decomp.empty()) {
            if (!frame_specs.empty()) throw UsageError("--frames and --init-decomp are exclusive");
            man.j["inputs"].push_back(init_decomp);
            return load_decomposition(init_decomp).decomposition;
          }
          if (frame_specs.empty()) throw UsageError("decompose needs --frames or --init-decomp");
          std::vector<FrameInit> fis;
          for (const auto& s : frame_specs) fis.push_back(parse_frame_spec(s, z.tgrid));
          man.j["frames"] = frame_specs;
          return initial_decomposition(z, fis);
        }();
        return optimize_decomposition(z, d0, cfg, progress);
      }();
      const double err = relative_l2_error(z, reconstruct(res.decomposition));
      write_atomically(out, [&](std::ostream& o) { save_decomposition(res.decomposition, o, mode == "path-only" ? "spod-path-only" : "spod"); });
      man.j["outputs"] = {out};
      man.j["iterations"] = res.iterations;
      man.j["termination"] = to_string(res.termination);
      man.j["final_cost"] = res.cost_history.empty() ? eval_cost(z, res.decomposition) : res.cost_history.back();
      man.j["final_relative_error"] = err;
      man.write(out);
      std::printf("%s: %d iterations (%s), relative L2 error %.6e\n", out.c_str(), res.iterations,
                  to_string(res.termination).c_str(), err);
      if (require_converged && res.termination != Termination::converged) {
        std::fprintf(stderr, "error: optimizer did not converge (%s)\n", to_string(res.termination).c_str());
        return kNumerical;
      }
      return kOk;
    }

    if (*podc) {
      Manifest man("pod", argc, argv);
      const SnapshotSet z = load_snapshots(input);
      if (r > std::min(z.nt(), z.nx())) throw InvalidArgument("rank exceeds the data dimensions");
      const Decomposition d = pod_decomposition(z, pod(z, r));
      const double err = relative_l2_error(z, reconstruct(d));
      write_atomically(out, [&](std::ostream& o) { save_decomposition(d, o, "pod"); });
      man.j["inputs"] = {input};
      man.j["outputs"] = {out};
      man.j["config"] = {{"r", r}};
      man.j["final_cost"] = eval_cost(z, d);
      man.j["final_relative_error"] = err;
      man.write(out);
      std::printf("%s: rank %d, relative L2 error %.6e\n", out.c_str(), r, err);
      return kOk;
    }

    if (*cmp) {
      const SnapshotSet z = load_snapshots(input);
      std::map<int, std::map<std::string, double>> table;
      std::vector<std::string> methods;
      for (const auto& path : decomps) {
        const auto df = load_decomposition(path);
        const double err = relative_l2_error(z, reconstruct(df.decomposition));
        if (std::find(methods.begin(), methods.end(), df.method) == methods.end()) methods.push_back(df.method);
        table[df.decomposition.total_modes()][df.method] = err;
      }
      std::printf("%4s", "r");
      for (const auto& m : methods) std::printf("  %16s", m.c_str());
      std::printf("\n");
      for (const auto& [rank, row] : table) {
        std::printf("%4d", rank);
        for (const auto& m : methods) {
          if (row.count(m)) std::printf("  %16.4e", row.at(m));
          else std::printf("  %16s", "-");
        }
        std::printf("\n");
      }
      if (!csv_out.empty()) {
        write_atomically(csv_out, [&](std::ostream& o) {
          o << "r";
          for (const auto& m : methods) o << ',' << m;
          o << '\n';
          for (const auto& [rank, row] : table) {
            o << rank;
            for (const auto& m : methods) o << ',' << (row.count(m) ? format_double(row.at(m)) : "");
            o << '\n';
          }
        });
      }
      return kOk;
    }

    if (*gc) {
      if (input.empty() != gc_decomp.empty()) throw UsageError("gradcheck takes both a snapshot and a decomposition, or neither");
      auto [z, d] = input.empty() ? gradcheck_fixture()
                                  : std::pair{load_snapshots(input), load_decomposition(gc_decomp).decomposition};
      const VariableSet all;
      const Vector analytic = pack_gradient(eval_cost_gradient(z, d), d, all);
      Decomposition work = d;
      const Vector x0 = pack(d, all);
      Vector x = x0;
      double worst = 0.0;
      for (Eigen::Index i = 0; i < x0.size(); ++i) {
        const double step = 1e-6 * std::max(1.0, std::abs(x0[i]));
        x[i] = x0[i] + step;
        unpack(x, work, all);
        const double up = eval_cost(z, work);
        x[i] = x0[i] - step;
        unpack(x, work, all);
        const double down = eval_cost(z, work);
        x[i] = x0[i];
        const double fd = (up - down) / (2.0 * step);
        worst = std::max(worst, std::abs(analytic[i] - fd) / std::max(std::abs(fd), 1e-4));
      }
      const bool pass = worst <= gc_tol;
      std::printf("gradcheck: %s  max relative deviation %.3e over %lld components (tol %.1e)\n", pass ? "PASS" : "FAIL",
                  worst, static_cast<long long>(x0.size()), gc_tol);
      return pass ? kOk : kNumerical;
    }

    if (*ex) {
      const SnapshotSet s = is_decomposition_file(input) ? reconstruct(load_decomposition(input).decomposition)
                                                         : load_snapshots(input);
      write_atomically(out, [&](std::ostream& o) { write_heatmap_csv(s, o); });
      std::printf("wrote %s\n", out.c_str());
      return kOk;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kNumerical;
  }
  return kOk;
}
