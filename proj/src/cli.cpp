#include "morphdecomp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string_view>

#include "morphdecomp/decomposition.hpp"
#include "morphdecomp/errors.hpp"
#include "morphdecomp/experiments.hpp"
#include "morphdecomp/io.hpp"
#include "morphdecomp/sensorimotor.hpp"

namespace morphdecomp::cli {

namespace {

// The Pmf3 input file could not be opened; an input problem, not an output one.
class MissingInput : public Error {
 public:
  using Error::Error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct PlanFlags {
  int resolution = OptimizationPlan{}.resolution;
  int refine_rounds = OptimizationPlan{}.refine_rounds;
  int oracle = 0;

  void attach(CLI::App* app, bool with_oracle) {
    app->add_option("--resolution", resolution, "coarse grid points per gamma axis")->capture_default_str();
    app->add_option("--refine-rounds", refine_rounds, "local refinement rounds")->capture_default_str();
    if (with_oracle)
      app->add_option("--oracle", oracle, "brute-force grid at this resolution (>= 101), no refinement");
  }
  OptimizationPlan plan() const {
    OptimizationPlan p;
    p.resolution = resolution;
    p.refine_rounds = refine_rounds;
    p.validate();
    return p;
  }
  DecompositionResult run(const Pmf3& P) const {
    return oracle > 0 ? decompose_oracle(P, oracle) : decompose(P, plan());
  }
};

struct Line {
  std::string key;
  std::string value;
};

void emit(std::ostream& out, const std::vector<Line>& lines, bool csv) {
  if (!csv) {
    for (const Line& l : lines) out << l.key << ' ' << l.value << '\n';
    return;
  }
  for (std::size_t k = 0; k < lines.size(); ++k) out << (k ? "," : "") << lines[k].key;
  out << '\n';
  for (std::size_t k = 0; k < lines.size(); ++k) out << (k ? "," : "") << lines[k].value;
  out << '\n';
}

std::vector<Line> decomposition_lines(const DecompositionResult& d, std::string_view uy, std::string_view uz) {
  const auto gamma = [](std::string_view name, GammaPoint g) {
    return std::vector<Line>{{"GAMMA_" + std::string(name) + "_MINUS", num(g.minus)},
                             {"GAMMA_" + std::string(name) + "_PLUS", num(g.plus)}};
  };
  std::vector<Line> lines{{"SI", num(d.si)},
                          {std::string(uy), num(d.ui_y)},
                          {std::string(uz), num(d.ui_z)},
                          {"CI", num(d.ci)},
                          {"MI_TOTAL", num(d.mi_total)},
                          {"RESIDUAL_SUM", num(d.residual_sum)},
                          {"RESIDUAL_PAIR_Y", num(d.residual_pair_y)},
                          {"RESIDUAL_PAIR_Z", num(d.residual_pair_z)},
                          {"RESIDUAL_COND", num(d.residual_cond)}};
  for (const auto& [name, g] : {std::pair{std::string_view("SI"), d.argmin_si}, std::pair{uy, d.argmin_ui_y},
                                std::pair{uz, d.argmin_ui_z}, std::pair{std::string_view("CI"), d.argmin_ci}}) {
    for (Line& l : gamma(name, g)) lines.push_back(std::move(l));
  }
  return lines;
}

int default_jobs() {
  const char* env = std::getenv("MORPHDECOMP_JOBS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 4096) throw ArgumentError("MORPHDECOMP_JOBS must be a positive integer");
  return static_cast<int>(v);
}

std::vector<Quantity> parse_quantities(const std::string& list) {
  std::vector<Quantity> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string name = list.substr(start, comma - start);
    const auto q = parse_quantity(name);
    if (!q) throw ArgumentError("unknown quantity `" + name + "`");
    out.push_back(*q);
    start = comma + 1;
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bivariate information decomposition and sensorimotor-loop morphological computation"};
  app.require_subcommand(1);

  // decompose
  auto* decompose_cmd = app.add_subcommand("decompose", "decompose a joint distribution read from a Pmf3 file");
  std::string input;
  bool csv = false;
  PlanFlags decompose_plan;
  decompose_cmd->add_option("input", input, "Pmf3 file (`x y z p` per line)")->required();
  decompose_cmd->add_flag("--csv", csv, "print one header row and one data row");
  decompose_plan.attach(decompose_cmd, true);

  // model-point
  auto* point_cmd = app.add_subcommand("model-point", "evaluate the sensorimotor model at one parameter point");
  ModelParams point;
  std::string config;
  PlanFlags point_plan;
  auto* phi_opt = point_cmd->add_option("--phi", point.phi);
  auto* psi_opt = point_cmd->add_option("--psi", point.psi);
  auto* omega_opt = point_cmd->add_option("--omega", point.omega);
  auto* zeta_opt = point_cmd->add_option("--zeta", point.zeta)->capture_default_str();
  auto* mu_opt = point_cmd->add_option("--mu", point.mu);
  auto* tau_opt = point_cmd->add_option("--tau", point.tau);
  point_cmd->add_option("--config", config, "key=value parameter file; explicit flags override it");
  point_plan.attach(point_cmd, true);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep (phi, psi) and export one CSV per quantity");
  SweepSpec spec;
  PlanFlags sweep_plan;
  std::string out_dir;
  std::string quantities;
  int jobs = 0;
  sweep_cmd->add_option("--phi-min", spec.phi_min)->capture_default_str();
  sweep_cmd->add_option("--phi-max", spec.phi_max)->capture_default_str();
  sweep_cmd->add_option("--psi-min", spec.psi_min)->capture_default_str();
  sweep_cmd->add_option("--psi-max", spec.psi_max)->capture_default_str();
  sweep_cmd->add_option("--steps", spec.steps_per_axis, "lattice points per axis")->capture_default_str();
  sweep_cmd->add_option("--omega", spec.omega)->capture_default_str();
  sweep_cmd->add_option("--zeta", spec.zeta)->capture_default_str();
  sweep_cmd->add_option("--mu", spec.mu)->capture_default_str();
  sweep_cmd->add_option("--tau", spec.tau)->capture_default_str();
  sweep_cmd->add_option("--quantities", quantities, "comma-separated subset of SI,UI_W,UI_A,CI,CMI_W,CMI_A_NORM,MI_TOTAL,DIFF");
  sweep_cmd->add_option("--jobs", jobs, "worker threads (default: MORPHDECOMP_JOBS or 1)");
  sweep_cmd->add_option("--out", out_dir, "output directory")->required();
  sweep_plan.attach(sweep_cmd, false);

  std::vector<const char*> argv{"morphdecomp"};
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (decompose_cmd->parsed()) {
      Pmf3 P = [&] {
        try {
          return read_pmf3(input);
        } catch (const IoError& e) {
          throw MissingInput(e.what());
        }
      }();
      emit(out, decomposition_lines(decompose_plan.run(P), "UI_Y", "UI_Z"), csv);
      return kOk;
    }

    if (point_cmd->parsed()) {
      ModelParams params = point;
      if (!config.empty()) {
        try {
          params = read_model_config(config);
        } catch (const IoError& e) {
          throw MissingInput(e.what());
        }
        const std::pair<CLI::Option*, double ModelParams::*> overrides[] = {
            {phi_opt, &ModelParams::phi}, {psi_opt, &ModelParams::psi}, {omega_opt, &ModelParams::omega},
            {zeta_opt, &ModelParams::zeta}, {mu_opt, &ModelParams::mu},  {tau_opt, &ModelParams::tau}};
        for (const auto& [opt, field] : overrides)
          if (opt->count() > 0) params.*field = point.*field;
      }
      params.validate();
      const WorldJoint world = compose_joint(params);
      const DecompositionResult d = point_plan.run(world.joint);
      const McMeasures m = measures_from(world.joint, d);

      std::vector<Line> lines;
      for (std::size_t i = 0; i < Pmf3::kCells; ++i) {
        lines.push_back({"JOINT(" + std::to_string(Pmf3::value_at(i, Axis::X)) + "," +
                             std::to_string(Pmf3::value_at(i, Axis::Y)) + "," +
                             std::to_string(Pmf3::value_at(i, Axis::Z)) + ")",
                         num(world.joint.cell(i))});
      }
      for (Line& l : decomposition_lines(d, "UI_W", "UI_A")) lines.push_back(std::move(l));
      lines.push_back({"CMI_W", num(m.cmi_w)});
      lines.push_back({"MC_A_NORM", num(m.mc_a_norm)});
      lines.push_back({"MC_UI_W", num(m.ui_w)});
      emit(out, lines, false);
      return kOk;
    }

    if (sweep_cmd->parsed()) {
      if (!quantities.empty()) spec.quantities = parse_quantities(quantities);
      SweepOptions options;
      options.jobs = jobs > 0 ? jobs : default_jobs();
      const SweepGrid grid = run_sweep(spec, sweep_plan.plan(), options);
      export_grid(grid, out_dir);
      std::vector<Line> lines;
      for (Quantity q : spec.quantities) {
        const auto& v = grid.values(q);
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        lines.push_back({std::string(quantity_name(q)) + "_MIN", num(*lo)});
        lines.push_back({std::string(quantity_name(q)) + "_MAX", num(*hi)});
      }
      lines.push_back({"RESIDUAL_MAX", num(grid.residual_max)});
      emit(out, lines, false);
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const MissingInput& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NormalizationError& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const FeasibilityError& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kInputError;
}

}  // namespace morphdecomp::cli
