#include "morphdecomp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

namespace morphdecomp {

namespace {

constexpr std::array<std::string_view, 8> kQuantityNames{"SI",    "UI_W",       "UI_A",     "CI",
                                                         "CMI_W", "CMI_A_NORM", "MI_TOTAL", "DIFF"};

double lattice_point(double lo, double hi, int i, int steps) {
  if (i <= 0) return lo;
  if (i >= steps - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CellResult {
  std::array<double, 8> q{};  // indexed like kAllQuantities
  double residual = 0.0;
  std::exception_ptr error;
};

CellResult evaluate_cell(const SweepSpec& spec, const OptimizationPlan& plan, const SweepOptions& options, int i,
                         int j) {
  CellResult cell;
  try {
    const ModelEvaluation ev = evaluate_model(spec.params_at(i, j), plan);
    const DecompositionResult& d = ev.decomposition;
    cell.q = {d.si,
              d.ui_y,
              d.ui_z,
              d.ci,
              ev.measures.cmi_w,
              ev.measures.mc_a_norm,
              d.mi_total,
              ev.measures.cmi_w - ev.measures.ui_w};
    // I(W':W|A) = UI_W + CI is residual_cond.
    cell.residual = d.max_residual();
    if (cell.residual > options.consistency_tolerance) {
      std::ostringstream os;
      os << "decomposition residual " << cell.residual << " exceeds " << options.consistency_tolerance;
      throw DecompositionError(os.str());
    }
  } catch (const std::exception& e) {
    cell.error = std::make_exception_ptr(SweepError(spec.phi_at(i), spec.psi_at(j), e.what()));
  }
  return cell;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string plot_script(const SweepGrid& grid) {
  std::string names;
  for (Quantity q : grid.spec().quantities) {
    if (!names.empty()) names += ' ';
    names += quantity_name(q);
  }
  std::ostringstream os;
  os << "# Heatmaps of the sweep CSVs in this directory.\n"
        "# Usage: gnuplot plot_heatmaps.gp   (writes one PNG per quantity)\n"
        "set datafile separator ','\n"
        "set terminal pngcairo size 640,560\n"
        "set view map\n"
        "set xlabel 'psi'\n"
        "set ylabel 'phi'\n"
        "set cblabel 'bits'\n"
        "set palette rgbformulae 33,13,10\n"
        "set size ratio -1\n"
        "quantities = \""
     << names
     << "\"\n"
        "do for [q in quantities] {\n"
        "  set output q.'.png'\n"
        "  set title q\n"
        "  plot q.'.csv' skip 1 using 2:1:3 with image notitle\n"
        "}\n";
  return os.str();
}

}  // namespace

std::string_view quantity_name(Quantity q) { return kQuantityNames[static_cast<std::size_t>(q)]; }

std::optional<Quantity> parse_quantity(std::string_view name) {
  for (std::size_t k = 0; k < kQuantityNames.size(); ++k)
    if (kQuantityNames[k] == name) return kAllQuantities[k];
  return std::nullopt;
}

void SweepSpec::validate() const {
  if (steps_per_axis < 2) throw ArgumentError("sweep: steps per axis must be >= 2");
  if (!(phi_max >= phi_min) || !(psi_max >= psi_min)) throw ArgumentError("sweep: axis max must be >= min");
  if (quantities.empty()) throw ArgumentError("sweep: no quantities requested");
  for (std::size_t a = 0; a < quantities.size(); ++a)
    for (std::size_t b = a + 1; b < quantities.size(); ++b)
      if (quantities[a] == quantities[b]) throw ArgumentError("sweep: duplicate quantity");
  // Range checks for the model weights, including the lattice corners.
  params_at(0, 0).validate();
  params_at(steps_per_axis - 1, steps_per_axis - 1).validate();
}

double SweepSpec::phi_at(int i) const { return lattice_point(phi_min, phi_max, i, steps_per_axis); }
double SweepSpec::psi_at(int j) const { return lattice_point(psi_min, psi_max, j, steps_per_axis); }

ModelParams SweepSpec::params_at(int i, int j) const {
  ModelParams p;
  p.phi = phi_at(i);
  p.psi = psi_at(j);
  p.omega = omega;
  p.zeta = zeta;
  p.mu = mu;
  p.tau = tau;
  return p;
}

SweepSpec SweepSpec::figure2() { return SweepSpec{}; }

SweepSpec SweepSpec::figure3() {
  SweepSpec s;
  s.omega = 2.0;
  return s;
}

SweepGrid::SweepGrid(SweepSpec spec, OptimizationPlan plan) : spec_(std::move(spec)), plan_(plan) {}

const std::vector<double>& SweepGrid::values(Quantity q) const {
  const auto it = values_.find(q);
  if (it == values_.end())
    throw ArgumentError("sweep grid has no " + std::string(quantity_name(q)) + " values");
  return it->second;
}

double SweepGrid::at(Quantity q, int i_phi, int j_psi) const {
  if (i_phi < 0 || j_psi < 0 || i_phi >= steps() || j_psi >= steps())
    throw ArgumentError("sweep grid index out of range");
  return values(q)[static_cast<std::size_t>(i_phi) * static_cast<std::size_t>(steps()) +
                   static_cast<std::size_t>(j_psi)];
}

SweepError::SweepError(double phi, double psi, const std::string& what)
    : Error("sweep cell (phi=" + format_exact(phi) + ", psi=" + format_exact(psi) + "): " + what),
      phi_(phi),
      psi_(psi) {}

SweepGrid run_sweep(const SweepSpec& spec, const OptimizationPlan& plan, const SweepOptions& options) {
  spec.validate();
  plan.validate();
  if (options.jobs < 1) throw ArgumentError("sweep: jobs must be >= 1");

  const int steps = spec.steps_per_axis;
  const std::size_t n = static_cast<std::size_t>(steps) * static_cast<std::size_t>(steps);
  std::vector<CellResult> cells(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      cells[k] = evaluate_cell(spec, plan, options, static_cast<int>(k / steps), static_cast<int>(k % steps));
    }
  };
  const int jobs = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(options.jobs), n));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  // First failure in row-major order, independent of scheduling.
  for (const CellResult& c : cells)
    if (c.error) std::rethrow_exception(c.error);

  SweepGrid grid(spec, plan);
  for (Quantity q : spec.quantities) {
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = cells[k].q[static_cast<std::size_t>(q)];
    grid.values_.emplace(q, std::move(v));
  }
  for (const CellResult& c : cells) grid.residual_max = std::max(grid.residual_max, c.residual);
  return grid;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ExportedFiles export_grid(const SweepGrid& grid, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());

  ExportedFiles files;
  const SweepSpec& spec = grid.spec();
  for (Quantity q : spec.quantities) {
    const auto path = dir / (std::string(quantity_name(q)) + ".csv");
    std::ofstream out = open_output(path);
    out << "phi,psi,value\n";
    for (int i = 0; i < grid.steps(); ++i)
      for (int j = 0; j < grid.steps(); ++j)
        out << format_value(spec.phi_at(i)) << ',' << format_value(spec.psi_at(j)) << ','
            << format_value(grid.at(q, i, j)) << '\n';
    finish(out, path);
    files.csv.push_back(path);
  }

  files.manifest = dir / kManifestName;
  {
    std::ofstream out = open_output(files.manifest);
    std::string names;
    for (Quantity q : spec.quantities) {
      if (!names.empty()) names += ',';
      names += quantity_name(q);
    }
    const OptimizationPlan& plan = grid.plan();
    out << "format=morphdecomp-sweep-1\n"
        << "phi_min=" << format_exact(spec.phi_min) << '\n'
        << "phi_max=" << format_exact(spec.phi_max) << '\n'
        << "psi_min=" << format_exact(spec.psi_min) << '\n'
        << "psi_max=" << format_exact(spec.psi_max) << '\n'
        << "steps_per_axis=" << spec.steps_per_axis << '\n'
        << "omega=" << format_exact(spec.omega) << '\n'
        << "mu=" << format_exact(spec.mu) << '\n'
        << "tau=" << format_exact(spec.tau) << '\n'
        << "zeta=" << format_exact(spec.zeta) << '\n'
        << "quantities=" << names << '\n'
        << "plan.resolution=" << plan.resolution << '\n'
        << "plan.refine_rounds=" << plan.refine_rounds << '\n'
        << "plan.refine_points=" << plan.refine_points << '\n'
        << "plan.tolerance=" << format_exact(plan.tolerance) << '\n'
        << "residual_max=" << format_exact(grid.residual_max) << '\n';
    finish(out, files.manifest);
  }

  files.plot_script = dir / kPlotScriptName;
  {
    std::ofstream out = open_output(files.plot_script);
    out << plot_script(grid);
    finish(out, files.plot_script);
  }
  return files;
}

CsvGrid read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "phi,psi,value") throw ParseError(1, "expected header `phi,psi,value`");
  CsvGrid g;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::array<double, 3> v{};
    char c1 = 0, c2 = 0;
    row >> v[0] >> c1 >> v[1] >> c2 >> v[2];
    if (!row || c1 != ',' || c2 != ',') throw ParseError(lineno, "expected `phi,psi,value`");
    g.phi.push_back(v[0]);
    g.psi.push_back(v[1]);
    g.value.push_back(v[2]);
  }
  return g;
}

}  // namespace morphdecomp
