#pragma once

// (phi, psi) parameter sweeps of the sensorimotor model at fixed
// (omega, mu, tau, zeta), and their export as CSV heatmap data.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morphdecomp/decomposition.hpp"
#include "morphdecomp/errors.hpp"
#include "morphdecomp/sensorimotor.hpp"

namespace morphdecomp {

enum class Quantity { SI, UI_W, UI_A, CI, CMI_W, CMI_A_NORM, MI_TOTAL, DIFF };

inline constexpr std::array<Quantity, 8> kAllQuantities{Quantity::SI,    Quantity::UI_W,       Quantity::UI_A,
                                                        Quantity::CI,    Quantity::CMI_W,      Quantity::CMI_A_NORM,
                                                        Quantity::MI_TOTAL, Quantity::DIFF};

std::string_view quantity_name(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view name);

struct SweepSpec {
  double phi_min = 0.0;
  double phi_max = 3.0;
  double psi_min = 0.0;
  double psi_max = 3.0;
  int steps_per_axis = 31;
  double omega = 0.0;
  double mu = 0.0;
  double tau = 0.0;
  double zeta = kDeterministicZeta;
  std::vector<Quantity> quantities{kAllQuantities.begin(), kAllQuantities.end()};

  void validate() const;
  double phi_at(int i) const;
  double psi_at(int j) const;
  ModelParams params_at(int i, int j) const;

  // Synergy-free and synergistic reference lattices (omega = 0 and 2).
  static SweepSpec figure2();
  static SweepSpec figure3();
};

struct SweepOptions {
  int jobs = 1;
  // A cell whose decomposition residuals exceed this aborts the sweep.
  double consistency_tolerance = kConsistencyTolerance;
};

// Values are steps x steps, row-major with phi as the outer index.
class SweepGrid {
 public:
  SweepGrid(SweepSpec spec, OptimizationPlan plan);

  const SweepSpec& spec() const noexcept { return spec_; }
  const OptimizationPlan& plan() const noexcept { return plan_; }
  int steps() const noexcept { return spec_.steps_per_axis; }

  bool has(Quantity q) const { return values_.count(q) != 0; }
  // Throws ArgumentError when q was not requested.
  const std::vector<double>& values(Quantity q) const;
  double at(Quantity q, int i_phi, int j_psi) const;

  double residual_max = 0.0;

 private:
  friend SweepGrid run_sweep(const SweepSpec&, const OptimizationPlan&, const SweepOptions&);

  SweepSpec spec_;
  OptimizationPlan plan_;
  std::map<Quantity, std::vector<double>> values_;
};

// Aborts with the offending (phi, psi).
class SweepError : public Error {
 public:
  SweepError(double phi, double psi, const std::string& what);
  double phi() const noexcept { return phi_; }
  double psi() const noexcept { return psi_; }

 private:
  double phi_;
  double psi_;
};

// Cells are independent; the result does not depend on options.jobs.
SweepGrid run_sweep(const SweepSpec& spec, const OptimizationPlan& plan = {}, const SweepOptions& options = {});

struct ExportedFiles {
  std::vector<std::filesystem::path> csv;
  std::filesystem::path manifest;
  std::filesystem::path plot_script;
};

inline constexpr const char* kManifestName = "manifest.txt";
inline constexpr const char* kPlotScriptName = "plot_heatmaps.gp";

// Writes <dir>/<QUANTITY>.csv (header `phi,psi,value`, 12 significant
// digits), manifest.txt (key=value) and a gnuplot script. Creates dir if
// needed; throws IoError when it cannot be written.
ExportedFiles export_grid(const SweepGrid& grid, const std::filesystem::path& dir);

struct CsvGrid {
  std::vector<double> phi;
  std::vector<double> psi;
  std::vector<double> value;
};

// Reads a CSV written by export_grid.
CsvGrid read_grid_csv(const std::filesystem::path& path);

// 12-significant-digit rendering used by the CSV writer.
std::string format_value(double v);

}  // namespace morphdecomp
