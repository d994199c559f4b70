#pragma once

#include "translab/modulus.hpp"
#include "translab/oracle.hpp"
#include "translab/parabolic.hpp"
#include "translab/problem.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace translab {

/// What to do when A's modulus misses the normalizations omega(1) <= 1/2 and
/// omega(r)|log r| <= 1/2.
enum class ConformancePolicy { warn, reject, rescale };

struct GridConfig {
  int cells_per_side = 64;
};

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 0;
  /// auto, scalar or avx2.
  std::string isa = "auto";
};

struct TimeConfig {
  double t_start = -1.0;
  double t_end = 0.0;
  /// 0 selects h^2.
  double dt = 0.0;
  TimeScheme scheme = TimeScheme::backward_euler;
  int store_every = 1;
};

struct AnalysisConfig {
  /// gridK or an explicit list "x,y;x,y".
  std::string centers = "grid8";
  /// r0:k.
  std::string scales = "0.25:3";
  /// M; 0 selects 10 (norm_l2 + norm_lip_d).
  double threshold = 0.0;
  int min_cells_per_radius = 4;
  int subsamples = 8;
  int density_resolution = 0;
  /// Time of the cylinder vertex for parabolic analysis.
  double s = 0.0;
};

struct OutputConfig {
  std::string field = "out.fld";
  std::string log = "run.jsonl";
  std::string report = "report.csv";
  /// Optional extras, skipped when empty.
  std::string gradients;
  std::string matrix;
  /// Write every k-th stored level as its own field file (0 disables).
  int snapshot_every = 0;
  std::string snapshot_prefix = "snapshot";
};

struct NamedModulus {
  std::string name;
  Modulus modulus;
};

struct ModulusCheckConfig {
  std::vector<NamedModulus> moduli;
  double r_min = 1e-12;
  double psi_rho = 0.5;
  int psi_n = 2;
  double lemma_alpha = 3.0;
};

struct SweepConfig {
  std::vector<int> resolutions{32, 64, 128};
};

struct Config {
  std::string name;
  int n = 2;
  int m = 1;
  std::optional<TransmissionProblem> problem;
  /// Closed-form solution matching the boundary data, when declared.
  std::optional<oracle::FieldOracle> oracle;
  /// Initial data for parabolic runs.
  std::optional<oracle::FieldOracle> initial;
  int verify_samples = 4096;
  ConformancePolicy conformance = ConformancePolicy::warn;

  GridConfig grid;
  SolverConfig solver;
  TimeConfig time;
  AnalysisConfig analysis;
  OutputConfig output;
  ModulusCheckConfig modulus_check;
  SweepConfig sweep;

  /// Conformance and similar notices raised while building the problem.
  std::vector<std::string> warnings;
  /// The configuration with every default filled in, as YAML.
  std::string effective;
};

/// Parses a YAML configuration. Malformed input throws ConfigError carrying
/// the 1-based line of the offending node; a rejected modulus (policy reject)
/// throws ParameterError.
Config parse_config(std::string_view text);
Config load_config(const std::string& path);

/// Two-column CSV of (r, omega) pairs, '#' comments allowed.
Modulus load_tabulated_modulus(const std::string& path);

} // namespace translab
