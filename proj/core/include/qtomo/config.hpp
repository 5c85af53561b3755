#pragma once

// Experiment configuration: a flat UTF-8 `key = value` document with `#`
// comments and dotted keys. Parsing collects every violation before failing.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtomo/dynamics.hpp"

namespace qtomo {

enum class Product { tomogram, tomogram2d, wigner, sle, xi_ipr, s_c, fidelity };

std::string to_string(Product p);

struct InitialMode {
  enum class Kind { coherent, fock };
  Kind kind = Kind::coherent;
  cplx alpha{0.0, 0.0};
  std::size_t n = 0;

  bool operator==(const InitialMode&) const = default;
};

struct TimeSpec {
  enum class Kind { list, range, revival };
  Kind kind = Kind::list;
  std::vector<double> list;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  std::size_t revival_p = 1;   ///< subpackets
  std::size_t revival_j = 1;   ///< multiple of T_rev / p
  std::vector<double> offsets{0.0};

  /// Scaled times in evaluation order.
  std::vector<double> resolve() const;

  bool operator==(const TimeSpec&) const = default;
};

struct GridSpec {
  std::optional<double> x_max;  ///< unset: sqrt 2 |alpha| + 6 rule
  double max_spacing = 0.05;
  std::size_t n_theta = 100;
  std::optional<double> beta_max;  ///< unset: x_max / sqrt 2
  std::size_t wigner_points = 201;

  bool operator==(const GridSpec&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ModelKind model = ModelKind::kerr;
  double kerr_lambda = 1.0;
  double ap_omega = 1.0;
  double ap_omega0 = 1.0;
  double ap_gamma = 0.01;
  double ap_g = 1.0;
  LambdaParams lambda;
  InitialMode field;         ///< kerr and ap
  std::size_t atom_level = 0;  ///< ap
  cplx alpha1{1.0, 0.0};     ///< lambda
  cplx alpha2{1.0, 0.0};     ///< lambda
  TimeSpec time;
  GridSpec grid;
  std::vector<Product> products;
  std::size_t tomogram_mode = 1;  ///< lambda: which field (1 or 2)
  double theta_a = 0.0;
  double theta_b = 0.0;
  std::size_t quorum_per_axis = 5;
  double tail = kDefaultTailTolerance;
  std::optional<std::string> output_dir;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates; throws ValidationError listing every problem.
ExperimentConfig parse_config(std::string_view text);

/// Canonical document for a config; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& config);

/// Decimal with 17 significant digits; parses back to the same double.
std::string format_double(double v);

/// Description of the scaled time axis for a model ("lambda*t", ...).
std::string time_convention(ModelKind model);

}  // namespace qtomo
