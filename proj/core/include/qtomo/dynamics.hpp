#pragma once

// Exact unitary evolution for the three model Hamiltonians. Every engine
// diagonalises time-independent blocks once and then evaluates
// exp(-i H t) spectrally, so results carry no integrator error.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtomo/fock.hpp"

namespace qtomo {

// ---------------------------------------------------------------- Kerr ----

struct KerrParams {
  double lambda = 1.0;  ///< Kerr strength, H = lambda a^dag^2 a^2
  cplx alpha{0.0, 0.0}; ///< initial coherent amplitude

  double revival_time() const;  ///< pi / lambda
  void validate() const;
};

/// Coherent state evolved under the Kerr Hamiltonian: amplitude k picks up
/// exp(-i lambda k (k-1) t). n_max defaults to the tail rule for |alpha|^2.
StateVector kerr_evolve(const KerrParams& params, double t,
                        std::optional<std::size_t> n_max = std::nullopt);

/// First `count` instants j * T_rev / p, j = 1..count.
std::vector<double> revival_times(const KerrParams& params, std::size_t p, std::size_t count);

// ----------------------------------------------------- field + oscillator --

/// Field mode coupled to a multilevel atom modelled as an anharmonic
/// oscillator. Subsystem order: {field, atom}.
struct APParams {
  double omega_field = 1.0;
  double omega_atom = 1.0;
  double gamma_nl = 0.01;
  double g_coupling = 1.0;
  std::size_t n_max = 1;        ///< field truncation
  std::size_t atom_levels = 1;  ///< atomic truncation

  Dims dims() const { return {n_max, atom_levels}; }
  void validate() const;
};

/// Eigensystem of the block with fixed total excitation N. Basis index i
/// corresponds to atomic level m = first_atom_level + i, field n = N - m.
struct APBlock {
  std::size_t total_quanta = 0;
  std::size_t first_atom_level = 0;
  Eigen::MatrixXd hamiltonian;
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;  ///< columns are eigenvectors
};

/// Diagonalises the N block, restricted to levels inside the truncation.
APBlock ap_diagonalize(const APParams& params, std::size_t total_quanta);

/// Dense full-space Hamiltonian in the {field, atom} product basis.
Operator ap_hamiltonian(const APParams& params);

// ------------------------------------------------------------- Lambda -----

/// Three-level Lambda atom driven by two Kerr fields. Subsystem order:
/// {field1, field2, atom} with atom levels e1 -> 0, e2 -> 1, e3 -> 2.
struct LambdaParams {
  std::array<double, 3> omega_atomic{1.0, 1.0, 2.0};
  std::array<double, 2> omega_fields{1.0, 1.0};
  double chi_nl = 5.0;
  double kappa = 1.0;

  /// Delta_i = omega_3 - omega_i - Omega_i, i in {0, 1}.
  double detuning(std::size_t field) const;
  void validate() const;

  bool operator==(const LambdaParams&) const = default;
};

inline constexpr std::size_t kAtomE1 = 0;
inline constexpr std::size_t kAtomE2 = 1;
inline constexpr std::size_t kAtomE3 = 2;

/// Dense interaction-frame Hamiltonian
///   Delta_1 s33 + (Delta_1 - Delta_2) s22 + chi sum n_i (n_i - 1)
///   + kappa sum (a_i s_3i + h.c.)
/// on the {field1, field2, atom} product basis.
Operator lambda_hamiltonian(const LambdaParams& params, std::size_t n_max1, std::size_t n_max2);

// -------------------------------------------------------------- results ---

enum class ModelKind { kerr, ap, lambda };

std::string to_string(ModelKind kind);

struct EvolutionResult {
  ModelKind model = ModelKind::kerr;
  std::vector<double> times;       ///< scaled times (lambda t, g t or kappa t)
  std::vector<StateVector> states;
  std::vector<std::string> labels; ///< one label per subsystem
  Dims dims;
};

/// Spectral propagator for the field + oscillator model. Construction
/// diagonalises every block touched by the initial state.
class APEngine {
 public:
  /// Throws TruncationError when the initial state has weight on a total
  /// excitation N that the truncation cannot hold, i.e. N + 1 > n_max or
  /// N + 1 > atom_levels.
  APEngine(const APParams& params, const StateVector& initial);

  /// State at scaled time g t.
  StateVector state_at(double gt) const;
  const APParams& params() const noexcept { return params_; }
  const StateVector& initial() const noexcept { return initial_; }

 private:
  struct Block {
    APBlock eig;
    Eigen::VectorXcd coefficients;  ///< initial state in the eigenbasis
    std::vector<std::size_t> flat_index;
  };
  APParams params_;
  StateVector initial_;
  std::vector<Block> blocks_;
};

EvolutionResult ap_evolve(const APParams& params, const StateVector& initial,
                          std::span<const double> gt_grid);

/// Truncation for the field + oscillator model: both subsystems get
/// (largest populated N) + 1 levels.
APParams ap_params_for(APParams params, const StateVector& field_initial);

class LambdaEngine {
 public:
  /// Truncations default to the tail rule for each field; field 2 gets one
  /// extra level because the e3 -> e2 transition emits into it.
  LambdaEngine(const LambdaParams& params, cplx alpha1, cplx alpha2,
               std::optional<std::size_t> n_max1 = std::nullopt,
               std::optional<std::size_t> n_max2 = std::nullopt,
               double tail = kDefaultTailTolerance);

  /// Tripartite state at scaled time kappa t (requires kappa > 0).
  StateVector state_at(double tau) const;
  /// Same, at unscaled time t.
  StateVector state_at_time(double t) const;
  StateVector initial() const { return state_at_time(0.0); }
  Dims dims() const { return {n1_, n2_, 3}; }
  const LambdaParams& params() const noexcept { return params_; }

 private:
  struct Block {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
    Eigen::VectorXcd coefficients;
    std::vector<std::size_t> flat_index;
  };
  LambdaParams params_;
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  std::vector<Block> blocks_;
};

EvolutionResult lambda_evolve(const LambdaParams& params, cplx alpha1, cplx alpha2,
                              std::span<const double> tau_grid,
                              std::optional<std::size_t> n_max1 = std::nullopt,
                              std::optional<std::size_t> n_max2 = std::nullopt);

/// Reduced state of the kept subsystems at every time in the result.
std::vector<DensityMatrix> reduced_field_state(const EvolutionResult& result,
                                               std::span<const std::size_t> keep);

}  // namespace qtomo
