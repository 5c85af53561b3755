#pragma once

// Truncated Fock-space states and operators.
//
// Multi-partite layouts are row-major over the subsystem list: the last
// subsystem varies fastest, so tensor({a, b}) has amplitude a[i] * b[j] at
// index i * dim(b) + j. Field modes always come first and the atomic
// subsystem (if any) last.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qtomo/error.hpp"

namespace qtomo {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;

inline constexpr double kDefaultTailTolerance = 1e-10;

std::size_t total_dim(const Dims& dims);

/// Pure state over a product of truncated subsystems.
class StateVector {
 public:
  /// Takes ownership of the amplitudes; throws unless the norm is 1 within
  /// 1e-10 and dims multiply to the amplitude count.
  StateVector(CVector amplitudes, Dims dims);

  /// Same as above but rescales to unit norm first (rejects a zero vector).
  static StateVector normalized(CVector amplitudes, Dims dims);

  const CVector& amplitudes() const noexcept { return amps_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  std::size_t subsystems() const noexcept { return dims_.size(); }

  cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }
  /// Amplitude at a multi-index (one entry per subsystem).
  cplx at(std::span<const std::size_t> index) const;

 private:
  CVector amps_;
  Dims dims_;
};

/// Density operator over a product of truncated subsystems.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), unit trace (1e-10) and dims.
  /// Positivity is not checked here because it needs an eigensolve; see
  /// min_eigenvalue().
  DensityMatrix(CMatrix elements, Dims dims);

  static DensityMatrix from_pure(const StateVector& psi);

  const CMatrix& elements() const noexcept { return rho_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
  std::size_t subsystems() const noexcept { return dims_.size(); }

  cplx trace() const { return rho_.trace(); }
  double purity() const;
  double min_eigenvalue() const;

 private:
  CMatrix rho_;
  Dims dims_;
};

/// Single-subsystem operator on a truncated basis.
struct FockOperator {
  CMatrix matrix;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix.rows()); }

  static FockOperator annihilation(std::size_t dim);
  static FockOperator creation(std::size_t dim);
  static FockOperator number(std::size_t dim);
  static FockOperator identity(std::size_t dim);
  /// |row><col| on a finite level system, e.g. the atomic sigma_jk.
  static FockOperator transition(std::size_t dim, std::size_t row, std::size_t col);

  FockOperator adjoint() const { return {matrix.adjoint()}; }
  FockOperator operator*(const FockOperator& rhs) const { return {matrix * rhs.matrix}; }
  FockOperator operator+(const FockOperator& rhs) const { return {matrix + rhs.matrix}; }
  FockOperator operator-(const FockOperator& rhs) const { return {matrix - rhs.matrix}; }
};

FockOperator operator*(cplx scale, const FockOperator& op);

/// Operator on the full product space, stored densely.
struct Operator {
  CMatrix matrix;
  Dims dims;

  Operator operator*(const Operator& rhs) const;
  Operator operator+(const Operator& rhs) const;
  Operator adjoint() const { return {matrix.adjoint(), dims}; }
};

/// Lifts a single-subsystem operator to the full space: I x ... x op x ... x I.
Operator embed(const FockOperator& op, std::size_t subsystem, const Dims& dims);

/// Smallest n such that the Poisson(mean) mass on {k >= n} is below tail.
std::size_t min_truncation(double mean_photons, double tail = kDefaultTailTolerance);

/// Poisson tail mass sum_{k >= n_max} e^{-mean} mean^k / k!.
double poisson_tail(double mean_photons, std::size_t n_max);

StateVector fock_state(std::size_t n, std::size_t n_max);

/// Coherent state truncated to n_max levels and renormalised. Throws
/// TruncationError (naming the required n_max) when the discarded Poisson
/// tail exceeds `tail`.
StateVector coherent_state(cplx alpha, std::size_t n_max,
                           double tail = kDefaultTailTolerance);

StateVector tensor(std::span<const StateVector> parts);
StateVector tensor(std::initializer_list<StateVector> parts);

/// Reduced density matrix over `keep` (sorted, nonempty, proper subset).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep);

/// Same reduction for a pure global state without forming |psi><psi|.
DensityMatrix partial_trace(const StateVector& psi, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const StateVector& psi, std::initializer_list<std::size_t> keep);

cplx expectation(const Operator& op, const DensityMatrix& rho);
cplx expectation(const FockOperator& op, const DensityMatrix& rho);
cplx expectation(const Operator& op, const StateVector& psi);

/// <psi| (I x op x I) |psi> without materialising the embedded operator.
cplx local_expectation(const FockOperator& op, std::size_t subsystem, const StateVector& psi);

/// Applies op to one subsystem of psi; the result is generally unnormalised.
CVector apply_local(const FockOperator& op, std::size_t subsystem, const CVector& amplitudes,
                    const Dims& dims);

cplx inner_product(const StateVector& lhs, const StateVector& rhs);

}  // namespace qtomo
