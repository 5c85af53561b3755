#pragma once

// Optical tomograms and Wigner functions from Fock-basis states.
//
// Quadrature eigenstates are taken as <X, theta | n> = exp(-i n theta) psi_n(X)
// so that X_theta = (a^dag e^{i theta} + a e^{-i theta}) / sqrt 2 and a
// coherent state |alpha> has its ridge at X = sqrt 2 Re(alpha e^{-i theta}).
// theta = 0 is the x quadrature and theta = pi/2 the p quadrature.

#include <cstddef>
#include <span>
#include <vector>

#include "qtomo/fock.hpp"

namespace qtomo {

/// Symmetric uniform grid [-x_max, x_max] with an odd number of points.
class QuadratureGrid {
 public:
  QuadratureGrid(double x_max, std::size_t n_points);

  /// x_max = sqrt 2 * amplitude + 6, with enough points that the spacing is
  /// at most max_spacing.
  static QuadratureGrid for_amplitude(double amplitude, double max_spacing = 0.05);

  double x_min() const noexcept { return -x_max_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return 2.0 * x_max_ / static_cast<double>(n_ - 1); }
  double operator[](std::size_t i) const noexcept {
    return -x_max_ + static_cast<double>(i) * spacing();
  }
  std::vector<double> points() const;

  bool operator==(const QuadratureGrid&) const = default;

 private:
  double x_max_;
  std::size_t n_;
};

/// Composite trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> values, double spacing);

inline constexpr std::size_t kMaxOscillatorLevel = 2000;

/// psi_n(x) = H_n(x) e^{-x^2/2} / (pi^{1/4} 2^{n/2} sqrt(n!)) via the
/// normalised three-term recursion. Requires n < kMaxOscillatorLevel.
std::vector<double> oscillator_eigenfunction(std::size_t n, std::span<const double> x);

/// Rows 0..levels-1 hold psi_n on the given points.
Eigen::MatrixXd oscillator_table(std::size_t levels, std::span<const double> x);

/// theta_j = j pi / count, j = 0..count-1.
std::vector<double> equispaced_angles(std::size_t count);

/// w(X, theta) with theta as the slow (row) axis.
struct Tomogram {
  std::vector<double> thetas;
  QuadratureGrid grid;
  Eigen::MatrixXd values;  ///< thetas.size() x grid.size()

  std::vector<double> slice(std::size_t theta_index) const;
  /// Integral over X at one angle.
  double integral(std::size_t theta_index) const;
};

Tomogram tomogram_single(const DensityMatrix& rho, std::span<const double> thetas,
                         const QuadratureGrid& grid);
/// Amplitude expansion for a pure single-mode state.
Tomogram tomogram_single(const StateVector& psi, std::span<const double> thetas,
                         const QuadratureGrid& grid);

struct Tomogram2D {
  double theta_a = 0.0;
  double theta_b = 0.0;
  QuadratureGrid grid_a;
  QuadratureGrid grid_b;
  Eigen::MatrixXd values;  ///< grid_a.size() x grid_b.size()

  double integral() const;
};

/// Two-mode tomograms with the per-mode oscillator tables computed once and
/// reused for every angle pair.
class TwoModeTomographer {
 public:
  TwoModeTomographer(std::size_t dim_a, std::size_t dim_b, QuadratureGrid grid_a,
                     QuadratureGrid grid_b);

  /// rho over exactly two subsystems with dims {dim_a, dim_b}.
  Tomogram2D operator()(const DensityMatrix& rho, double theta_a, double theta_b) const;

  /// Two modes of a pure multi-partite state; every other subsystem is
  /// traced out implicitly.
  Tomogram2D operator()(const StateVector& psi, std::size_t mode_a, std::size_t mode_b,
                        double theta_a, double theta_b) const;

  const QuadratureGrid& grid_a() const noexcept { return grid_a_; }
  const QuadratureGrid& grid_b() const noexcept { return grid_b_; }

 private:
  // Accumulates weight * |A^T V B|^2 into out, A and B being the phased tables.
  void accumulate(const CMatrix& v, double weight, const CVector& phase_a, const CVector& phase_b,
                  Eigen::MatrixXd& out) const;

  std::size_t dim_a_;
  std::size_t dim_b_;
  QuadratureGrid grid_a_;
  QuadratureGrid grid_b_;
  Eigen::MatrixXd table_a_t_;  ///< grid_a x dim_a
  Eigen::MatrixXd table_b_;    ///< dim_b x grid_b
};

Tomogram2D tomogram_two_mode(const DensityMatrix& rho, double theta_a, double theta_b,
                             const QuadratureGrid& grid_a, const QuadratureGrid& grid_b);

enum class Mode { A, B };

/// Integrates out the other mode's quadrature with the trapezoid rule.
std::vector<double> reduce_tomogram(const Tomogram2D& t2, Mode keep);

/// W(beta1, beta2) normalised so that the integral over the beta plane is 1,
/// with beta1 = x / sqrt 2 and beta2 = p / sqrt 2.
struct WignerGrid {
  std::vector<double> beta1;
  std::vector<double> beta2;
  Eigen::MatrixXd values;  ///< beta1.size() x beta2.size()
};

WignerGrid wigner(const DensityMatrix& rho, std::span<const double> beta1,
                  std::span<const double> beta2);

}  // namespace qtomo
