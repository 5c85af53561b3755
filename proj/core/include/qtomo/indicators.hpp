#pragma once

// Scalar diagnostics: inverse participation ratios of tomograms and the
// tomographic entanglement indicator built from them, subsystem linear
// entropy, fidelity, and the difference-quadrature synchronisation measure.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qtomo/fock.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

/// Angle pairs averaged over by xi_ipr.
struct AngleQuorum {
  std::vector<std::pair<double, double>> pairs;

  /// per_axis x per_axis pairs with angles j pi / per_axis.
  static AngleQuorum equispaced(std::size_t per_axis = 5);
};

struct IndicatorSeries {
  std::string name;  ///< sle | xi_ipr | s_c | fidelity
  std::vector<double> times;
  std::vector<double> values;
};

/// eta = integral of w^2 over one tomogram slice. Throws DomainError if the
/// slice integrates to something more than 1e-4 away from 1.
double ipr_single(std::span<const double> slice, const QuadratureGrid& grid);

/// eta_AB = double integral of w^2.
double ipr_two_mode(const Tomogram2D& t2);

/// Everything needed to evaluate IPR-based indicators repeatedly on the same
/// grids: the two-mode tables are built once.
class IprEvaluator {
 public:
  IprEvaluator(std::size_t dim_a, std::size_t dim_b, QuadratureGrid grid_a, QuadratureGrid grid_b);

  /// epsilon_IPR = 1 - [eta_A + eta_B - eta_AB] for a two-mode rho. The
  /// single-mode IPRs use the reduced density matrices directly.
  double eps(const DensityMatrix& rho_ab, double theta_a, double theta_b) const;
  double xi(const DensityMatrix& rho_ab, const AngleQuorum& quorum) const;

  /// Same indicators for two modes of a pure multi-partite state.
  double eps(const StateVector& psi, std::size_t mode_a, std::size_t mode_b, double theta_a,
             double theta_b) const;
  double xi(const StateVector& psi, std::size_t mode_a, std::size_t mode_b,
            const AngleQuorum& quorum) const;

 private:
  std::vector<double> etas(const DensityMatrix& rho, std::span<const double> thetas,
                           const QuadratureGrid& grid) const;
  double average(const DensityMatrix& ra, const DensityMatrix& rb, const AngleQuorum& quorum,
                 const std::function<Tomogram2D(double, double)>& two_mode) const;

  TwoModeTomographer tomographer_;
};

double eps_ipr(const DensityMatrix& rho_ab, double theta_a, double theta_b,
               const QuadratureGrid& grid_a, const QuadratureGrid& grid_b);
double xi_ipr(const DensityMatrix& rho_ab, const AngleQuorum& quorum,
              const QuadratureGrid& grid_a, const QuadratureGrid& grid_b);

/// 1 - Tr(rho_keep^2).
double sle(const DensityMatrix& rho, std::span<const std::size_t> keep);
double sle(const StateVector& psi, std::span<const std::size_t> keep);
double sle(const DensityMatrix& rho, std::initializer_list<std::size_t> keep);
double sle(const StateVector& psi, std::initializer_list<std::size_t> keep);

/// |<psi0|psit>|^2.
double fidelity(const StateVector& psi0, const StateVector& psit);

/// S_c = 1 / (Var q_- + Var p_-) for q_- = (q1 - q2)/sqrt 2, p_- likewise.
double sync_indicator(const DensityMatrix& rho_fields);
/// Same for two field modes of a pure multi-partite state.
double sync_indicator(const StateVector& psi, std::size_t mode_1, std::size_t mode_2);

/// Indices strictly smaller than both neighbours. Plateaus count once, at
/// their earliest index, when both bordering values are larger.
std::vector<std::size_t> local_minima(std::span<const double> values);

}  // namespace qtomo
