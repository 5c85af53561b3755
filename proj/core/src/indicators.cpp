#include "qtomo/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qtomo {

namespace {

constexpr double kSliceNormTol = 1e-4;

// Left-multiplies every column of m by a local operator on one subsystem.
CMatrix apply_local_rows(const FockOperator& op, std::size_t subsystem, const CMatrix& m,
                         const Dims& dims) {
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    out.col(c) = apply_local(op, subsystem, m.col(c), dims);
  return out;
}

}  // namespace

AngleQuorum AngleQuorum::equispaced(std::size_t per_axis) {
  AngleQuorum q;
  const auto angles = equispaced_angles(per_axis);
  for (double a : angles)
    for (double b : angles) q.pairs.emplace_back(a, b);
  return q;
}

double ipr_single(std::span<const double> slice, const QuadratureGrid& grid) {
  if (slice.size() != grid.size()) throw DimensionError("ipr_single: slice and grid sizes differ");
  const double norm = trapezoid(slice, grid.spacing());
  if (std::abs(norm - 1.0) > kSliceNormTol)
    throw DomainError("ipr_single: tomogram slice integrates to " + std::to_string(norm));
  std::vector<double> sq(slice.size());
  for (std::size_t i = 0; i < slice.size(); ++i) sq[i] = slice[i] * slice[i];
  return trapezoid(sq, grid.spacing());
}

double ipr_two_mode(const Tomogram2D& t2) {
  const double norm = t2.integral();
  if (std::abs(norm - 1.0) > kSliceNormTol)
    throw DomainError("ipr_two_mode: tomogram integrates to " + std::to_string(norm));
  Tomogram2D sq = t2;
  sq.values = t2.values.cwiseAbs2();
  return sq.integral();
}

IprEvaluator::IprEvaluator(std::size_t dim_a, std::size_t dim_b, QuadratureGrid grid_a,
                           QuadratureGrid grid_b)
    : tomographer_(dim_a, dim_b, grid_a, grid_b) {}

std::vector<double> IprEvaluator::etas(const DensityMatrix& rho, std::span<const double> thetas,
                                       const QuadratureGrid& grid) const {
  const Tomogram t = tomogram_single(rho, thetas, grid);
  std::vector<double> out;
  for (std::size_t k = 0; k < thetas.size(); ++k) out.push_back(ipr_single(t.slice(k), grid));
  return out;
}

double IprEvaluator::average(const DensityMatrix& ra, const DensityMatrix& rb,
                             const AngleQuorum& quorum,
                             const std::function<Tomogram2D(double, double)>& two_mode) const {
  if (quorum.pairs.empty()) throw DomainError("xi_ipr: empty angle quorum");
  // Single-mode IPRs depend on one angle only; evaluate each distinct angle once.
  std::vector<double> ta, tb;
  for (const auto& [a, b] : quorum.pairs) {
    if (std::find(ta.begin(), ta.end(), a) == ta.end()) ta.push_back(a);
    if (std::find(tb.begin(), tb.end(), b) == tb.end()) tb.push_back(b);
  }
  const auto eta_a = etas(ra, ta, tomographer_.grid_a());
  const auto eta_b = etas(rb, tb, tomographer_.grid_b());
  double sum = 0.0;
  for (const auto& [a, b] : quorum.pairs) {
    const auto ia = static_cast<std::size_t>(std::find(ta.begin(), ta.end(), a) - ta.begin());
    const auto ib = static_cast<std::size_t>(std::find(tb.begin(), tb.end(), b) - tb.begin());
    sum += 1.0 - (eta_a[ia] + eta_b[ib] - ipr_two_mode(two_mode(a, b)));
  }
  return sum / static_cast<double>(quorum.pairs.size());
}

double IprEvaluator::eps(const DensityMatrix& rho_ab, double theta_a, double theta_b) const {
  return xi(rho_ab, AngleQuorum{{{theta_a, theta_b}}});
}

double IprEvaluator::xi(const DensityMatrix& rho_ab, const AngleQuorum& quorum) const {
  if (rho_ab.subsystems() != 2) throw DimensionError("xi_ipr: expected a two-mode state");
  return average(partial_trace(rho_ab, {0}), partial_trace(rho_ab, {1}), quorum,
                 [&](double a, double b) { return tomographer_(rho_ab, a, b); });
}

double IprEvaluator::eps(const StateVector& psi, std::size_t mode_a, std::size_t mode_b,
                         double theta_a, double theta_b) const {
  return xi(psi, mode_a, mode_b, AngleQuorum{{{theta_a, theta_b}}});
}

double IprEvaluator::xi(const StateVector& psi, std::size_t mode_a, std::size_t mode_b,
                        const AngleQuorum& quorum) const {
  const std::size_t ka[] = {mode_a};
  const std::size_t kb[] = {mode_b};
  return average(partial_trace(psi, ka), partial_trace(psi, kb), quorum,
                 [&](double a, double b) { return tomographer_(psi, mode_a, mode_b, a, b); });
}

double eps_ipr(const DensityMatrix& rho_ab, double theta_a, double theta_b,
               const QuadratureGrid& grid_a, const QuadratureGrid& grid_b) {
  if (rho_ab.subsystems() != 2) throw DimensionError("eps_ipr: expected a two-mode state");
  return IprEvaluator(rho_ab.dims()[0], rho_ab.dims()[1], grid_a, grid_b)
      .eps(rho_ab, theta_a, theta_b);
}

double xi_ipr(const DensityMatrix& rho_ab, const AngleQuorum& quorum,
              const QuadratureGrid& grid_a, const QuadratureGrid& grid_b) {
  if (rho_ab.subsystems() != 2) throw DimensionError("xi_ipr: expected a two-mode state");
  return IprEvaluator(rho_ab.dims()[0], rho_ab.dims()[1], grid_a, grid_b).xi(rho_ab, quorum);
}

double sle(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  return 1.0 - partial_trace(rho, keep).purity();
}

double sle(const StateVector& psi, std::span<const std::size_t> keep) {
  return 1.0 - partial_trace(psi, keep).purity();
}

double sle(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return sle(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

double sle(const StateVector& psi, std::initializer_list<std::size_t> keep) {
  return sle(psi, std::span<const std::size_t>(keep.begin(), keep.size()));
}

double fidelity(const StateVector& psi0, const StateVector& psit) {
  return std::norm(inner_product(psi0, psit));
}

// With d = (a1 - a2)/sqrt 2, q_- = (d + d^dag)/sqrt 2 and p_- = (d - d^dag)/(i sqrt 2),
// so Var q_- + Var p_- = <d d^dag + d^dag d> - 2 |<d>|^2 = 2 <d^dag d> + 1 - 2 |<d>|^2.
// The +1 is [d, d^dag] applied exactly; normal-ordered moments of truncated
// ladder matrices carry no truncation error.
double sync_indicator(const DensityMatrix& rho) {
  if (rho.subsystems() != 2) throw DimensionError("sync_indicator: expected a two-mode state");
  const Dims& dims = rho.dims();
  const auto a1 = FockOperator::annihilation(dims[0]);
  const auto a2 = FockOperator::annihilation(dims[1]);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const CMatrix d_rho = inv_sqrt2 * (apply_local_rows(a1, 0, rho.elements(), dims) -
                                     apply_local_rows(a2, 1, rho.elements(), dims));
  const cplx mean_d = d_rho.trace();
  const CMatrix rho_ddag = d_rho.adjoint();  // rho d^dag
  const CMatrix d_rho_ddag = inv_sqrt2 * (apply_local_rows(a1, 0, rho_ddag, dims) -
                                          apply_local_rows(a2, 1, rho_ddag, dims));
  const double n_d = d_rho_ddag.trace().real();
  const double var_sum = 2.0 * n_d + 1.0 - 2.0 * std::norm(mean_d);
  if (!(var_sum > 0.0)) throw DomainError("sync_indicator: non-positive variance sum");
  return 1.0 / var_sum;
}

double sync_indicator(const StateVector& psi, std::size_t mode_1, std::size_t mode_2) {
  const Dims& dims = psi.dims();
  if (mode_1 >= dims.size() || mode_2 >= dims.size() || mode_1 == mode_2)
    throw DimensionError("sync_indicator: invalid mode indices");
  const CVector d_psi =
      (apply_local(FockOperator::annihilation(dims[mode_1]), mode_1, psi.amplitudes(), dims) -
       apply_local(FockOperator::annihilation(dims[mode_2]), mode_2, psi.amplitudes(), dims)) /
      std::numbers::sqrt2;
  const cplx mean_d = psi.amplitudes().dot(d_psi);
  const double var_sum = 2.0 * d_psi.squaredNorm() + 1.0 - 2.0 * std::norm(mean_d);
  if (!(var_sum > 0.0)) throw DomainError("sync_indicator: non-positive variance sum");
  return 1.0 / var_sum;
}

std::vector<std::size_t> local_minima(std::span<const double> v) {
  std::vector<std::size_t> out;
  std::size_t i = 1;
  while (i + 1 < v.size()) {
    if (!(v[i] < v[i - 1])) {
      ++i;
      continue;
    }
    // Walk across a plateau of equal values starting at i.
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    if (j + 1 < v.size() && v[j + 1] > v[i]) out.push_back(i);
    i = j + 1;
  }
  return out;
}

}  // namespace qtomo
