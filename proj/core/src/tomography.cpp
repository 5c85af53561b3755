#include "qtomo/tomography.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qtomo {

namespace {

constexpr double kRankCutoff = 1e-15;

CVector phases(std::size_t dim, double theta) {
  CVector p(static_cast<Eigen::Index>(dim));
  for (std::size_t m = 0; m < dim; ++m)
    p[static_cast<Eigen::Index>(m)] = std::polar(1.0, -static_cast<double>(m) * theta);
  return p;
}

}  // namespace

QuadratureGrid::QuadratureGrid(double x_max, std::size_t n_points) : x_max_(x_max), n_(n_points) {
  if (!(x_max > 0.0) || !std::isfinite(x_max))
    throw DomainError("QuadratureGrid: x_max must be positive and finite");
  if (n_points < 3 || n_points % 2 == 0)
    throw DomainError("QuadratureGrid: point count must be odd and >= 3 so X = 0 is on the grid");
}

QuadratureGrid QuadratureGrid::for_amplitude(double amplitude, double max_spacing) {
  if (!(max_spacing > 0.0)) throw DomainError("QuadratureGrid: spacing must be positive");
  const double x_max = std::sqrt(2.0) * std::abs(amplitude) + 6.0;
  auto intervals = static_cast<std::size_t>(std::ceil(2.0 * x_max / max_spacing));
  if (intervals % 2 == 1) ++intervals;
  return QuadratureGrid(x_max, intervals + 1);
}

std::vector<double> QuadratureGrid::points() const {
  std::vector<double> p(n_);
  for (std::size_t i = 0; i < n_; ++i) p[i] = (*this)[i];
  // Pin the centre exactly; the affine formula can leave 1 ulp there.
  p[n_ / 2] = 0.0;
  return p;
}

double trapezoid(std::span<const double> values, double spacing) {
  if (values.empty()) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * spacing;
}

std::vector<double> oscillator_eigenfunction(std::size_t n, std::span<const double> x) {
  if (n >= kMaxOscillatorLevel)
    throw DomainError("oscillator_eigenfunction: level " + std::to_string(n) +
                      " beyond the supported budget of " + std::to_string(kMaxOscillatorLevel));
  const Eigen::MatrixXd t = oscillator_table(n + 1, x);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = t(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i));
  return out;
}

Eigen::MatrixXd oscillator_table(std::size_t levels, std::span<const double> x) {
  if (levels > kMaxOscillatorLevel)
    throw DomainError("oscillator_table: too many levels requested");
  const auto nl = static_cast<Eigen::Index>(levels);
  const auto nx = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(nl, nx);
  if (levels == 0) return t;
  const double norm0 = std::pow(std::numbers::pi, -0.25);
  for (Eigen::Index i = 0; i < nx; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    // psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}
    double prev = 0.0;
    double cur = norm0 * std::exp(-0.5 * xi * xi);
    t(0, i) = cur;
    for (Eigen::Index n = 0; n + 1 < nl; ++n) {
      const double dn = static_cast<double>(n);
      const double next = std::sqrt(2.0 / (dn + 1.0)) * xi * cur - std::sqrt(dn / (dn + 1.0)) * prev;
      prev = cur;
      cur = next;
      t(n + 1, i) = cur;
    }
  }
  return t;
}

std::vector<double> equispaced_angles(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j)
    out[j] = static_cast<double>(j) * std::numbers::pi / static_cast<double>(count);
  return out;
}

std::vector<double> Tomogram::slice(std::size_t k) const {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
  return out;
}

double Tomogram::integral(std::size_t k) const { return trapezoid(slice(k), grid.spacing()); }

Tomogram tomogram_single(const DensityMatrix& rho, std::span<const double> thetas,
                         const QuadratureGrid& grid) {
  if (rho.subsystems() != 1)
    throw DimensionError("tomogram_single: density matrix must describe a single mode");
  const auto x = grid.points();
  const std::size_t d = rho.size();
  const Eigen::MatrixXd table = oscillator_table(d, x);
  Tomogram tom{{thetas.begin(), thetas.end()}, grid,
               Eigen::MatrixXd(static_cast<Eigen::Index>(thetas.size()), static_cast<Eigen::Index>(x.size()))};
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    // a_m(X) = e^{-i m theta} psi_m(X);  w = sum_mn rho_mn a_m conj(a_n)
    const CMatrix a = phases(d, thetas[k]).asDiagonal() * table.cast<cplx>();
    const CMatrix b = rho.elements() * a.conjugate();
    tom.values.row(static_cast<Eigen::Index>(k)) = a.cwiseProduct(b).colwise().sum().real();
  }
  return tom;
}

Tomogram tomogram_single(const StateVector& psi, std::span<const double> thetas,
                         const QuadratureGrid& grid) {
  if (psi.subsystems() != 1)
    throw DimensionError("tomogram_single: state must describe a single mode");
  const auto x = grid.points();
  const std::size_t d = psi.size();
  const Eigen::MatrixXd table = oscillator_table(d, x);
  Tomogram tom{{thetas.begin(), thetas.end()}, grid,
               Eigen::MatrixXd(static_cast<Eigen::Index>(thetas.size()), static_cast<Eigen::Index>(x.size()))};
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const CVector c = phases(d, thetas[k]).cwiseProduct(psi.amplitudes());
    const CVector amp = table.transpose().cast<cplx>() * c;
    tom.values.row(static_cast<Eigen::Index>(k)) = amp.cwiseAbs2().transpose();
  }
  return tom;
}

double Tomogram2D::integral() const {
  std::vector<double> inner(grid_a.size());
  std::vector<double> row(grid_b.size());
  for (std::size_t i = 0; i < grid_a.size(); ++i) {
    for (std::size_t j = 0; j < grid_b.size(); ++j)
      row[j] = values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    inner[i] = trapezoid(row, grid_b.spacing());
  }
  return trapezoid(inner, grid_a.spacing());
}

TwoModeTomographer::TwoModeTomographer(std::size_t dim_a, std::size_t dim_b, QuadratureGrid grid_a,
                                       QuadratureGrid grid_b)
    : dim_a_(dim_a),
      dim_b_(dim_b),
      grid_a_(grid_a),
      grid_b_(grid_b),
      table_a_t_(oscillator_table(dim_a, grid_a.points()).transpose()),
      table_b_(oscillator_table(dim_b, grid_b.points())) {}

void TwoModeTomographer::accumulate(const CMatrix& v, double weight, const CVector& phase_a,
                                    const CVector& phase_b, Eigen::MatrixXd& out) const {
  // Phi = (D_a T_a)^T V (D_b T_b) = T_a^T (D_a V D_b) T_b with real tables, so
  // both products run as real matrix multiplies on the real and imaginary parts.
  const CMatrix m = phase_a.asDiagonal() * v * phase_b.asDiagonal();
  const Eigen::MatrixXd re = table_a_t_ * (m.real() * table_b_);
  const Eigen::MatrixXd im = table_a_t_ * (m.imag() * table_b_);
  out += weight * (re.cwiseAbs2() + im.cwiseAbs2());
}

Tomogram2D TwoModeTomographer::operator()(const DensityMatrix& rho, double theta_a,
                                          double theta_b) const {
  if (rho.dims() != Dims{dim_a_, dim_b_})
    throw DimensionError("tomogram_two_mode: density matrix dims do not match the tomographer");
  // rho = sum_j lambda_j |v_j><v_j| turns the four-index contraction into a
  // sum of squared matrix products.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.elements());
  if (es.info() != Eigen::Success) throw Error("tomogram_two_mode: eigensolver failed");
  const CVector a = phases(dim_a_, theta_a);
  const CVector b = phases(dim_b_, theta_b);
  Tomogram2D t{theta_a, theta_b, grid_a_, grid_b_,
               Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid_a_.size()),
                                     static_cast<Eigen::Index>(grid_b_.size()))};
  const auto da = static_cast<Eigen::Index>(dim_a_);
  const auto db = static_cast<Eigen::Index>(dim_b_);
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    const double lam = es.eigenvalues()[j];
    if (std::abs(lam) < kRankCutoff) continue;
    // Row-major flat index m1 * db + m2 -> matrix (m1, m2).
    CMatrix v(da, db);
    for (Eigen::Index m1 = 0; m1 < da; ++m1)
      for (Eigen::Index m2 = 0; m2 < db; ++m2) v(m1, m2) = es.eigenvectors()(m1 * db + m2, j);
    accumulate(v, lam, a, b, t.values);
  }
  return t;
}

Tomogram2D TwoModeTomographer::operator()(const StateVector& psi, std::size_t mode_a,
                                          std::size_t mode_b, double theta_a,
                                          double theta_b) const {
  const Dims& dims = psi.dims();
  if (mode_a >= dims.size() || mode_b >= dims.size() || mode_a == mode_b)
    throw DimensionError("tomogram_two_mode: invalid mode indices");
  if (dims[mode_a] != dim_a_ || dims[mode_b] != dim_b_)
    throw DimensionError("tomogram_two_mode: mode dimensions do not match the tomographer");
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) strides[i - 1] = strides[i] * dims[i];
  // Offsets of every environment multi-index (all subsystems but the two modes).
  std::vector<std::size_t> env{0};
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (s == mode_a || s == mode_b) continue;
    std::vector<std::size_t> next;
    for (std::size_t base : env)
      for (std::size_t k = 0; k < dims[s]; ++k) next.push_back(base + k * strides[s]);
    env = std::move(next);
  }
  const CVector a = phases(dim_a_, theta_a);
  const CVector b = phases(dim_b_, theta_b);
  Tomogram2D t{theta_a, theta_b, grid_a_, grid_b_,
               Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid_a_.size()),
                                     static_cast<Eigen::Index>(grid_b_.size()))};
  CMatrix v(static_cast<Eigen::Index>(dim_a_), static_cast<Eigen::Index>(dim_b_));
  for (std::size_t e : env) {
    double weight = 0.0;
    for (std::size_t m1 = 0; m1 < dim_a_; ++m1)
      for (std::size_t m2 = 0; m2 < dim_b_; ++m2) {
        const cplx c = psi[e + m1 * strides[mode_a] + m2 * strides[mode_b]];
        v(static_cast<Eigen::Index>(m1), static_cast<Eigen::Index>(m2)) = c;
        weight += std::norm(c);
      }
    if (weight == 0.0) continue;
    accumulate(v, 1.0, a, b, t.values);
  }
  return t;
}

Tomogram2D tomogram_two_mode(const DensityMatrix& rho, double theta_a, double theta_b,
                             const QuadratureGrid& grid_a, const QuadratureGrid& grid_b) {
  if (rho.subsystems() != 2)
    throw DimensionError("tomogram_two_mode: density matrix must describe two modes");
  const TwoModeTomographer tomographer(rho.dims()[0], rho.dims()[1], grid_a, grid_b);
  return tomographer(rho, theta_a, theta_b);
}

std::vector<double> reduce_tomogram(const Tomogram2D& t2, Mode keep) {
  const bool keep_a = keep == Mode::A;
  const std::size_t n_keep = keep_a ? t2.grid_a.size() : t2.grid_b.size();
  const std::size_t n_other = keep_a ? t2.grid_b.size() : t2.grid_a.size();
  const double h = keep_a ? t2.grid_b.spacing() : t2.grid_a.spacing();
  std::vector<double> out(n_keep);
  std::vector<double> line(n_other);
  for (std::size_t i = 0; i < n_keep; ++i) {
    for (std::size_t j = 0; j < n_other; ++j)
      line[j] = keep_a ? t2.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
                       : t2.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    out[i] = trapezoid(line, h);
  }
  return out;
}

WignerGrid wigner(const DensityMatrix& rho, std::span<const double> beta1,
                  std::span<const double> beta2) {
  if (rho.subsystems() != 1) throw DimensionError("wigner: density matrix must describe a single mode");
  const auto d = static_cast<Eigen::Index>(rho.size());
  const CMatrix& r = rho.elements();
  WignerGrid out{{beta1.begin(), beta1.end()}, {beta2.begin(), beta2.end()},
                 Eigen::MatrixXd(static_cast<Eigen::Index>(beta1.size()),
                                 static_cast<Eigen::Index>(beta2.size()))};
  // W(beta) = sum_mn rho_mn W_mn(beta) with the displaced-parity matrix
  // elements W_mn generated column by column from W_00 = (2/pi) e^{-2|beta|^2}
  // via the associated-Laguerre recursions (no explicit factorials).
  std::vector<cplx> w(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < beta1.size(); ++i)
    for (std::size_t j = 0; j < beta2.size(); ++j) {
      const cplx z(beta1[i], beta2[j]);
      w[0] = (2.0 / std::numbers::pi) * std::exp(-2.0 * std::norm(z));
      double acc = r(0, 0).real() * w[0].real();
      for (Eigen::Index n = 1; n < d; ++n) {
        w[static_cast<std::size_t>(n)] = 2.0 * z * w[static_cast<std::size_t>(n - 1)] / std::sqrt(static_cast<double>(n));
        acc += 2.0 * (r(0, n) * w[static_cast<std::size_t>(n)]).real();
      }
      for (Eigen::Index m = 1; m < d; ++m) {
        const double sm = std::sqrt(static_cast<double>(m));
        cplx carry = w[static_cast<std::size_t>(m)];
        w[static_cast<std::size_t>(m)] = (2.0 * std::conj(z) * carry - sm * w[static_cast<std::size_t>(m - 1)]) / sm;
        acc += (r(m, m) * w[static_cast<std::size_t>(m)]).real();
        for (Eigen::Index n = m + 1; n < d; ++n) {
          const cplx next = (2.0 * z * w[static_cast<std::size_t>(n - 1)] - sm * carry) /
                            std::sqrt(static_cast<double>(n));
          carry = w[static_cast<std::size_t>(n)];
          w[static_cast<std::size_t>(n)] = next;
          acc += 2.0 * (r(m, n) * next).real();
        }
      }
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  return out;
}

}  // namespace qtomo
