#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qtomo/dynamics.hpp"
#include "qtomo/tomography.hpp"

using namespace qtomo;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

double gaussian(double x, double centre) { return std::exp(-(x - centre) * (x - centre)) / kSqrtPi; }

StateVector random_state(const Dims& dims, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  CVector v(static_cast<Eigen::Index>(total_dim(dims)));
  for (auto& c : v) c = {n(rng), n(rng)};
  return StateVector::normalized(v, dims);
}

// Entangled field-atom state from the AP model.
StateVector ap_state(double gt) {
  APParams p;
  p.n_max = p.atom_levels = 11;
  return APEngine(p, tensor({fock_state(10, 11), fock_state(0, 11)})).state_at(gt);
}

}  // namespace

TEST(QuadratureGrid, Shape) {
  const auto g = QuadratureGrid::for_amplitude(7.0);
  EXPECT_NEAR(g.x_max(), 7.0 * std::numbers::sqrt2 + 6.0, 1e-12);
  EXPECT_EQ(g.size() % 2, 1u);
  EXPECT_LE(g.spacing(), 0.05);
  const auto x = g.points();
  EXPECT_EQ(x[g.size() / 2], 0.0);
  EXPECT_EQ(x.front(), -x.back());
  EXPECT_THROW(QuadratureGrid(5.0, 10), DomainError);
  EXPECT_THROW(QuadratureGrid(-1.0, 11), DomainError);
}

TEST(Oscillator, GroundState) {
  const auto g = QuadratureGrid(6.0, 121);
  const auto x = g.points();
  const auto psi = oscillator_eigenfunction(0, x);
  for (std::size_t i = 0; i < x.size(); ++i)
    EXPECT_NEAR(psi[i], std::pow(kPi, -0.25) * std::exp(-x[i] * x[i] / 2.0), 1e-15);
}

TEST(Oscillator, NormalisedAndOrthogonal) {
  const auto g = QuadratureGrid::for_amplitude(11.0);
  const auto x = g.points();
  const auto table = oscillator_table(121, x);
  for (int n : {0, 10, 120}) {
    const Eigen::VectorXd sq = table.row(n).array().square();
    EXPECT_NEAR(trapezoid(std::span<const double>(sq.data(), sq.size()), g.spacing()), 1.0, 1e-8) << n;
  }
  for (auto [m, n] : {std::pair{0, 1}, {3, 7}, {10, 120}, {60, 61}}) {
    const Eigen::VectorXd pr = table.row(m).array() * table.row(n).array();
    EXPECT_NEAR(trapezoid(std::span<const double>(pr.data(), pr.size()), g.spacing()), 0.0, 1e-8);
  }
  EXPECT_THROW(oscillator_eigenfunction(kMaxOscillatorLevel, x), DomainError);
}

TEST(Oscillator, TableMatchesSingleLevels) {
  const auto x = QuadratureGrid(8.0, 161).points();
  const auto table = oscillator_table(30, x);
  for (std::size_t n : {0u, 5u, 29u}) {
    const auto row = oscillator_eigenfunction(n, x);
    for (std::size_t i = 0; i < x.size(); ++i)
      EXPECT_DOUBLE_EQ(table(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i)), row[i]);
  }
}

TEST(TomogramSingle, VacuumIsThetaIndependentGaussian) {
  const auto g = QuadratureGrid::for_amplitude(0.0);
  const auto thetas = equispaced_angles(8);
  const auto t = tomogram_single(DensityMatrix::from_pure(fock_state(0, 4)), thetas, g);
  const auto x = g.points();
  for (std::size_t k = 0; k < thetas.size(); ++k)
    for (std::size_t i = 0; i < x.size(); ++i)
      EXPECT_NEAR(t.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)), gaussian(x[i], 0.0), 1e-14);
}

TEST(TomogramSingle, FockStateIsSquaredEigenfunction) {
  const auto g = QuadratureGrid::for_amplitude(3.0);
  const auto x = g.points();
  const auto psi5 = oscillator_eigenfunction(5, x);
  const auto t = tomogram_single(DensityMatrix::from_pure(fock_state(5, 9)), equispaced_angles(5), g);
  for (Eigen::Index k = 0; k < 5; ++k)
    for (std::size_t i = 0; i < x.size(); ++i)
      EXPECT_NEAR(t.values(k, static_cast<Eigen::Index>(i)), psi5[i] * psi5[i], 1e-13);
}

TEST(TomogramSingle, CoherentStateRidge) {
  const cplx alpha = std::polar(3.0, 0.4);
  const auto g = QuadratureGrid::for_amplitude(3.0);
  const auto x = g.points();
  const auto psi = coherent_state(alpha, 60);
  const auto thetas = equispaced_angles(12);
  const auto t_pure = tomogram_single(psi, thetas, g);
  const auto t_mixed = tomogram_single(DensityMatrix::from_pure(psi), thetas, g);
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const double centre = std::numbers::sqrt2 * (alpha * std::polar(1.0, -thetas[k])).real();
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::Index arg = 0;
    t_pure.values.row(kk).maxCoeff(&arg);
    EXPECT_NEAR(x[static_cast<std::size_t>(arg)], centre, g.spacing());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      EXPECT_NEAR(t_pure.values(kk, ii), gaussian(x[i], centre), 1e-8);
      EXPECT_NEAR(t_mixed.values(kk, ii), t_pure.values(kk, ii), 1e-12);
    }
    EXPECT_NEAR(t_pure.integral(k), 1.0, 1e-10);
  }
}

TEST(TomogramSingle, QuarterTurnSwapsQuadratures) {
  // theta = pi/2 measures p, so |i a> at pi/2 looks like |a> at 0.
  const auto g = QuadratureGrid::for_amplitude(2.0);
  const double th0[] = {0.0};
  const double th1[] = {kPi / 2};
  const auto a = tomogram_single(coherent_state(2.0, 40), th0, g);
  const auto b = tomogram_single(coherent_state(cplx(0, 2.0), 40), th1, g);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TomogramTwoMode, ProductStateFactorises) {
  const auto a = random_state({5}, 1);
  const auto b = random_state({6}, 2);
  const auto g = QuadratureGrid(7.0, 141);
  const auto rho = DensityMatrix::from_pure(tensor({a, b}));
  const double ta = 0.3, tb = 1.9;
  const auto t2 = tomogram_two_mode(rho, ta, tb, g, g);
  const double tha[] = {ta};
  const double thb[] = {tb};
  const auto wa = tomogram_single(a, tha, g).slice(0);
  const auto wb = tomogram_single(b, thb, g).slice(0);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      EXPECT_NEAR(t2.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), wa[i] * wb[j], 1e-10);
  const auto ra = reduce_tomogram(t2, Mode::A);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(ra[i], wa[i], 1e-8);
}

TEST(TomogramTwoMode, VacuumIsProductGaussian) {
  const auto g = QuadratureGrid(6.0, 121);
  const auto t2 = tomogram_two_mode(DensityMatrix::from_pure(tensor({fock_state(0, 3), fock_state(0, 3)})),
                                    0.7, 0.2, g, g);
  const auto x = g.points();
  for (std::size_t i = 0; i < x.size(); i += 7)
    for (std::size_t j = 0; j < x.size(); j += 5)
      EXPECT_NEAR(t2.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                  std::exp(-x[i] * x[i] - x[j] * x[j]) / kPi, 1e-14);
  EXPECT_NEAR(t2.integral(), 1.0, 1e-10);
}

TEST(TomogramTwoMode, MarginalMatchesPartialTrace) {
  const auto psi = ap_state(313.0);
  const auto rho = DensityMatrix::from_pure(psi);
  const auto g = QuadratureGrid::for_amplitude(std::sqrt(10.0));
  const TwoModeTomographer tomographer(11, 11, g, g);
  const double ta = 0.9;
  const double th[] = {ta};
  const auto w_field = tomogram_single(partial_trace(rho, {0}), th, g).slice(0);
  std::vector<double> first;
  for (double tb : {0.0, kPi / 2, 2.1}) {
    const auto t2 = tomographer(rho, ta, tb);
    const auto m = reduce_tomogram(t2, Mode::A);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(m[i], w_field[i], 1e-8);
    if (first.empty()) first = m;
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(m[i], first[i], 1e-8);
    EXPECT_NEAR(trapezoid(m, g.spacing()), 1.0, 1e-6);
  }
}

TEST(TomogramTwoMode, PureAndDensityPathsAgree) {
  const auto psi = random_state({4, 3, 5}, 9);
  const auto g = QuadratureGrid(6.0, 81);
  const TwoModeTomographer tomographer(4, 5, g, g);
  const std::size_t keep[] = {0, 2};
  const auto rho = partial_trace(psi, keep);
  const auto a = tomographer(psi, 0, 2, 0.4, 2.2);
  const auto b = tomographer(rho, 0.4, 2.2);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(tomographer(psi, 0, 1, 0.0, 0.0), DimensionError);
}

TEST(Wigner, VacuumAndFockOne) {
  const double origin[] = {0.0};
  const auto w0 = wigner(DensityMatrix::from_pure(fock_state(0, 3)), origin, origin);
  EXPECT_NEAR(w0.values(0, 0), 2.0 / kPi, 1e-14);
  const auto w1 = wigner(DensityMatrix::from_pure(fock_state(1, 3)), origin, origin);
  EXPECT_NEAR(w1.values(0, 0), -2.0 / kPi, 1e-14);

  const auto axis = QuadratureGrid(5.0, 201).points();
  const auto wv = wigner(DensityMatrix::from_pure(fock_state(0, 2)), axis, axis);
  EXPECT_GT(wv.values.minCoeff(), 0.0);
  for (std::size_t i = 0; i < axis.size(); i += 10)
    for (std::size_t j = 0; j < axis.size(); j += 10)
      EXPECT_NEAR(wv.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                  2.0 / kPi * std::exp(-2.0 * (axis[i] * axis[i] + axis[j] * axis[j])), 1e-14);
}

TEST(Wigner, CoherentStateIsDisplacedVacuum) {
  const cplx alpha(1.5, -0.8);
  const auto axis = QuadratureGrid(5.0, 201).points();
  const auto w = wigner(DensityMatrix::from_pure(coherent_state(alpha, 40)), axis, axis);
  for (std::size_t i = 0; i < axis.size(); i += 4)
    for (std::size_t j = 0; j < axis.size(); j += 4) {
      const double d2 = std::norm(cplx(axis[i], axis[j]) - alpha);
      EXPECT_NEAR(w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                  2.0 / kPi * std::exp(-2.0 * d2), 1e-10);
    }
}

TEST(Wigner, MarginalGivesTomogram) {
  // w(X, 0) = (1/sqrt 2) * integral of W(X/sqrt 2, beta2) d beta2.
  const auto rho = partial_trace(ap_state(400.0), {0});
  const auto g = QuadratureGrid(8.0, 321);
  const auto x = g.points();
  std::vector<double> b1(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) b1[i] = x[i] / std::numbers::sqrt2;
  const auto b2 = QuadratureGrid(6.0, 601);
  const auto w = wigner(rho, b1, b2.points());
  const double th[] = {0.0};
  const auto tom = tomogram_single(rho, th, g).slice(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> row(b2.size());
    for (std::size_t j = 0; j < b2.size(); ++j) row[j] = w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    EXPECT_NEAR(trapezoid(row, b2.spacing()) / std::numbers::sqrt2, tom[i], 1e-4);
  }
}
