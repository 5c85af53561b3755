#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qtomo/dynamics.hpp"
#include "qtomo/indicators.hpp"

using namespace qtomo;

namespace {

constexpr double kPi = std::numbers::pi;
const double kEtaGauss = 1.0 / std::sqrt(2.0 * kPi);
const double kEpsProduct = (1.0 - kEtaGauss) * (1.0 - kEtaGauss);

StateVector random_state(const Dims& dims, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  CVector v(static_cast<Eigen::Index>(total_dim(dims)));
  for (auto& c : v) c = {n(rng), n(rng)};
  return StateVector::normalized(v, dims);
}

// Local unitary exp(-i H) with a random Hermitian H on one mode.
CMatrix random_unitary(std::size_t d, unsigned seed) {
  const auto h = random_state({d * d}, seed).amplitudes();
  CMatrix m = Eigen::Map<const CMatrix>(h.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m = m + m.adjoint().eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  CVector ph(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, -es.eigenvalues()[i]);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<double> gaussian_slice(const QuadratureGrid& g, double centre) {
  std::vector<double> w;
  for (double x : g.points()) w.push_back(std::exp(-(x - centre) * (x - centre)) / std::sqrt(kPi));
  return w;
}

}  // namespace

TEST(Ipr, GaussianSlice) {
  const auto g = QuadratureGrid::for_amplitude(3.0);
  EXPECT_NEAR(ipr_single(gaussian_slice(g, 0.0), g), kEtaGauss, 1e-6);
  EXPECT_NEAR(ipr_single(gaussian_slice(g, 2.7), g), kEtaGauss, 1e-6);
  EXPECT_NEAR(kEtaGauss, 0.398942, 1e-6);
}

TEST(Ipr, CoherentSlicesAtEveryAngle) {
  const auto g = QuadratureGrid::for_amplitude(3.0);
  const auto t = tomogram_single(coherent_state(std::polar(3.0, 1.1), 40), equispaced_angles(7), g);
  for (std::size_t k = 0; k < 7; ++k) EXPECT_NEAR(ipr_single(t.slice(k), g), kEtaGauss, 1e-6);
}

TEST(Ipr, FockStateIsMoreDelocalised) {
  const auto g = QuadratureGrid::for_amplitude(std::sqrt(10.0));
  const double th[] = {0.0};
  const double eta10 = ipr_single(tomogram_single(fock_state(10, 11), th, g).slice(0), g);
  const double eta0 = ipr_single(tomogram_single(fock_state(0, 11), th, g).slice(0), g);
  EXPECT_LT(eta10, eta0);
}

TEST(Ipr, RejectsUnnormalisedSlice) {
  const auto g = QuadratureGrid(5.0, 101);
  auto w = gaussian_slice(g, 0.0);
  for (double& v : w) v *= 1.01;
  EXPECT_THROW(ipr_single(w, g), DomainError);
}

TEST(Ipr, TwoModeVacuumAndProduct) {
  const auto g = QuadratureGrid(7.0, 281);
  const auto vac = DensityMatrix::from_pure(tensor({fock_state(0, 2), fock_state(0, 2)}));
  EXPECT_NEAR(ipr_two_mode(tomogram_two_mode(vac, 0.3, 0.8, g, g)), 1.0 / (2.0 * kPi), 1e-6);

  const auto a = random_state({4}, 3);
  const auto b = random_state({5}, 4);
  const auto t2 = tomogram_two_mode(DensityMatrix::from_pure(tensor({a, b})), 0.5, 1.4, g, g);
  const double ta[] = {0.5};
  const double tb[] = {1.4};
  const double eta_a = ipr_single(tomogram_single(a, ta, g).slice(0), g);
  const double eta_b = ipr_single(tomogram_single(b, tb, g).slice(0), g);
  const double eta_ab = ipr_two_mode(t2);
  EXPECT_NEAR(eta_ab, eta_a * eta_b, 1e-8);
  EXPECT_GT(eta_ab, 0.0);
  EXPECT_LE(eta_ab, t2.values.maxCoeff());
}

TEST(EpsIpr, CoherentProduct) {
  const cplx a1(1.0, 0.5), a2(-0.7, 1.2);
  const auto rho = DensityMatrix::from_pure(tensor({coherent_state(a1, 20), coherent_state(a2, 22)}));
  const auto g = QuadratureGrid::for_amplitude(2.0);
  for (auto [ta, tb] : {std::pair{0.0, 0.0}, {0.4, 2.0}, {kPi / 2, kPi / 5}})
    EXPECT_NEAR(eps_ipr(rho, ta, tb, g, g), kEpsProduct, 1e-6);
  EXPECT_NEAR(kEpsProduct, 0.36127, 1e-5);
  const auto vac = DensityMatrix::from_pure(tensor({fock_state(0, 3), fock_state(0, 3)}));
  EXPECT_NEAR(eps_ipr(vac, 1.0, 2.0, g, g), kEpsProduct, 1e-6);
  EXPECT_NEAR(xi_ipr(rho, AngleQuorum::equispaced(3), g, g), kEpsProduct, 1e-6);
}

TEST(EpsIpr, PureAndDensityPathsAgree) {
  const auto psi = random_state({4, 3, 5}, 21);
  const std::size_t keep[] = {0, 2};
  const auto rho = partial_trace(psi, keep);
  const auto g = QuadratureGrid(7.0, 141);
  const IprEvaluator ev(4, 5, g, g);
  EXPECT_NEAR(ev.eps(psi, 0, 2, 0.3, 1.0), ev.eps(rho, 0.3, 1.0), 1e-12);
  const auto q = AngleQuorum::equispaced(2);
  EXPECT_NEAR(ev.xi(psi, 0, 2, q), ev.xi(rho, q), 1e-12);
}

TEST(EpsIpr, OrderingFollowsSleOnApEvolution) {
  APParams p;
  p.n_max = p.atom_levels = 11;
  const APEngine engine(p, tensor({fock_state(10, 11), fock_state(0, 11)}));
  const auto g = QuadratureGrid::for_amplitude(std::sqrt(10.0));
  const IprEvaluator ev(11, 11, g, g);
  const auto dip = engine.state_at(626.0);
  const auto high = engine.state_at(300.0);
  const auto q = AngleQuorum::equispaced(3);
  ASSERT_LT(sle(dip, {0}), sle(high, {0}));
  EXPECT_LT(ev.xi(dip, 0, 1, q), ev.xi(high, 0, 1, q));
}

TEST(Quorum, Equispaced) {
  const auto q = AngleQuorum::equispaced(5);
  ASSERT_EQ(q.pairs.size(), 25u);
  EXPECT_EQ(q.pairs.front(), std::make_pair(0.0, 0.0));
  EXPECT_NEAR(q.pairs.back().first, 4.0 * kPi / 5.0, 1e-15);
  EXPECT_THROW(IprEvaluator(2, 2, QuadratureGrid(5, 11), QuadratureGrid(5, 11))
                   .xi(DensityMatrix::from_pure(tensor({fock_state(0, 2), fock_state(0, 2)})), AngleQuorum{}),
               DomainError);
}

TEST(Sle, ProductAndMaximallyMixed) {
  EXPECT_NEAR(sle(tensor({random_state({3}, 1), random_state({4}, 2)}), {0}), 0.0, 1e-10);
  CVector v = CVector::Zero(4);
  v[1] = v[2] = 1.0 / std::numbers::sqrt2;
  const StateVector bell(v, {2, 2});
  EXPECT_NEAR(sle(bell, {1}), 0.5, 1e-12);
  EXPECT_NEAR(sle(DensityMatrix::from_pure(bell), {0}), 0.5, 1e-12);
}

TEST(Sle, InvariantUnderLocalUnitaries) {
  const auto psi = random_state({4, 5}, 17);
  const CMatrix u = random_unitary(4, 5);
  CVector moved = psi.amplitudes();
  moved = apply_local(FockOperator{u}, 0, moved, psi.dims());
  moved = apply_local(FockOperator{random_unitary(5, 6)}, 1, moved, psi.dims());
  EXPECT_NEAR(sle(StateVector(moved, psi.dims()), {0}), sle(psi, {0}), 1e-12);
}

TEST(Sle, ApDipNear626) {
  APParams p;
  p.n_max = p.atom_levels = 11;
  const APEngine engine(p, tensor({fock_state(10, 11), fock_state(0, 11)}));
  std::vector<double> s;
  for (int gt = 615; gt <= 637; ++gt) s.push_back(sle(engine.state_at(gt), {0}));
  bool found = false;
  for (auto i : local_minima(s)) found |= (i + 615 >= 620 && i + 615 <= 632);
  EXPECT_TRUE(found);
}

TEST(Fidelity, Basics) {
  const auto a = random_state({6}, 8);
  EXPECT_NEAR(fidelity(a, a), 1.0, 1e-14);
  EXPECT_EQ(fidelity(fock_state(1, 4), fock_state(2, 4)), 0.0);
}

TEST(Sync, CoherentProductsGiveOne) {
  for (cplx a : {cplx(0.0), cplx(1.3, -0.4)}) {
    const auto n = min_truncation(std::norm(a));
    const auto psi = tensor({coherent_state(a, n), coherent_state(a, n + 3)});
    EXPECT_NEAR(sync_indicator(psi, 0, 1), 1.0, 1e-8);
    EXPECT_NEAR(sync_indicator(DensityMatrix::from_pure(psi)), 1.0, 1e-8);
  }
  // Unequal amplitudes displace q_- and p_- but leave the variances alone.
  const auto psi = tensor({coherent_state(cplx(2.0, 0.5), 40), coherent_state(cplx(-1.0, 1.0), 30)});
  EXPECT_NEAR(sync_indicator(psi, 0, 1), 1.0, 1e-8);
}

TEST(Sync, DirectMomentOracle) {
  // Var q_- + Var p_- from explicit quadrature matrices.
  const auto psi = random_state({6, 7}, 33);
  const auto dims = psi.dims();
  const auto a1 = embed(FockOperator::annihilation(6), 0, dims).matrix;
  const auto a2 = embed(FockOperator::annihilation(7), 1, dims).matrix;
  const CMatrix d = (a1 - a2) / std::numbers::sqrt2;
  const CMatrix q = (d + d.adjoint()) / std::numbers::sqrt2;
  const CMatrix p = (d - d.adjoint()) / (cplx(0, 1) * std::numbers::sqrt2);
  const CVector& v = psi.amplitudes();
  // Exact commutator [d, d^dag] = 1 differs from the truncated matrices only
  // on the top levels; keep the random state away from them.
  CVector low = CVector::Zero(v.size());
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t n = 0; n < 5; ++n) low[static_cast<Eigen::Index>(m * 7 + n)] = v[static_cast<Eigen::Index>(m * 7 + n)];
  const StateVector s = StateVector::normalized(low, dims);
  const CVector& w = s.amplitudes();
  auto var_w = [&](const CMatrix& o) {
    const double m = w.dot(o * w).real();
    return w.dot(o * (o * w)).real() - m * m;
  };
  EXPECT_NEAR(sync_indicator(s, 0, 1), 1.0 / (var_w(q) + var_w(p)), 1e-12);
}

TEST(Sync, DisplacementInvariant) {
  // D(beta) x D(beta) shifts both modes equally, leaving q_- and p_- unchanged.
  const std::size_t n = 60;
  const auto small = random_state({4, 4}, 41);
  CVector embedded = CVector::Zero(static_cast<Eigen::Index>(n * n));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) embedded[static_cast<Eigen::Index>(i * n + j)] = small[i * 4 + j];
  const StateVector psi(embedded, {n, n});
  const cplx beta(0.8, -0.5);
  const CMatrix gen = beta * FockOperator::creation(n).matrix - std::conj(beta) * FockOperator::annihilation(n).matrix;
  const CMatrix disp = gen.exp();
  CVector moved = apply_local(FockOperator{disp}, 0, psi.amplitudes(), psi.dims());
  moved = apply_local(FockOperator{disp}, 1, moved, psi.dims());
  const auto shifted = StateVector::normalized(moved, psi.dims());
  EXPECT_NEAR(std::abs(local_expectation(FockOperator::annihilation(n), 0, shifted) -
                       local_expectation(FockOperator::annihilation(n), 0, psi) - beta),
              0.0, 1e-8);
  EXPECT_NEAR(sync_indicator(shifted, 0, 1), sync_indicator(psi, 0, 1), 1e-10);
}

TEST(LocalMinima, StrictAndPlateaus) {
  const std::vector<double> v{3, 1, 2, 2, 1, 1, 4, 0};
  EXPECT_EQ(local_minima(v), (std::vector<std::size_t>{1, 4}));
  const std::vector<double> flat{1, 1, 1};
  EXPECT_TRUE(local_minima(flat).empty());
  const std::vector<double> edge{0, 1, 2};
  EXPECT_TRUE(local_minima(edge).empty());
}
