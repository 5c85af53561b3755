#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qtomo/fock.hpp"

using namespace qtomo;

namespace {

// Poisson pmf by log-gamma, independent of the library's ratio recursion.
double poisson_pmf(double mean, std::size_t k) {
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

StateVector random_state(const Dims& dims, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  CVector v(static_cast<Eigen::Index>(total_dim(dims)));
  for (auto& c : v) c = {n(rng), n(rng)};
  return StateVector::normalized(v, dims);
}

}  // namespace

TEST(StateVector, RejectsUnnormalisedAmplitudes) {
  CVector v = CVector::Zero(3);
  v[0] = 1.1;
  EXPECT_THROW(StateVector(v, {3}), DomainError);
}

TEST(StateVector, RejectsDimsMismatch) {
  CVector v = CVector::Zero(4);
  v[0] = 1.0;
  EXPECT_THROW(StateVector(v, {3}), DimensionError);
  EXPECT_NO_THROW(StateVector(v, {2, 2}));
}

TEST(DensityMatrix, RejectsNonHermitianAndBadTrace) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = cplx(0.0, 0.1);
  EXPECT_THROW(DensityMatrix(m, {2}), DomainError);
  m(0, 1) = 0.0;
  m(1, 1) = 0.5;
  EXPECT_THROW(DensityMatrix(m, {2}), DomainError);
}

TEST(FockState, VacuumAndExcited) {
  const auto vac = fock_state(0, 5);
  EXPECT_EQ(vac.size(), 5u);
  EXPECT_EQ(vac[0], cplx(1.0));
  for (std::size_t k = 1; k < 5; ++k) EXPECT_EQ(vac[k], cplx(0.0));
  const auto ten = fock_state(10, 30);
  for (std::size_t k = 0; k < 30; ++k) EXPECT_EQ(ten[k], cplx(k == 10 ? 1.0 : 0.0));
  EXPECT_THROW(fock_state(4, 4), TruncationError);
}

TEST(CoherentState, ZeroAmplitudeIsVacuum) {
  const auto cs = coherent_state(0.0, 10);
  EXPECT_EQ(cs[0], cplx(1.0));
  for (std::size_t k = 1; k < 10; ++k) EXPECT_EQ(cs[k], cplx(0.0));
}

TEST(CoherentState, PopulationsArePoisson) {
  const auto cs = coherent_state(std::sqrt(5.0), 40);
  for (std::size_t k = 0; k < 40; ++k) EXPECT_NEAR(std::norm(cs[k]), poisson_pmf(5.0, k), 1e-12);
}

TEST(CoherentState, PhaseOfAmplitudes) {
  const cplx alpha = std::polar(2.0, 0.7);
  const auto cs = coherent_state(alpha, 40);
  for (std::size_t k = 1; k < 10; ++k)
    EXPECT_NEAR(std::arg(cs[k] / cs[k - 1]), 0.7, 1e-12);
}

TEST(CoherentState, TailRuleRejectsShortTruncation) {
  EXPECT_THROW(coherent_state(7.0, 60), TruncationError);
  try {
    coherent_state(7.0, 60);
  } catch (const TruncationError& e) {
    EXPECT_NE(std::string(e.what()).find("101"), std::string::npos) << e.what();
  }
}

TEST(Truncation, MinTruncationMatchesPoissonTail) {
  // Tail mass by direct summation of the pmf.
  auto tail = [](double mean, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = n; k < n + 400; ++k) s += poisson_pmf(mean, k);
    return s;
  };
  for (double mean : {1.0, 5.0, 20.7, 49.0}) {
    const std::size_t n = min_truncation(mean);
    EXPECT_LT(tail(mean, n), 1e-10) << mean;
    EXPECT_GE(tail(mean, n - 1), 1e-10) << mean;
    EXPECT_NEAR(poisson_tail(mean, n), tail(mean, n), 1e-14);
  }
  EXPECT_EQ(min_truncation(49.0), 101u);
  EXPECT_EQ(min_truncation(5.0), 26u);
  EXPECT_EQ(min_truncation(1.0), 13u);
}

TEST(Tensor, ProductLayout) {
  const auto vac2 = tensor({fock_state(0, 3), fock_state(0, 4)});
  EXPECT_EQ(vac2.dims(), (Dims{3, 4}));
  EXPECT_EQ(vac2[0], cplx(1.0));
  const auto one_one = tensor({fock_state(1, 2), fock_state(1, 2)});
  const std::size_t idx[] = {1, 1};
  EXPECT_EQ(one_one.at(idx), cplx(1.0));
  EXPECT_EQ(one_one[3], cplx(1.0));

  const auto cs = coherent_state(std::sqrt(5.0), 26);
  const auto st = tensor({cs, fock_state(0, 3)});
  for (std::size_t n = 0; n < 26; ++n) {
    EXPECT_EQ(st[n * 3], cs[n]);
    EXPECT_EQ(st[n * 3 + 1], cplx(0.0));
  }
}

TEST(PartialTrace, ProductStateRecoversFactor) {
  const auto a = random_state({3}, 1);
  const auto b = random_state({4}, 2);
  const auto rho = DensityMatrix::from_pure(tensor({a, b}));
  const auto ra = partial_trace(rho, {0});
  const CMatrix expect = a.amplitudes() * a.amplitudes().adjoint();
  EXPECT_LT((ra.elements() - expect).cwiseAbs().maxCoeff(), 1e-12);
  const auto rb = partial_trace(tensor({a, b}), {1});
  const CMatrix expect_b = b.amplitudes() * b.amplitudes().adjoint();
  EXPECT_LT((rb.elements() - expect_b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, BellLikeStateByExplicitSum) {
  CVector v = CVector::Zero(4);
  v[1] = v[2] = 1.0 / std::numbers::sqrt2;  // (|0,1> + |1,0>)/sqrt 2
  const StateVector psi(v, {2, 2});
  const auto rho = DensityMatrix::from_pure(psi);
  // Oracle: rho_A(i, j) = sum_k psi(i, k) conj(psi(j, k)).
  CMatrix oracle = CMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) oracle(i, j) += v[i * 2 + k] * std::conj(v[j * 2 + k]);
  const auto r0 = partial_trace(rho, {0});
  const auto r1 = partial_trace(psi, {1});
  EXPECT_LT((r0.elements() - oracle).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(r1.elements()(0, 0).real(), 0.5, 1e-12);
  EXPECT_NEAR(r1.elements()(1, 1).real(), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(r1.elements()(0, 1)), 0.0, 1e-12);
}

TEST(PartialTrace, PureAndMixedPathsAgreeOnThreeParties) {
  const auto psi = random_state({3, 2, 4}, 7);
  const auto rho = DensityMatrix::from_pure(psi);
  for (const auto& keep : std::vector<std::vector<std::size_t>>{{0}, {1}, {2}, {0, 2}, {1, 2}}) {
    const auto a = partial_trace(rho, keep);
    const auto b = partial_trace(psi, keep);
    EXPECT_LT((a.elements() - b.elements()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(a.trace().real(), 1.0, 1e-12);
  }
}

TEST(PartialTrace, RejectsBadKeepSets) {
  const auto psi = random_state({2, 2}, 3);
  EXPECT_THROW(partial_trace(psi, {0, 1}), DimensionError);
  EXPECT_THROW(partial_trace(psi, {2}), DimensionError);
  EXPECT_THROW(partial_trace(random_state({2, 2, 2}, 4), {1, 0}), DimensionError);
}

TEST(Operators, LadderCommutatorInsideTruncation) {
  const std::size_t d = 12;
  const auto a = FockOperator::annihilation(d);
  const auto ad = FockOperator::creation(d);
  const CMatrix comm = (a * ad - ad * a).matrix;
  // Identity except the last diagonal entry, which the truncation spoils.
  for (std::size_t i = 0; i + 1 < d; ++i)
    for (std::size_t j = 0; j + 1 < d; ++j)
      EXPECT_NEAR(std::abs(comm(i, j) - cplx(i == j ? 1.0 : 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(comm(d - 1, d - 1).real(), -static_cast<double>(d - 1), 1e-12);
  EXPECT_LT(((ad * a).matrix - FockOperator::number(d).matrix).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Expectation, CoherentStateMoments) {
  const cplx alpha(std::sqrt(5.0), 0.0);
  const auto rho = DensityMatrix::from_pure(coherent_state(alpha, 40));
  EXPECT_NEAR(expectation(FockOperator::number(40), rho).real(), 5.0, 1e-8);
  const auto a = expectation(FockOperator::annihilation(40), rho);
  EXPECT_NEAR(std::abs(a - alpha), 0.0, 1e-8);
  const auto vac = DensityMatrix::from_pure(fock_state(0, 5));
  EXPECT_NEAR(std::abs(expectation(FockOperator::annihilation(5), vac)), 0.0, 1e-15);

  const cplx beta = std::polar(1.5, -0.3);
  const auto psi = tensor({coherent_state(alpha, 40), coherent_state(beta, 30)});
  EXPECT_NEAR(std::abs(local_expectation(FockOperator::annihilation(30), 1, psi) - beta), 0.0, 1e-8);
  const auto embedded = embed(FockOperator::annihilation(40), 0, psi.dims());
  EXPECT_NEAR(std::abs(expectation(embedded, psi) - alpha), 0.0, 1e-8);
}

TEST(DensityMatrix, PurityAndEigenvalues) {
  const auto rho = DensityMatrix::from_pure(random_state({5}, 11));
  EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
  EXPECT_GT(rho.min_eigenvalue(), -1e-10);
}
