#include "qtomo/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qtomo {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

// Flat offsets contributed by every multi-index over `subset`, enumerated
// row-major in subset order. offset(keep) + offset(env) is the full index.
std::vector<std::size_t> subset_offsets(const Dims& dims, std::span<const std::size_t> subset) {
  const auto strides = strides_of(dims);
  std::vector<std::size_t> out{0};
  for (std::size_t s : subset) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[s]);
    for (std::size_t base : out)
      for (std::size_t k = 0; k < dims[s]; ++k) next.push_back(base + k * strides[s]);
    out = std::move(next);
  }
  return out;
}

void check_keep(std::span<const std::size_t> keep, std::size_t n_sub) {
  if (keep.empty() || keep.size() >= n_sub)
    throw DimensionError("partial_trace: keep must be a nonempty proper subset of " +
                         std::to_string(n_sub) + " subsystems");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= n_sub) throw DimensionError("partial_trace: subsystem index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw DimensionError("partial_trace: keep must be strictly increasing");
  }
}

std::vector<std::size_t> complement(std::span<const std::size_t> keep, std::size_t n_sub) {
  std::vector<std::size_t> env;
  for (std::size_t i = 0; i < n_sub; ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) env.push_back(i);
  return env;
}

Dims select(const Dims& dims, std::span<const std::size_t> idx) {
  Dims out;
  for (std::size_t i : idx) out.push_back(dims[i]);
  return out;
}

// log(k!) via lgamma; adequate well beyond the truncations used here.
double log_factorial(std::size_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

}  // namespace

std::size_t total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

StateVector::StateVector(CVector amplitudes, Dims dims)
    : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("StateVector: dims must be nonempty");
  for (auto d : dims_)
    if (d == 0) throw DimensionError("StateVector: every subsystem dimension must be >= 1");
  if (total_dim(dims_) != static_cast<std::size_t>(amps_.size()))
    throw DimensionError("StateVector: product of dims (" + std::to_string(total_dim(dims_)) +
                         ") != amplitude count (" + std::to_string(amps_.size()) + ")");
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > kNormTol)
    throw DomainError("StateVector: norm " + std::to_string(n) + " differs from 1");
}

StateVector StateVector::normalized(CVector amplitudes, Dims dims) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw DomainError("StateVector: cannot normalise a zero vector");
  amplitudes /= n;
  return StateVector(std::move(amplitudes), std::move(dims));
}

cplx StateVector::at(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw DimensionError("StateVector::at: wrong index rank");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= dims_[i]) throw DimensionError("StateVector::at: index out of range");
    flat = flat * dims_[i] + index[i];
  }
  return amps_[static_cast<Eigen::Index>(flat)];
}

DensityMatrix::DensityMatrix(CMatrix elements, Dims dims)
    : rho_(std::move(elements)), dims_(std::move(dims)) {
  if (rho_.rows() != rho_.cols()) throw DimensionError("DensityMatrix: matrix is not square");
  if (total_dim(dims_) != static_cast<std::size_t>(rho_.rows()))
    throw DimensionError("DensityMatrix: product of dims does not match matrix size");
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol)
    throw DomainError("DensityMatrix: not Hermitian (max deviation " + std::to_string(herm) + ")");
  const cplx tr = rho_.trace();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw DomainError("DensityMatrix: trace " + std::to_string(tr.real()) + " differs from 1");
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  CMatrix rho = a * a.adjoint();
  // Outer products are Hermitian only up to rounding in the diagonal's
  // imaginary part; clean it so the invariant check is exact.
  rho.diagonal() = rho.diagonal().real().cast<cplx>();
  return DensityMatrix(std::move(rho), psi.dims());
}

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho_.cwiseAbs2().sum();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

FockOperator FockOperator::annihilation(std::size_t dim) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t n = 1; n < dim; ++n)
    m(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) =
        std::sqrt(static_cast<double>(n));
  return {std::move(m)};
}

FockOperator FockOperator::creation(std::size_t dim) { return annihilation(dim).adjoint(); }

FockOperator FockOperator::number(std::size_t dim) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t n = 0; n < dim; ++n)
    m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = static_cast<double>(n);
  return {std::move(m)};
}

FockOperator FockOperator::identity(std::size_t dim) {
  return {CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))};
}

FockOperator FockOperator::transition(std::size_t dim, std::size_t row, std::size_t col) {
  if (row >= dim || col >= dim) throw DimensionError("transition: level out of range");
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  return {std::move(m)};
}

FockOperator operator*(cplx scale, const FockOperator& op) { return {scale * op.matrix}; }

Operator Operator::operator*(const Operator& rhs) const {
  if (dims != rhs.dims) throw DimensionError("Operator product: dims differ");
  return {matrix * rhs.matrix, dims};
}

Operator Operator::operator+(const Operator& rhs) const {
  if (dims != rhs.dims) throw DimensionError("Operator sum: dims differ");
  return {matrix + rhs.matrix, dims};
}

Operator embed(const FockOperator& op, std::size_t subsystem, const Dims& dims) {
  if (subsystem >= dims.size()) throw DimensionError("embed: subsystem out of range");
  if (op.dim() != dims[subsystem])
    throw DimensionError("embed: operator dimension does not match subsystem");
  CMatrix acc = CMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const CMatrix factor =
        i == subsystem ? op.matrix
                       : CMatrix::Identity(static_cast<Eigen::Index>(dims[i]),
                                           static_cast<Eigen::Index>(dims[i]));
    CMatrix next(acc.rows() * factor.rows(), acc.cols() * factor.cols());
    for (Eigen::Index r = 0; r < acc.rows(); ++r)
      for (Eigen::Index c = 0; c < acc.cols(); ++c)
        next.block(r * factor.rows(), c * factor.cols(), factor.rows(), factor.cols()) =
            acc(r, c) * factor;
    acc = std::move(next);
  }
  return {std::move(acc), dims};
}

double poisson_tail(double mean, std::size_t n_max) {
  if (mean < 0.0) throw DomainError("poisson_tail: negative mean");
  if (mean == 0.0) return n_max == 0 ? 1.0 : 0.0;
  // Sum upward from n_max; terms decay geometrically once k exceeds the mean.
  double tail = 0.0;
  const double log_mean = std::log(mean);
  for (std::size_t k = n_max;; ++k) {
    const double term =
        std::exp(-mean + static_cast<double>(k) * log_mean - log_factorial(k));
    tail += term;
    if (static_cast<double>(k) > mean && term < 1e-18 * std::max(tail, 1e-300)) break;
    if (term == 0.0 && static_cast<double>(k) > mean) break;
  }
  return tail;
}

std::size_t min_truncation(double mean, double tail) {
  if (!(tail > 0.0)) throw DomainError("min_truncation: tail tolerance must be positive");
  std::size_t n = 1;
  while (poisson_tail(mean, n) >= tail) ++n;
  return n;
}

StateVector fock_state(std::size_t n, std::size_t n_max) {
  if (n >= n_max)
    throw TruncationError("fock_state: level " + std::to_string(n) +
                          " does not fit a truncation of " + std::to_string(n_max) + " levels");
  CVector a = CVector::Zero(static_cast<Eigen::Index>(n_max));
  a[static_cast<Eigen::Index>(n)] = 1.0;
  return StateVector(std::move(a), {n_max});
}

StateVector coherent_state(cplx alpha, std::size_t n_max, double tail) {
  if (n_max == 0) throw TruncationError("coherent_state: truncation must be >= 1");
  const double mean = std::norm(alpha);
  const double lost = poisson_tail(mean, n_max);
  if (lost >= tail)
    throw TruncationError("coherent_state: Poisson tail " + std::to_string(lost) +
                          " above tolerance for |alpha|^2 = " + std::to_string(mean) +
                          "; requires n_max >= " + std::to_string(min_truncation(mean, tail)));
  CVector a(static_cast<Eigen::Index>(n_max));
  // c_k = e^{-|a|^2/2} a^k / sqrt(k!), built by the ratio c_k = c_{k-1} a / sqrt(k).
  a[0] = std::exp(-0.5 * mean);
  for (std::size_t k = 1; k < n_max; ++k)
    a[static_cast<Eigen::Index>(k)] =
        a[static_cast<Eigen::Index>(k - 1)] * alpha / std::sqrt(static_cast<double>(k));
  return StateVector::normalized(std::move(a), {n_max});
}

StateVector tensor(std::span<const StateVector> parts) {
  if (parts.empty()) throw DimensionError("tensor: empty list of parts");
  CVector acc = parts.front().amplitudes();
  Dims dims = parts.front().dims();
  for (const auto& p : parts.subspan(1)) {
    const CVector& b = p.amplitudes();
    CVector next(acc.size() * b.size());
    for (Eigen::Index i = 0; i < acc.size(); ++i) next.segment(i * b.size(), b.size()) = acc[i] * b;
    acc = std::move(next);
    dims.insert(dims.end(), p.dims().begin(), p.dims().end());
  }
  return StateVector::normalized(std::move(acc), std::move(dims));
}

StateVector tensor(std::initializer_list<StateVector> parts) {
  return tensor(std::span<const StateVector>(parts.begin(), parts.size()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  check_keep(keep, rho.subsystems());
  const auto env = complement(keep, rho.subsystems());
  const auto ko = subset_offsets(rho.dims(), keep);
  const auto eo = subset_offsets(rho.dims(), env);
  const CMatrix& r = rho.elements();
  const auto nk = static_cast<Eigen::Index>(ko.size());
  CMatrix out = CMatrix::Zero(nk, nk);
  for (Eigen::Index i = 0; i < nk; ++i)
    for (Eigen::Index j = 0; j < nk; ++j) {
      cplx s = 0.0;
      for (std::size_t e : eo)
        s += r(static_cast<Eigen::Index>(ko[static_cast<std::size_t>(i)] + e),
               static_cast<Eigen::Index>(ko[static_cast<std::size_t>(j)] + e));
      out(i, j) = s;
    }
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out), select(rho.dims(), keep));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

DensityMatrix partial_trace(const StateVector& psi, std::span<const std::size_t> keep) {
  check_keep(keep, psi.subsystems());
  const auto env = complement(keep, psi.subsystems());
  const auto ko = subset_offsets(psi.dims(), keep);
  const auto eo = subset_offsets(psi.dims(), env);
  CMatrix m(static_cast<Eigen::Index>(ko.size()), static_cast<Eigen::Index>(eo.size()));
  for (std::size_t i = 0; i < ko.size(); ++i)
    for (std::size_t e = 0; e < eo.size(); ++e)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e)) = psi[ko[i] + eo[e]];
  CMatrix out = m * m.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out), select(psi.dims(), keep));
}

DensityMatrix partial_trace(const StateVector& psi, std::initializer_list<std::size_t> keep) {
  return partial_trace(psi, std::span<const std::size_t>(keep.begin(), keep.size()));
}

cplx expectation(const Operator& op, const DensityMatrix& rho) {
  if (op.dims != rho.dims()) throw DimensionError("expectation: operator and state dims differ");
  // Tr(rho A) = sum_ij rho_ij A_ji
  return (rho.elements().cwiseProduct(op.matrix.transpose())).sum();
}

cplx expectation(const FockOperator& op, const DensityMatrix& rho) {
  if (rho.subsystems() != 1 || op.dim() != rho.size())
    throw DimensionError("expectation: single-mode operator needs a matching single-mode state");
  return (rho.elements().cwiseProduct(op.matrix.transpose())).sum();
}

cplx expectation(const Operator& op, const StateVector& psi) {
  if (op.dims != psi.dims()) throw DimensionError("expectation: operator and state dims differ");
  return psi.amplitudes().dot(op.matrix * psi.amplitudes());
}

CVector apply_local(const FockOperator& op, std::size_t subsystem, const CVector& amps,
                    const Dims& dims) {
  if (subsystem >= dims.size()) throw DimensionError("apply_local: subsystem out of range");
  if (op.dim() != dims[subsystem])
    throw DimensionError("apply_local: operator dimension does not match subsystem");
  if (static_cast<std::size_t>(amps.size()) != total_dim(dims))
    throw DimensionError("apply_local: amplitude count does not match dims");
  const auto strides = strides_of(dims);
  const std::size_t inner = strides[subsystem];
  const std::size_t d = dims[subsystem];
  const std::size_t outer = total_dim(dims) / (inner * d);
  CVector out = CVector::Zero(amps.size());
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        const cplx v = op.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        if (v == 0.0) continue;
        const std::size_t src = o * d * inner + c * inner;
        const std::size_t dst = o * d * inner + r * inner;
        for (std::size_t i = 0; i < inner; ++i)
          out[static_cast<Eigen::Index>(dst + i)] += v * amps[static_cast<Eigen::Index>(src + i)];
      }
  return out;
}

cplx local_expectation(const FockOperator& op, std::size_t subsystem, const StateVector& psi) {
  return psi.amplitudes().dot(apply_local(op, subsystem, psi.amplitudes(), psi.dims()));
}

cplx inner_product(const StateVector& lhs, const StateVector& rhs) {
  if (lhs.dims() != rhs.dims()) throw DimensionError("inner_product: dims differ");
  return lhs.amplitudes().dot(rhs.amplitudes());
}

}  // namespace qtomo
