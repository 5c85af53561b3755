#include "qtomo/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qtomo {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

// Diagonalises a real symmetric block and checks the solver converged.
void eigensolve(const Eigen::MatrixXd& h, Eigen::VectorXd& energies, Eigen::MatrixXd& vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  energies = es.eigenvalues();
  vectors = es.eigenvectors();
}

Eigen::VectorXcd propagate(const Eigen::VectorXd& energies, const Eigen::MatrixXd& vectors,
                           const Eigen::VectorXcd& coefficients, double t) {
  Eigen::VectorXcd phased(coefficients.size());
  for (Eigen::Index i = 0; i < coefficients.size(); ++i)
    phased[i] = std::polar(1.0, -energies[i] * t) * coefficients[i];
  return vectors.cast<cplx>() * phased;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kerr: return "kerr";
    case ModelKind::ap: return "ap";
    case ModelKind::lambda: return "lambda";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Kerr ----

double KerrParams::revival_time() const { return std::numbers::pi / lambda; }

void KerrParams::validate() const {
  require_finite(lambda, "Kerr lambda");
  if (!(lambda > 0.0)) throw DomainError("Kerr lambda must be > 0");
  require_finite(alpha.real(), "Kerr alpha");
  require_finite(alpha.imag(), "Kerr alpha");
}

StateVector kerr_evolve(const KerrParams& params, double t, std::optional<std::size_t> n_max) {
  params.validate();
  const std::size_t dim = n_max.value_or(min_truncation(std::norm(params.alpha)));
  const StateVector cs = coherent_state(params.alpha, dim);
  CVector amps = cs.amplitudes();
  for (std::size_t k = 1; k < dim; ++k) {
    const double kk = static_cast<double>(k) * static_cast<double>(k - 1);
    amps[static_cast<Eigen::Index>(k)] *= std::polar(1.0, -params.lambda * kk * t);
  }
  return StateVector(std::move(amps), {dim});
}

std::vector<double> revival_times(const KerrParams& params, std::size_t p, std::size_t count) {
  params.validate();
  if (p == 0) throw DomainError("revival_times: number of subpackets must be >= 1");
  std::vector<double> out;
  out.reserve(count);
  const double base = params.revival_time() / static_cast<double>(p);
  for (std::size_t j = 1; j <= count; ++j) out.push_back(static_cast<double>(j) * base);
  return out;
}

// ----------------------------------------------------- field + oscillator --

void APParams::validate() const {
  require_finite(omega_field, "AP omega");
  require_finite(omega_atom, "AP omega0");
  require_finite(gamma_nl, "AP gamma");
  require_finite(g_coupling, "AP g");
  if (!(g_coupling > 0.0)) throw DomainError("AP coupling g must be > 0");
  if (n_max < 1 || atom_levels < 1) throw DomainError("AP truncations must be >= 1");
}

APBlock ap_diagonalize(const APParams& params, std::size_t N) {
  params.validate();
  // Levels m with N - m < n_max and m < atom_levels.
  const std::size_t m_lo = N + 1 > params.n_max ? N + 1 - params.n_max : 0;
  const std::size_t m_hi = std::min(N, params.atom_levels - 1);
  APBlock block;
  block.total_quanta = N;
  block.first_atom_level = m_lo;
  if (m_lo > m_hi) return block;
  const auto size = static_cast<Eigen::Index>(m_hi - m_lo + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double m = static_cast<double>(m_lo) + static_cast<double>(i);
    const double n = static_cast<double>(N) - m;
    h(i, i) = params.omega_field * n + params.omega_atom * m + params.gamma_nl * m * (m - 1.0);
    if (i + 1 < size) {
      const double c = params.g_coupling * std::sqrt(n * (m + 1.0));
      h(i, i + 1) = c;
      h(i + 1, i) = c;
    }
  }
  block.hamiltonian = h;
  eigensolve(h, block.energies, block.vectors);
  return block;
}

Operator ap_hamiltonian(const APParams& params) {
  params.validate();
  const Dims dims = params.dims();
  const auto a = FockOperator::annihilation(params.n_max);
  const auto b = FockOperator::annihilation(params.atom_levels);
  const auto ad = a.adjoint();
  const auto bd = b.adjoint();
  Operator h = embed(params.omega_field * ad * a, 0, dims);
  h = h + embed(params.omega_atom * bd * b, 1, dims);
  h = h + embed(params.gamma_nl * bd * bd * b * b, 1, dims);
  const Operator coupling = embed(ad, 0, dims) * embed(b, 1, dims) +
                            embed(a, 0, dims) * embed(bd, 1, dims);
  h.matrix += params.g_coupling * coupling.matrix;
  return h;
}

APEngine::APEngine(const APParams& params, const StateVector& initial)
    : params_(params), initial_(initial) {
  params_.validate();
  if (initial.dims() != params_.dims())
    throw DimensionError("APEngine: initial state dims must be {n_max, atom_levels}");
  const std::size_t na = params_.atom_levels;
  const std::size_t max_n = params_.n_max + params_.atom_levels - 2;
  for (std::size_t N = 0; N <= max_n; ++N) {
    const APBlock eig = ap_diagonalize(params_, N);
    if (eig.energies.size() == 0) continue;
    Block blk;
    blk.eig = eig;
    Eigen::VectorXcd c(eig.energies.size());
    bool populated = false;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const std::size_t m = eig.first_atom_level + static_cast<std::size_t>(i);
      const std::size_t idx = (N - m) * na + m;
      blk.flat_index.push_back(idx);
      c[i] = initial[idx];
      populated = populated || c[i] != 0.0;
    }
    if (!populated) continue;
    if (N + 1 > params_.n_max || N + 1 > params_.atom_levels)
      throw TruncationError("APEngine: initial state populates total excitation N = " +
                            std::to_string(N) + " which needs n_max and atom_levels >= " +
                            std::to_string(N + 1));
    blk.coefficients = eig.vectors.transpose().cast<cplx>() * c;
    blocks_.push_back(std::move(blk));
  }
}

StateVector APEngine::state_at(double gt) const {
  const double t = gt / params_.g_coupling;
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(initial_.size()));
  for (const auto& blk : blocks_) {
    const Eigen::VectorXcd v = propagate(blk.eig.energies, blk.eig.vectors, blk.coefficients, t);
    for (std::size_t i = 0; i < blk.flat_index.size(); ++i)
      amps[static_cast<Eigen::Index>(blk.flat_index[i])] = v[static_cast<Eigen::Index>(i)];
  }
  return StateVector(std::move(amps), initial_.dims());
}

EvolutionResult ap_evolve(const APParams& params, const StateVector& initial,
                          std::span<const double> gt_grid) {
  const APEngine engine(params, initial);
  EvolutionResult r;
  r.model = ModelKind::ap;
  r.labels = {"field", "atom"};
  r.dims = params.dims();
  for (double gt : gt_grid) {
    r.times.push_back(gt);
    r.states.push_back(engine.state_at(gt));
  }
  return r;
}

APParams ap_params_for(APParams params, const StateVector& field_initial) {
  if (field_initial.subsystems() != 1)
    throw DimensionError("ap_params_for: expected a single-mode field state");
  std::size_t top = 0;
  for (std::size_t k = 0; k < field_initial.size(); ++k)
    if (field_initial[k] != 0.0) top = k;
  params.n_max = top + 1;
  params.atom_levels = top + 1;
  return params;
}

// ------------------------------------------------------------- Lambda -----

double LambdaParams::detuning(std::size_t field) const {
  if (field > 1) throw DimensionError("LambdaParams::detuning: field index must be 0 or 1");
  return omega_atomic[2] - omega_atomic[field] - omega_fields[field];
}

void LambdaParams::validate() const {
  for (double w : omega_atomic) require_finite(w, "Lambda omega_k");
  for (double w : omega_fields) require_finite(w, "Lambda Omega_i");
  require_finite(chi_nl, "Lambda chi");
  require_finite(kappa, "Lambda kappa");
  if (kappa < 0.0) throw DomainError("Lambda coupling kappa must be >= 0");
}

Operator lambda_hamiltonian(const LambdaParams& params, std::size_t n1, std::size_t n2) {
  params.validate();
  const Dims dims{n1, n2, 3};
  const double d1 = params.detuning(0);
  const double d2 = params.detuning(1);
  Operator h = embed(d1 * FockOperator::transition(3, kAtomE3, kAtomE3), 2, dims);
  h = h + embed((d1 - d2) * FockOperator::transition(3, kAtomE2, kAtomE2), 2, dims);
  const std::array<std::size_t, 2> lower{kAtomE1, kAtomE2};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto a = FockOperator::annihilation(dims[i]);
    const auto ad = a.adjoint();
    h = h + embed(params.chi_nl * ad * ad * a * a, i, dims);
    const Operator absorb =
        embed(a, i, dims) * embed(FockOperator::transition(3, kAtomE3, lower[i]), 2, dims);
    h.matrix += params.kappa * (absorb.matrix + absorb.matrix.adjoint());
  }
  return h;
}

LambdaEngine::LambdaEngine(const LambdaParams& params, cplx alpha1, cplx alpha2,
                           std::optional<std::size_t> n_max1, std::optional<std::size_t> n_max2,
                           double tail)
    : params_(params) {
  params_.validate();
  n1_ = n_max1.value_or(min_truncation(std::norm(alpha1), tail));
  n2_ = n_max2.value_or(min_truncation(std::norm(alpha2), tail) + 1);
  const StateVector f1 = coherent_state(alpha1, n1_, tail);
  const StateVector f2 = coherent_state(alpha2, n2_, tail);

  const double chi = params_.chi_nl;
  const double kappa = params_.kappa;
  const double d1 = params_.detuning(0);
  const double d2 = params_.detuning(1);
  auto kerr = [chi](double n) { return chi * n * (n - 1.0); };
  auto flat = [this](std::size_t m, std::size_t n, std::size_t k) { return (m * n2_ + n) * 3 + k; };

  // Blocks {|e1;m;n>, |e3;m-1;n>, |e2;m-1;n+1>}, truncated at the field-2 edge.
  for (std::size_t m = 0; m < n1_; ++m)
    for (std::size_t n = 0; n < n2_; ++n) {
      const cplx amp = f1[m] * f2[n];
      if (amp == 0.0) continue;
      const double dm = static_cast<double>(m);
      const double dn = static_cast<double>(n);
      const Eigen::Index size = m == 0 ? 1 : (n + 1 < n2_ ? 3 : 2);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
      Block blk;
      h(0, 0) = kerr(dm) + kerr(dn);
      blk.flat_index.push_back(flat(m, n, kAtomE1));
      if (size >= 2) {
        h(1, 1) = kerr(dm - 1.0) + kerr(dn) + d1;
        h(0, 1) = h(1, 0) = kappa * std::sqrt(dm);
        blk.flat_index.push_back(flat(m - 1, n, kAtomE3));
      }
      if (size == 3) {
        h(2, 2) = kerr(dm - 1.0) + kerr(dn + 1.0) + d1 - d2;
        h(1, 2) = h(2, 1) = kappa * std::sqrt(dn + 1.0);
        blk.flat_index.push_back(flat(m - 1, n + 1, kAtomE2));
      }
      eigensolve(h, blk.energies, blk.vectors);
      Eigen::VectorXcd c = Eigen::VectorXcd::Zero(size);
      c[0] = amp;
      blk.coefficients = blk.vectors.transpose().cast<cplx>() * c;
      blocks_.push_back(std::move(blk));
    }
}

StateVector LambdaEngine::state_at_time(double t) const {
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(n1_ * n2_ * 3));
  for (const auto& blk : blocks_) {
    const Eigen::VectorXcd v = propagate(blk.energies, blk.vectors, blk.coefficients, t);
    for (std::size_t i = 0; i < blk.flat_index.size(); ++i)
      amps[static_cast<Eigen::Index>(blk.flat_index[i])] = v[static_cast<Eigen::Index>(i)];
  }
  return StateVector(std::move(amps), dims());
}

StateVector LambdaEngine::state_at(double tau) const {
  if (!(params_.kappa > 0.0))
    throw DomainError("LambdaEngine: scaled time kappa t is undefined for kappa = 0");
  return state_at_time(tau / params_.kappa);
}

EvolutionResult lambda_evolve(const LambdaParams& params, cplx alpha1, cplx alpha2,
                              std::span<const double> tau_grid, std::optional<std::size_t> n_max1,
                              std::optional<std::size_t> n_max2) {
  const LambdaEngine engine(params, alpha1, alpha2, n_max1, n_max2);
  EvolutionResult r;
  r.model = ModelKind::lambda;
  r.labels = {"field1", "field2", "atom"};
  r.dims = engine.dims();
  for (double tau : tau_grid) {
    r.times.push_back(tau);
    r.states.push_back(engine.state_at(tau));
  }
  return r;
}

std::vector<DensityMatrix> reduced_field_state(const EvolutionResult& result,
                                               std::span<const std::size_t> keep) {
  std::vector<DensityMatrix> out;
  out.reserve(result.states.size());
  for (const auto& s : result.states) out.push_back(partial_trace(s, keep));
  return out;
}

}  // namespace qtomo
