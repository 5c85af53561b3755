#include "qtomo/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <memory>
#include <numbers>

#include "qtomo/data_io.hpp"
#include "qtomo/dynamics.hpp"
#include "qtomo/error.hpp"

namespace qtomo {

namespace {

bool wants(const ExperimentConfig& c, Product p) {
  return std::find(c.products.begin(), c.products.end(), p) != c.products.end();
}

std::size_t odd_points(double x_max, double max_spacing) {
  auto n = static_cast<std::size_t>(std::ceil(2.0 * x_max / max_spacing)) + 1;
  if (n % 2 == 0) ++n;
  return std::max<std::size_t>(n, 3);
}

// Single-mode initial field padded with zeros to `dim` levels.
StateVector field_state(const InitialMode& m, double tail, std::size_t extra = 0) {
  std::size_t dim = m.kind == InitialMode::Kind::fock
                        ? m.n + 1
                        : min_truncation(std::norm(m.alpha), tail);
  dim += extra;
  if (m.kind == InitialMode::Kind::fock) return fock_state(m.n, dim);
  return coherent_state(m.alpha, dim, tail);
}

// The model-specific part of a run: the state at a scaled time and the
// subsystems that each product refers to.
struct Model {
  std::function<StateVector(double)> state_at;
  Dims dims;
  std::vector<std::string> labels;
  std::size_t field = 0;  ///< subsystem for single-mode products
  std::size_t mode_a = 0;
  std::size_t mode_b = 1;
  std::vector<std::size_t> sle_keep{0};
  double amplitude = 0.0;  ///< sets the default quadrature range
};

Model kerr_model(const ExperimentConfig& c) {
  KerrParams p{c.kerr_lambda, c.field.alpha};
  p.validate();
  const std::size_t n = min_truncation(std::norm(p.alpha), c.tail);
  Model m;
  m.state_at = [p, n](double tau) { return kerr_evolve(p, tau / p.lambda, n); };
  m.dims = {n};
  m.labels = {"field"};
  m.amplitude = std::abs(p.alpha);
  return m;
}

Model ap_model(const ExperimentConfig& c) {
  APParams p;
  p.omega_field = c.ap_omega;
  p.omega_atom = c.ap_omega0;
  p.gamma_nl = c.ap_gamma;
  p.g_coupling = c.ap_g;
  // Excitations move between field and atom, so both need room for the
  // largest populated total N = top field level + initial atomic level.
  const StateVector field = field_state(c.field, c.tail, c.atom_level);
  p.n_max = field.size();
  p.atom_levels = field.size();
  p.validate();
  auto engine = std::make_shared<APEngine>(
      p, tensor({field, fock_state(c.atom_level, p.atom_levels)}));
  Model m;
  m.state_at = [engine](double gt) { return engine->state_at(gt); };
  m.dims = p.dims();
  m.labels = {"field", "atom"};
  m.amplitude = std::sqrt(static_cast<double>(p.n_max - 1));
  return m;
}

Model lambda_model(const ExperimentConfig& c) {
  const std::size_t n1 = min_truncation(std::norm(c.alpha1), c.tail);
  const std::size_t n2 = min_truncation(std::norm(c.alpha2), c.tail) + 1;
  auto engine = std::make_shared<LambdaEngine>(c.lambda, c.alpha1, c.alpha2, n1, n2, c.tail);
  Model m;
  m.state_at = [engine](double tau) { return engine->state_at(tau); };
  m.dims = engine->dims();
  m.labels = {"field1", "field2", "atom"};
  m.field = c.tomogram_mode - 1;
  m.sle_keep = {0, 1};
  m.amplitude = std::sqrt(std::max(std::norm(c.alpha1), std::norm(c.alpha2)) + 1.0);
  return m;
}

Model make_model(const ExperimentConfig& c) {
  switch (c.model) {
    case ModelKind::kerr: return kerr_model(c);
    case ModelKind::ap: return ap_model(c);
    case ModelKind::lambda: return lambda_model(c);
  }
  throw Error("unknown model");
}

std::string utc_now() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) now = std::strtoll(epoch, nullptr, 10);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string time_tag(std::size_t i, std::size_t count) {
  const std::size_t width = std::max<std::size_t>(3, std::to_string(count - 1).size());
  std::string s = std::to_string(i);
  return std::string(width - s.size(), '0') + s;
}

}  // namespace

std::string version() { return QTOMO_VERSION; }

const IndicatorSeries* ExperimentResult::find_series(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return &s;
  return nullptr;
}

ExperimentResult compute(const ExperimentConfig& c) {
  const Model model = make_model(c);
  ExperimentResult r;
  r.config = c;
  r.times = c.time.resolve();
  r.dims = model.dims;
  r.labels = model.labels;

  const double x_max = c.grid.x_max.value_or(std::numbers::sqrt2 * model.amplitude + 6.0);
  r.grid = QuadratureGrid(x_max, odd_points(x_max, c.grid.max_spacing));
  r.thetas = equispaced_angles(c.grid.n_theta);
  const double beta_max = c.grid.beta_max.value_or(x_max / std::numbers::sqrt2);
  r.beta = QuadratureGrid(beta_max, c.grid.wigner_points).points();

  const bool two_mode = r.dims.size() >= 2;
  std::optional<TwoModeTomographer> tomographer;
  std::optional<IprEvaluator> ipr;
  if (two_mode && wants(c, Product::tomogram2d))
    tomographer.emplace(r.dims[model.mode_a], r.dims[model.mode_b], r.grid, r.grid);
  if (two_mode && wants(c, Product::xi_ipr))
    ipr.emplace(r.dims[model.mode_a], r.dims[model.mode_b], r.grid, r.grid);
  const AngleQuorum quorum = AngleQuorum::equispaced(c.quorum_per_axis);

  IndicatorSeries sle_s{"sle", r.times, {}};
  IndicatorSeries xi_s{"xi_ipr", r.times, {}};
  IndicatorSeries sc_s{"s_c", r.times, {}};
  IndicatorSeries fid_s{"fidelity", r.times, {}};

  const StateVector psi0 = model.state_at(0.0);
  const std::size_t field_keep[] = {model.field};
  for (double t : r.times) {
    const StateVector psi = model.state_at(t);
    const bool need_field = wants(c, Product::tomogram) || wants(c, Product::wigner);
    if (need_field) {
      const DensityMatrix rho =
          two_mode ? partial_trace(psi, field_keep) : DensityMatrix::from_pure(psi);
      if (wants(c, Product::tomogram))
        r.tomograms.push_back(two_mode ? tomogram_single(rho, r.thetas, r.grid)
                                       : tomogram_single(psi, r.thetas, r.grid));
      if (wants(c, Product::wigner)) r.wigners.push_back(wigner(rho, r.beta, r.beta));
    }
    if (tomographer)
      r.tomograms2d.push_back((*tomographer)(psi, model.mode_a, model.mode_b, c.theta_a, c.theta_b));
    if (wants(c, Product::sle)) sle_s.values.push_back(sle(psi, model.sle_keep));
    if (ipr) xi_s.values.push_back(ipr->xi(psi, model.mode_a, model.mode_b, quorum));
    if (wants(c, Product::s_c)) sc_s.values.push_back(sync_indicator(psi, 0, 1));
    if (wants(c, Product::fidelity)) fid_s.values.push_back(fidelity(psi0, psi));
  }
  for (auto* s : {&sle_s, &xi_s, &sc_s, &fid_s})
    if (!s->values.empty()) r.series.push_back(std::move(*s));
  return r;
}

std::string manifest_text(const ExperimentResult& r, const std::string& created) {
  const ExperimentConfig& c = r.config;
  std::string o = "# qtomo-manifest 1\n";
  o += "# version " + version() + "\n";
  o += "# created " + created + "\n";
  o += "# time_convention " + time_convention(c.model) + "\n";
  o += "# times " + std::to_string(r.times.size()) + " " + format_double(r.times.front()) + " " +
       format_double(r.times.back()) + "\n";
  for (std::size_t i = 0; i < r.dims.size(); ++i)
    o += "# truncation " + r.labels[i] + " " + std::to_string(r.dims[i]) + "\n";
  o += "# axis X " + format_double(r.grid.x_min()) + " " + format_double(r.grid.x_max()) + " " +
       std::to_string(r.grid.size()) + "\n";
  o += "# axis theta " + format_double(r.thetas.front()) + " " + format_double(r.thetas.back()) +
       " " + std::to_string(r.thetas.size()) + "\n";
  o += "# axis beta " + format_double(r.beta.front()) + " " + format_double(r.beta.back()) + " " +
       std::to_string(r.beta.size()) + "\n";
  o += "# quorum " + std::to_string(c.quorum_per_axis) + "x" + std::to_string(c.quorum_per_axis) +
       " angles j*pi/" + std::to_string(c.quorum_per_axis) + "\n";
  o += "# phase_convention <X,theta|n> = exp(-i n theta) psi_n(X)\n";
  o += "# wigner_normalization integral over d^2 beta = 1\n";
  o += to_text(c);
  return o;
}

OutputBundle write_bundle(const ExperimentResult& r, const std::filesystem::path& root) {
  OutputBundle b;
  b.directory = root / r.config.name;
  std::filesystem::create_directories(b.directory);
  auto put = [&](const std::string& name, const std::string& text) {
    const auto path = b.directory / name;
    write_text(path, text);
    b.files.push_back(path);
  };
  const std::size_t nt = r.times.size();
  for (std::size_t i = 0; i < r.tomograms.size(); ++i)
    put("tomogram_t" + time_tag(i, nt) + ".dat", format_grid(grid_file(r.tomograms[i], r.times[i])));
  for (std::size_t i = 0; i < r.tomograms2d.size(); ++i)
    put("tomogram2d_t" + time_tag(i, nt) + ".dat",
        format_grid(grid_file(r.tomograms2d[i], r.times[i])));
  for (std::size_t i = 0; i < r.wigners.size(); ++i)
    put("wigner_t" + time_tag(i, nt) + ".dat", format_grid(grid_file(r.wigners[i], r.times[i])));
  for (const auto& s : r.series) put(s.name + ".dat", format_series(s, time_convention(r.config.model)));
  b.manifest = b.directory / "manifest.txt";
  write_text(b.manifest, manifest_text(r, utc_now()));
  return b;
}

OutputBundle run(const ExperimentConfig& config, const std::filesystem::path& root) {
  return write_bundle(compute(config), root);
}

// Coherent amplitude used by the synchronisation presets; chosen so that
// S_c at kappa t = 5 is 0.03 (|alpha|^2 about 20.71).
#define QTOMO_LAMBDA_ALPHA "4.5506813"

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"fig1", "Kerr tomograms at T_rev/2 - 0.005, T_rev/2, T_rev/2 + 0.005; |alpha|^2 = 49, lambda = 1",
       "name = fig1\nmodel = kerr\nmodel.kerr.lambda = 1\n"
       "initial.field.kind = coherent\ninitial.field.alpha.re = 0\ninitial.field.alpha.im = 7\n"
       "time.revival.p = 2\ntime.revival.j = 1\ntime.revival.offsets = -0.005, 0, 0.005\n"
       "products = tomogram\n"},
      {"fig2a", "AP model SLE, initial |10; 0>, gt = 0..700 step 1",
       "name = fig2a\nmodel = ap\nmodel.ap.omega = 1\nmodel.ap.omega0 = 1\nmodel.ap.gamma = 0.01\n"
       "model.ap.g = 1\ninitial.field.kind = fock\ninitial.field.n = 10\ninitial.atom.level = 0\n"
       "time.start = 0\ntime.stop = 700\ntime.step = 1\nproducts = sle\n"},
      {"fig2b", "AP model SLE, initial |alpha = sqrt 5; 0>, gt = 0..1400 step 1",
       "name = fig2b\nmodel = ap\nmodel.ap.omega = 1\nmodel.ap.omega0 = 1\nmodel.ap.gamma = 0.01\n"
       "model.ap.g = 1\ninitial.field.kind = coherent\ninitial.field.alpha.re = 2.2360679774997898\n"
       "initial.field.alpha.im = 0\ninitial.atom.level = 0\n"
       "time.start = 0\ntime.stop = 1400\ntime.step = 1\nproducts = sle\n"},
      {"fig3top", "AP model field tomograms, initial |10; 0>, gt = 625, 626, 627",
       "name = fig3top\nmodel = ap\nmodel.ap.omega = 1\nmodel.ap.omega0 = 1\nmodel.ap.gamma = 0.01\n"
       "model.ap.g = 1\ninitial.field.kind = fock\ninitial.field.n = 10\ninitial.atom.level = 0\n"
       "time.list = 625, 626, 627\nproducts = tomogram\n"},
      {"fig3bottom", "AP model field tomograms, initial |alpha = sqrt 5; 0>, gt = 1268, 1269, 1270",
       "name = fig3bottom\nmodel = ap\nmodel.ap.omega = 1\nmodel.ap.omega0 = 1\nmodel.ap.gamma = 0.01\n"
       "model.ap.g = 1\ninitial.field.kind = coherent\ninitial.field.alpha.re = 2.2360679774997898\n"
       "initial.field.alpha.im = 0\ninitial.atom.level = 0\n"
       "time.list = 1268, 1269, 1270\nproducts = tomogram\n"},
      {"fig4", "Lambda model S_c, kappa = 1, chi = 5, Delta_i = 0, tau = 0..5000, dtau = 5",
       "name = fig4\nmodel = lambda\nmodel.lambda.kappa = 1\nmodel.lambda.chi = 5\n"
       "initial.field1.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field1.alpha.im = 0\n"
       "initial.field2.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field2.alpha.im = 0\n"
       "time.start = 0\ntime.stop = 5000\ntime.step = 5\nproducts = s_c\n"},
      {"fig5", "Lambda model field 1 tomogram and Wigner function at tau = 0, 5, 10, 15",
       "name = fig5\nmodel = lambda\nmodel.lambda.kappa = 1\nmodel.lambda.chi = 5\n"
       "initial.field1.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field1.alpha.im = 0\n"
       "initial.field2.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field2.alpha.im = 0\n"
       "tomogram.mode = 1\ntime.list = 0, 5, 10, 15\nproducts = tomogram, wigner\n"},
      {"fig6a", "Lambda model xi_IPR, tau = 0..150, dtau = 5",
       "name = fig6a\nmodel = lambda\nmodel.lambda.kappa = 1\nmodel.lambda.chi = 5\n"
       "initial.field1.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field1.alpha.im = 0\n"
       "initial.field2.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field2.alpha.im = 0\n"
       "time.start = 0\ntime.stop = 150\ntime.step = 5\nproducts = xi_ipr\n"},
      {"fig6b", "Lambda model xi_IPR, tau = 2000..2400, dtau = 50",
       "name = fig6b\nmodel = lambda\nmodel.lambda.kappa = 1\nmodel.lambda.chi = 5\n"
       "initial.field1.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field1.alpha.im = 0\n"
       "initial.field2.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field2.alpha.im = 0\n"
       "time.start = 2000\ntime.stop = 2400\ntime.step = 50\nproducts = xi_ipr\n"},
      {"fig7top", "Lambda model field 1 tomograms at tau = 55, 60, 65",
       "name = fig7top\nmodel = lambda\nmodel.lambda.kappa = 1\nmodel.lambda.chi = 5\n"
       "initial.field1.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field1.alpha.im = 0\n"
       "initial.field2.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field2.alpha.im = 0\n"
       "tomogram.mode = 1\ntime.list = 55, 60, 65\nproducts = tomogram\n"},
      {"fig7bottom", "Lambda model field 1 tomograms at tau = 2200, 2250, 2300",
       "name = fig7bottom\nmodel = lambda\nmodel.lambda.kappa = 1\nmodel.lambda.chi = 5\n"
       "initial.field1.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field1.alpha.im = 0\n"
       "initial.field2.alpha.re = " QTOMO_LAMBDA_ALPHA "\ninitial.field2.alpha.im = 0\n"
       "tomogram.mode = 1\ntime.list = 2200, 2250, 2300\nproducts = tomogram\n"},
  };
  return table;
}

#undef QTOMO_LAMBDA_ALPHA

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw Error("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace qtomo
