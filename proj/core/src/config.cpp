#include "qtomo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace qtomo {

namespace {

constexpr std::size_t kMaxTimePoints = 1'000'000;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto c = s.find(',');
    out.push_back(trim(s.substr(0, c)));
    if (c == std::string_view::npos) break;
    s = s.substr(c + 1);
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::size_t> parse_size(std::string_view s) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys{
      "name", "model", "products", "output.dir",
      "model.kerr.lambda",
      "model.ap.omega", "model.ap.omega0", "model.ap.gamma", "model.ap.g",
      "model.lambda.omega1", "model.lambda.omega2", "model.lambda.omega3",
      "model.lambda.Omega1", "model.lambda.Omega2", "model.lambda.chi", "model.lambda.kappa",
      "initial.field.kind", "initial.field.n", "initial.field.alpha.re", "initial.field.alpha.im",
      "initial.atom.level",
      "initial.field1.alpha.re", "initial.field1.alpha.im",
      "initial.field2.alpha.re", "initial.field2.alpha.im",
      "time.list", "time.start", "time.stop", "time.step",
      "time.revival.p", "time.revival.j", "time.revival.offsets",
      "grid.x_max", "grid.max_spacing", "grid.n_theta",
      "wigner.beta_max", "wigner.points",
      "tomogram.mode", "tomogram2d.theta_a", "tomogram2d.theta_b",
      "quorum.per_axis", "truncation.tail"};
  return keys;
}

// Key/value store that remembers which keys were read and every problem met.
class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view l = line;
      if (const auto h = l.find('#'); h != std::string_view::npos) l = l.substr(0, h);
      l = trim(l);
      if (l.empty()) continue;
      const auto eq = l.find('=');
      if (eq == std::string_view::npos) {
        errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
        continue;
      }
      const std::string key(trim(l.substr(0, eq)));
      const std::string value(trim(l.substr(eq + 1)));
      if (key.empty()) {
        errors.push_back("line " + std::to_string(line_no) + ": empty key");
        continue;
      }
      if (!known_keys().contains(key)) {
        errors.push_back("unknown key '" + key + "'");
        continue;
      }
      if (!values_.emplace(key, value).second)
        errors.push_back("duplicate key '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  std::optional<std::string> str(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::optional<double> real(const std::string& key) {
    const auto s = str(key);
    if (!s) return std::nullopt;
    const auto v = parse_double(*s);
    if (!v) errors.push_back("key '" + key + "': '" + *s + "' is not a finite number");
    return v;
  }

  double real(const std::string& key, double fallback) { return real(key).value_or(fallback); }

  std::optional<std::size_t> count(const std::string& key) {
    const auto s = str(key);
    if (!s) return std::nullopt;
    const auto v = parse_size(*s);
    if (!v) errors.push_back("key '" + key + "': '" + *s + "' is not a nonnegative integer");
    return v;
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    return count(key).value_or(fallback);
  }

  std::optional<std::vector<double>> reals(const std::string& key) {
    const auto s = str(key);
    if (!s) return std::nullopt;
    std::vector<double> out;
    for (auto item : split_list(*s)) {
      const auto v = parse_double(item);
      if (!v) {
        errors.push_back("key '" + key + "': '" + std::string(item) + "' is not a finite number");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  void require(const std::string& key) {
    if (!has(key)) errors.push_back("missing required key '" + key + "'");
  }

  void check(bool ok, std::string message) {
    if (!ok) errors.push_back(std::move(message));
  }

  // Keys that are recognised but were never consumed for this model.
  void report_inapplicable(const std::string& model) {
    for (const auto& [k, v] : values_)
      if (!used_.contains(k)) errors.push_back("key '" + k + "' does not apply to model " + model);
  }

  std::vector<std::string> errors;

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::set<std::string, std::less<>> used_;
};

std::optional<Product> product_from(std::string_view s) {
  static const std::map<std::string_view, Product> m{
      {"tomogram", Product::tomogram}, {"tomogram2d", Product::tomogram2d},
      {"wigner", Product::wigner},     {"sle", Product::sle},
      {"xi_ipr", Product::xi_ipr},     {"s_c", Product::s_c},
      {"fidelity", Product::fidelity}};
  const auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

bool product_allowed(ModelKind model, Product p) {
  switch (model) {
    case ModelKind::kerr:
      return p == Product::tomogram || p == Product::wigner || p == Product::fidelity;
    case ModelKind::ap:
      return p != Product::s_c;
    case ModelKind::lambda:
      return true;
  }
  return false;
}

std::string format_complex_key(const std::string& prefix, cplx a) {
  return prefix + ".re = " + format_double(a.real()) + "\n" + prefix +
         ".im = " + format_double(a.imag()) + "\n";
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

std::string to_string(Product p) {
  switch (p) {
    case Product::tomogram: return "tomogram";
    case Product::tomogram2d: return "tomogram2d";
    case Product::wigner: return "wigner";
    case Product::sle: return "sle";
    case Product::xi_ipr: return "xi_ipr";
    case Product::s_c: return "s_c";
    case Product::fidelity: return "fidelity";
  }
  return "unknown";
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string time_convention(ModelKind model) {
  switch (model) {
    case ModelKind::kerr: return "lambda*t";
    case ModelKind::ap: return "g*t";
    case ModelKind::lambda: return "kappa*t";
  }
  return "t";
}

std::vector<double> TimeSpec::resolve() const {
  std::vector<double> out;
  switch (kind) {
    case Kind::list:
      out = list;
      break;
    case Kind::range: {
      // Integer stepping so the grid does not drift with accumulated rounding.
      const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
      for (std::size_t i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
      break;
    }
    case Kind::revival: {
      const double centre =
          static_cast<double>(revival_j) * std::numbers::pi / static_cast<double>(revival_p);
      for (double o : offsets) out.push_back(centre + o);
      break;
    }
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  Reader r(text);
  ExperimentConfig c;

  if (auto v = r.str("name")) {
    c.name = *v;
    r.check(!c.name.empty() && c.name.find_first_of("/\\ ") == std::string::npos,
            "key 'name': must be nonempty without spaces or path separators");
  }
  c.output_dir = r.str("output.dir");

  r.require("model");
  const std::string model_name = r.str("model").value_or("");
  bool model_ok = true;
  if (model_name == "kerr") c.model = ModelKind::kerr;
  else if (model_name == "ap") c.model = ModelKind::ap;
  else if (model_name == "lambda") c.model = ModelKind::lambda;
  else {
    model_ok = false;
    if (r.has("model")) r.errors.push_back("key 'model': expected kerr, ap or lambda, got '" + model_name + "'");
  }

  auto read_field = [&](InitialMode& m) {
    const std::string kind = r.str("initial.field.kind").value_or("coherent");
    if (kind == "coherent") {
      m.kind = InitialMode::Kind::coherent;
      m.alpha = {r.real("initial.field.alpha.re", 0.0), r.real("initial.field.alpha.im", 0.0)};
    } else if (kind == "fock") {
      m.kind = InitialMode::Kind::fock;
      r.require("initial.field.n");
      m.n = r.count("initial.field.n", 0);
    } else {
      r.errors.push_back("key 'initial.field.kind': expected coherent or fock, got '" + kind + "'");
    }
  };

  if (model_ok) {
    switch (c.model) {
      case ModelKind::kerr:
        r.require("model.kerr.lambda");
        c.kerr_lambda = r.real("model.kerr.lambda", 1.0);
        r.check(c.kerr_lambda > 0.0, "key 'model.kerr.lambda': must be > 0");
        read_field(c.field);
        r.check(c.field.kind == InitialMode::Kind::coherent,
                "model kerr: initial.field.kind must be coherent");
        break;
      case ModelKind::ap:
        c.ap_omega = r.real("model.ap.omega", 1.0);
        c.ap_omega0 = r.real("model.ap.omega0", 1.0);
        c.ap_gamma = r.real("model.ap.gamma", 0.01);
        r.require("model.ap.g");
        c.ap_g = r.real("model.ap.g", 1.0);
        r.check(c.ap_g > 0.0, "key 'model.ap.g': must be > 0");
        read_field(c.field);
        c.atom_level = r.count("initial.atom.level", 0);
        break;
      case ModelKind::lambda:
        c.lambda.omega_atomic = {r.real("model.lambda.omega1", 1.0), r.real("model.lambda.omega2", 1.0),
                                 r.real("model.lambda.omega3", 2.0)};
        c.lambda.omega_fields = {r.real("model.lambda.Omega1", 1.0), r.real("model.lambda.Omega2", 1.0)};
        c.lambda.chi_nl = r.real("model.lambda.chi", 5.0);
        r.require("model.lambda.kappa");
        c.lambda.kappa = r.real("model.lambda.kappa", 1.0);
        r.check(c.lambda.kappa > 0.0, "key 'model.lambda.kappa': must be > 0 (time axis is kappa*t)");
        for (double w : c.lambda.omega_atomic)
          r.check(w > 0.0, "model.lambda.omega1..3: atomic frequencies must be > 0");
        c.alpha1 = {r.real("initial.field1.alpha.re", 1.0), r.real("initial.field1.alpha.im", 0.0)};
        c.alpha2 = {r.real("initial.field2.alpha.re", 1.0), r.real("initial.field2.alpha.im", 0.0)};
        c.tomogram_mode = r.count("tomogram.mode", 1);
        r.check(c.tomogram_mode == 1 || c.tomogram_mode == 2, "key 'tomogram.mode': must be 1 or 2");
        break;
    }
  }

  // Time axis: exactly one of list, range, revival.
  const bool has_list = r.has("time.list");
  const bool has_range = r.has("time.start") || r.has("time.stop") || r.has("time.step");
  const bool has_rev = r.has("time.revival.p") || r.has("time.revival.j") || r.has("time.revival.offsets");
  const int kinds = int(has_list) + int(has_range) + int(has_rev);
  if (kinds != 1) {
    r.errors.push_back("time: specify exactly one of time.list, time.start/stop/step, time.revival.*");
  } else if (has_list) {
    c.time.kind = TimeSpec::Kind::list;
    if (auto v = r.reals("time.list")) {
      c.time.list = *v;
      r.check(!v->empty(), "key 'time.list': must not be empty");
      for (double t : *v) r.check(t >= 0.0, "key 'time.list': times must be >= 0");
    }
  } else if (has_range) {
    c.time.kind = TimeSpec::Kind::range;
    r.require("time.start");
    r.require("time.stop");
    r.require("time.step");
    c.time.start = r.real("time.start", 0.0);
    c.time.stop = r.real("time.stop", 0.0);
    c.time.step = r.real("time.step", 1.0);
    r.check(c.time.start >= 0.0, "key 'time.start': must be >= 0");
    r.check(c.time.step > 0.0, "key 'time.step': must be > 0");
    r.check(c.time.stop >= c.time.start, "key 'time.stop': must be >= time.start");
    if (c.time.step > 0.0 && c.time.stop >= c.time.start)
      r.check((c.time.stop - c.time.start) / c.time.step < static_cast<double>(kMaxTimePoints),
              "time range: more than 1e6 points");
  } else {
    c.time.kind = TimeSpec::Kind::revival;
    r.check(!model_ok || c.model == ModelKind::kerr, "time.revival.* applies only to model kerr");
    r.require("time.revival.p");
    c.time.revival_p = r.count("time.revival.p", 1);
    r.check(c.time.revival_p >= 1, "key 'time.revival.p': number of subpackets must be >= 1");
    c.time.revival_j = r.count("time.revival.j", 1);
    if (auto v = r.reals("time.revival.offsets")) {
      c.time.offsets = *v;
      r.check(!v->empty(), "key 'time.revival.offsets': must not be empty");
    }
    if (c.time.revival_p >= 1)
      for (double t : c.time.resolve()) r.check(t >= 0.0, "time.revival: resolved times must be >= 0");
  }

  if (auto v = r.real("grid.x_max")) {
    c.grid.x_max = *v;
    r.check(*v > 0.0, "key 'grid.x_max': must be > 0");
  }
  c.grid.max_spacing = r.real("grid.max_spacing", 0.05);
  r.check(c.grid.max_spacing > 0.0, "key 'grid.max_spacing': must be > 0");
  c.grid.n_theta = r.count("grid.n_theta", 100);
  r.check(c.grid.n_theta >= 1, "key 'grid.n_theta': must be >= 1");
  if (auto v = r.real("wigner.beta_max")) {
    c.grid.beta_max = *v;
    r.check(*v > 0.0, "key 'wigner.beta_max': must be > 0");
  }
  c.grid.wigner_points = r.count("wigner.points", 201);
  r.check(c.grid.wigner_points >= 3 && c.grid.wigner_points % 2 == 1,
          "key 'wigner.points': must be odd and >= 3");
  c.theta_a = r.real("tomogram2d.theta_a", 0.0);
  c.theta_b = r.real("tomogram2d.theta_b", 0.0);
  c.quorum_per_axis = r.count("quorum.per_axis", 5);
  r.check(c.quorum_per_axis >= 1, "key 'quorum.per_axis': must be >= 1");
  c.tail = r.real("truncation.tail", kDefaultTailTolerance);
  r.check(c.tail > 0.0 && c.tail < 1e-2, "key 'truncation.tail': must be in (0, 1e-2)");

  r.require("products");
  if (auto v = r.str("products")) {
    for (auto item : split_list(*v)) {
      const auto p = product_from(item);
      if (!p) {
        r.errors.push_back("key 'products': unknown product '" + std::string(item) + "'");
        continue;
      }
      if (model_ok && !product_allowed(c.model, *p))
        r.errors.push_back("product '" + std::string(item) + "' is not available for model " + model_name);
      if (std::find(c.products.begin(), c.products.end(), *p) != c.products.end())
        r.errors.push_back("product '" + std::string(item) + "' listed twice");
      else
        c.products.push_back(*p);
    }
  }

  if (model_ok) r.report_inapplicable(model_name);
  if (!r.errors.empty()) throw ValidationError(std::move(r.errors));
  return c;
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "name = " << c.name << "\n";
  o << "model = " << to_string(c.model) << "\n";
  switch (c.model) {
    case ModelKind::kerr:
      o << "model.kerr.lambda = " << format_double(c.kerr_lambda) << "\n";
      break;
    case ModelKind::ap:
      o << "model.ap.omega = " << format_double(c.ap_omega) << "\n"
        << "model.ap.omega0 = " << format_double(c.ap_omega0) << "\n"
        << "model.ap.gamma = " << format_double(c.ap_gamma) << "\n"
        << "model.ap.g = " << format_double(c.ap_g) << "\n";
      break;
    case ModelKind::lambda:
      o << "model.lambda.omega1 = " << format_double(c.lambda.omega_atomic[0]) << "\n"
        << "model.lambda.omega2 = " << format_double(c.lambda.omega_atomic[1]) << "\n"
        << "model.lambda.omega3 = " << format_double(c.lambda.omega_atomic[2]) << "\n"
        << "model.lambda.Omega1 = " << format_double(c.lambda.omega_fields[0]) << "\n"
        << "model.lambda.Omega2 = " << format_double(c.lambda.omega_fields[1]) << "\n"
        << "model.lambda.chi = " << format_double(c.lambda.chi_nl) << "\n"
        << "model.lambda.kappa = " << format_double(c.lambda.kappa) << "\n";
      break;
  }
  if (c.model == ModelKind::lambda) {
    o << format_complex_key("initial.field1.alpha", c.alpha1)
      << format_complex_key("initial.field2.alpha", c.alpha2);
    o << "tomogram.mode = " << c.tomogram_mode << "\n";
  } else if (c.field.kind == InitialMode::Kind::fock) {
    o << "initial.field.kind = fock\ninitial.field.n = " << c.field.n << "\n";
  } else {
    o << "initial.field.kind = coherent\n" << format_complex_key("initial.field.alpha", c.field.alpha);
  }
  if (c.model == ModelKind::ap) o << "initial.atom.level = " << c.atom_level << "\n";

  switch (c.time.kind) {
    case TimeSpec::Kind::list:
      o << "time.list = " << join_doubles(c.time.list) << "\n";
      break;
    case TimeSpec::Kind::range:
      o << "time.start = " << format_double(c.time.start) << "\n"
        << "time.stop = " << format_double(c.time.stop) << "\n"
        << "time.step = " << format_double(c.time.step) << "\n";
      break;
    case TimeSpec::Kind::revival:
      o << "time.revival.p = " << c.time.revival_p << "\n"
        << "time.revival.j = " << c.time.revival_j << "\n"
        << "time.revival.offsets = " << join_doubles(c.time.offsets) << "\n";
      break;
  }
  if (c.grid.x_max) o << "grid.x_max = " << format_double(*c.grid.x_max) << "\n";
  o << "grid.max_spacing = " << format_double(c.grid.max_spacing) << "\n"
    << "grid.n_theta = " << c.grid.n_theta << "\n";
  if (c.grid.beta_max) o << "wigner.beta_max = " << format_double(*c.grid.beta_max) << "\n";
  o << "wigner.points = " << c.grid.wigner_points << "\n"
    << "tomogram2d.theta_a = " << format_double(c.theta_a) << "\n"
    << "tomogram2d.theta_b = " << format_double(c.theta_b) << "\n"
    << "quorum.per_axis = " << c.quorum_per_axis << "\n"
    << "truncation.tail = " << format_double(c.tail) << "\n";
  o << "products = ";
  for (std::size_t i = 0; i < c.products.size(); ++i) o << (i ? ", " : "") << to_string(c.products[i]);
  o << "\n";
  if (c.output_dir) o << "output.dir = " << *c.output_dir << "\n";
  return o.str();
}

}  // namespace qtomo
