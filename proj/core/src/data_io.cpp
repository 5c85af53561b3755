#include "qtomo/data_io.hpp"

#include <fstream>
#include <sstream>

#include "qtomo/config.hpp"
#include "qtomo/error.hpp"

namespace qtomo {

namespace {

void header(std::string& out, const std::string& product) {
  out += "# qtomo-data 1\n# product ";
  out += product;
  out += '\n';
}

Axis axis_of(const std::string& name, std::span<const double> values) {
  if (values.empty()) throw DimensionError("axis '" + name + "' is empty");
  return {name, values.front(), values.back(), values.size()};
}

}  // namespace

std::string format_grid(const GridFile& f) {
  if (f.axes.size() != 2) throw DimensionError("format_grid: expected two axes");
  if (static_cast<std::size_t>(f.values.rows()) != f.axes[0].count ||
      static_cast<std::size_t>(f.values.cols()) != f.axes[1].count)
    throw DimensionError("format_grid: values do not match axis counts");
  std::string out;
  header(out, f.product);
  out += "# time " + format_double(f.time) + '\n';
  for (const Axis& a : f.axes)
    out += "# axis " + a.name + ' ' + format_double(a.min) + ' ' + format_double(a.max) + ' ' +
           std::to_string(a.count) + '\n';
  for (Eigen::Index r = 0; r < f.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < f.values.cols(); ++c) {
      if (c) out += ' ';
      out += format_double(f.values(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string format_series(const IndicatorSeries& s, const std::string& time_label) {
  if (s.times.size() != s.values.size()) throw DimensionError("format_series: length mismatch");
  std::string out;
  header(out, s.name);
  out += "# columns " + time_label + ' ' + s.name + '\n';
  for (std::size_t i = 0; i < s.times.size(); ++i)
    out += format_double(s.times[i]) + ' ' + format_double(s.values[i]) + '\n';
  return out;
}

GridFile grid_file(const Tomogram& t, double time) {
  const auto x = t.grid.points();
  return {"tomogram", time, {axis_of("theta", t.thetas), axis_of("X", x)}, t.values};
}

GridFile grid_file(const Tomogram2D& t, double time) {
  return {"tomogram2d", time,
          {axis_of("X_a", t.grid_a.points()), axis_of("X_b", t.grid_b.points())}, t.values};
}

GridFile grid_file(const WignerGrid& w, double time) {
  return {"wigner", time, {axis_of("beta1", w.beta1), axis_of("beta2", w.beta2)}, w.values};
}

GridFile parse_grid(const std::string& text) {
  GridFile f;
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool magic = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (line.starts_with('#')) {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "qtomo-data") magic = true;
      else if (key == "product") ls >> f.product;
      else if (key == "time") ls >> f.time;
      else if (key == "axis") {
        Axis a;
        ls >> a.name >> a.min >> a.max >> a.count;
        f.axes.push_back(a);
      }
      continue;
    }
    std::vector<double> row;
    double v = 0.0;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (!magic || f.axes.size() != 2) throw Error("parse_grid: missing header records");
  if (rows.size() != f.axes[0].count) throw Error("parse_grid: row count does not match axis");
  f.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(f.axes[1].count));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != f.axes[1].count) throw Error("parse_grid: ragged row " + std::to_string(r));
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      f.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return f;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qtomo
