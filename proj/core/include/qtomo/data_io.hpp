#pragma once

// Plain-text data files. Every file opens with `#` header records:
//
//   # qtomo-data 1
//   # product <name>
//   # time <t>                      (grid files)
//   # axis <name> <min> <max> <count>   (one per axis, slow axis first)
//   # columns <name> <name>         (series files)
//
// followed by whitespace-separated values. Grid rows run over the slow axis,
// columns over the fast one. Numbers use 17 significant digits.

#include <filesystem>
#include <string>
#include <vector>

#include "qtomo/fock.hpp"
#include "qtomo/indicators.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

struct GridFile {
  std::string product;
  double time = 0.0;
  std::vector<Axis> axes;  ///< exactly two, slow first
  Eigen::MatrixXd values;
};

std::string format_grid(const GridFile& file);
std::string format_series(const IndicatorSeries& series, const std::string& time_label);

GridFile grid_file(const Tomogram& t, double time);
GridFile grid_file(const Tomogram2D& t, double time);
GridFile grid_file(const WignerGrid& w, double time);

/// Reads back a grid written by format_grid. Throws Error on malformed input.
GridFile parse_grid(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace qtomo
