#pragma once

// End-to-end experiment runs: evolve the configured model, compute the
// requested products and write them with a manifest.

#include <filesystem>
#include <string>
#include <vector>

#include "qtomo/config.hpp"
#include "qtomo/indicators.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

std::string version();

/// Everything a run computes, before anything touches the disk.
struct ExperimentResult {
  ExperimentConfig config;
  std::vector<double> times;
  Dims dims;
  std::vector<std::string> labels;
  QuadratureGrid grid{1.0, 3};
  std::vector<double> thetas;
  std::vector<double> beta;  ///< Wigner axis, shared by beta1 and beta2
  std::vector<Tomogram> tomograms;
  std::vector<Tomogram2D> tomograms2d;
  std::vector<WignerGrid> wigners;
  std::vector<IndicatorSeries> series;

  const IndicatorSeries* find_series(const std::string& name) const;
};

ExperimentResult compute(const ExperimentConfig& config);

struct OutputBundle {
  std::filesystem::path directory;
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> files;  ///< data files in write order
};

/// Manifest text: `#` records describing the resolved run followed by the
/// canonical config echo, so parse_config(manifest) == config.
std::string manifest_text(const ExperimentResult& result, const std::string& created);

/// Writes into root / config.name, creating directories as needed.
OutputBundle write_bundle(const ExperimentResult& result, const std::filesystem::path& root);

OutputBundle run(const ExperimentConfig& config, const std::filesystem::path& root);

struct Preset {
  std::string name;
  std::string summary;
  std::string text;  ///< config document
};

const std::vector<Preset>& presets();
/// Throws Error for an unknown name.
const Preset& find_preset(const std::string& name);

}  // namespace qtomo
