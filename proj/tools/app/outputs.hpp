#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sfmb/ensemble.hpp"
#include "sfmb/fitting.hpp"

namespace sfmb::app {

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json fit_to_json(const FitResult& fit);
nlohmann::json scalars_to_json(const RealizationScalars& s);
nlohmann::json summary_to_json(const EnsembleSpec& spec, const EnsembleSummary& summary,
                               const std::vector<std::string>& warnings);

/// summary.json, intensity.csv, spectrum.csv, histograms.csv and
/// realizations.csv in `dir`.
void write_ensemble(const std::filesystem::path& dir, const EnsembleSpec& spec,
                    const EnsembleSummary& summary, const std::vector<std::string>& warnings);

}  // namespace sfmb::app
