// Machine-readable run artifacts: surface CSV, fit JSON, density CSV.
#pragma once

#include <optional>
#include <string>

#include "qmcdens/harness.hpp"

namespace qmcdens {

// columns: sampler,s,log2n,log2h,iv,mise,isb,reps
void write_surface_csv(const IvSurface& surface, const std::string& path);

struct FitReport {
  IvFit fit;
  OptimalParams opt;
  std::optional<SecondStageResult> second;
  std::string model_name;
  std::string sampler;
  int s = 1;
  double ell0 = 0.0;
};

void write_fit_json(const FitReport& report, const std::string& path);
std::string fit_json_string(const FitReport& report);

// Table-1-style text summary (one row per parameter).
std::string fit_summary_table(const FitReport& report);

// columns: x,density
void write_density_csv(const std::vector<double>& xs,
                       const std::vector<double>& values,
                       const std::string& path);

}  // namespace qmcdens
