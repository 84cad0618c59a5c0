// Experimental protocol: IV/ISB/MISE surfaces over an (n, h) grid with
// replicated sampling, log-log regression of the IV model, optimal-bandwidth
// derivation, and out-of-sample second-stage validation.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmcdens/kernel.hpp"
#include "qmcdens/models.hpp"
#include "qmcdens/pointset.hpp"

namespace qmcdens {

struct ExperimentGrid {
  std::vector<std::size_t> n_values;  // targets; Stratified snaps to q^s
  double ell0 = 4.5;                  // h_j = 2^{-ell0 + j/2}, j = 0..n_h-1
  int n_h = 6;
  int n_r = 100;    // replications per (n, h)
  int n_e = 1024;   // stratified evaluation points over [a, b]
  double a = -2.0, b = 2.0;
  std::uint64_t seed = 1;

  std::vector<double> h_values() const;

  // n = 2^10..2^15, n_r = 50
  static ExperimentGrid desk(double a, double b, std::uint64_t seed);
  // the full grid: n = 2^14..2^19, n_r = 100
  static ExperimentGrid paper(double a, double b, std::uint64_t seed);
};

struct SurfaceCell {
  std::size_t n;      // actual sample size
  double h;
  double iv;
  double se_iv;       // delete-one-replicate jackknife standard error
  double mise;        // NaN when the model has no exact density
  double isb;         // MISE - IV (n_r-1)/n_r; NaN when MISE is
  int reps;
};

struct IvSurface {
  std::string model_name;
  SamplerKind sampler = SamplerKind::MC;
  int s = 1;
  double a = 0.0, b = 1.0;
  int n_h = 1;
  std::vector<SurfaceCell> cells;  // n-major, h-minor

  const SurfaceCell& cell(std::size_t n_index, int h_index) const {
    return cells[n_index * static_cast<std::size_t>(n_h) + h_index];
  }
};

// Estimate IV (and MISE/ISB when the exact density is known) on the grid.
// One sorted sample per replicate is reused across all h; the evaluation
// points x_e = a + (b-a)(e + V_e)/n_e are drawn once per surface.
IvSurface estimate_surface(const Model& model, const SamplerSpec& sampler,
                           const ExperimentGrid& grid, int threads = 1);

// IV ~ C n^{-beta} h^{-delta} fitted by OLS in log2 scale.
struct IvFit {
  double C, beta, delta, R2;
  double B;  // AISB constant carried along for derive_optimal
};

IvFit fit_iv_model(const IvSurface& surface, double B);

// kappa* = (C delta / (B alpha))^{1/(alpha+delta)}, gamma* = beta/(alpha+delta),
// K* = C kappa*^{-delta} + B kappa*^alpha, nu* = alpha beta/(alpha+delta),
// with alpha = 4; ell* = -log2 of the optimal h at n = 2^19.
struct OptimalParams {
  double kappa_star, gamma_star, K_star, nu_star, ell_star;
};

OptimalParams derive_optimal(const IvFit& fit);

// Out-of-sample validation along h(n) = kappa n^{-gamma}: fresh replicates at
// each n, then OLS of log2(MISE) on log2(n).  Falls back to IV when the model
// has no exact density (from_iv = true).
struct SecondStageResult {
  double K_tilde, nu_tilde;
  double e_max;             // -log2(MISE) at the largest n
  int log2_n_max;           // e_max is "e19" when this is 19
  double e19_extrapolated;  // 19 nu_tilde - log2 K_tilde
  bool from_iv;
  std::vector<SurfaceCell> cells;  // one per n
};

SecondStageResult second_stage(const Model& model, const SamplerSpec& sampler,
                               double kappa, double gamma,
                               std::span<const std::size_t> n_values, int n_r,
                               int n_e, std::uint64_t seed, int threads = 1);

// Automated stand-in for the paper's human pilot runs: a plug-in estimate of
// B plus a coarse sampler-specific IV fit locate the anticipated optimal
// bandwidth at n_target, and the grid anchor brackets it:
//   ell0 = round_half(-log2 h*(n_target)) + 1.
double pilot_ell0(const Model& model, const SamplerSpec& sampler,
                  std::size_t n_ref, std::size_t n_target,
                  const GaussianKernel& kernel, std::uint64_t seed,
                  int threads = 1);

// Plug-in B estimate from the default source (Sobol'+LMS sample of 2^16).
double estimate_B(const Model& model, std::uint64_t seed,
                  const GaussianKernel& kernel, int log2_n = 16);

double round_half(double x);

// Deterministic helper: run fn(i) for i in [0, count) on `threads` threads.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace qmcdens
