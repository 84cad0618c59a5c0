#include "qmcdens/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qmcdens/bandwidth.hpp"
#include "qmcdens/kde.hpp"
#include "qmcdens/rng.hpp"
#include "qmcdens/sobol.hpp"

namespace qmcdens {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// stream indices for per-surface child seeds
enum : std::uint64_t { kEvalStream = 0, kCellStream = 1 };

std::vector<double> eval_points(double a, double b, int n_e, std::uint64_t seed) {
  SplitMix64 rng(derive_stream(seed, kEvalStream));
  std::vector<double> xs(static_cast<std::size_t>(n_e));
  for (int e = 0; e < n_e; ++e)
    xs[e] = a + (b - a) * (static_cast<double>(e) + rng.next_double()) / n_e;
  return xs;
}

struct CellStats {
  double iv, se_iv, mise, isb;
};

// IV/MISE estimates plus jackknife se from the replicate-by-evalpoint matrix
// f[r*n_e + e] for one (n, h) cell.
CellStats cell_stats(const std::vector<double>& f, int n_r, int n_e,
                     double width, const std::vector<double>& fexact) {
  std::vector<double> mean_e(static_cast<std::size_t>(n_e), 0.0);
  for (int r = 0; r < n_r; ++r)
    for (int e = 0; e < n_e; ++e) mean_e[e] += f[static_cast<std::size_t>(r) * n_e + e];
  for (int e = 0; e < n_e; ++e) mean_e[e] /= n_r;

  std::vector<double> ss_e(static_cast<std::size_t>(n_e), 0.0);
  for (int r = 0; r < n_r; ++r)
    for (int e = 0; e < n_e; ++e) {
      double d = f[static_cast<std::size_t>(r) * n_e + e] - mean_e[e];
      ss_e[e] += d * d;
    }

  CellStats out{0.0, 0.0, kNaN, kNaN};
  double iv_sum = 0.0;
  for (int e = 0; e < n_e; ++e) iv_sum += ss_e[e];
  out.iv = width * iv_sum / (static_cast<double>(n_e) * (n_r - 1));

  // delete-one-replicate jackknife on the IV estimator
  if (n_r >= 3) {
    const double nr = n_r;
    double jsum = 0.0, jsq = 0.0;
    for (int r = 0; r < n_r; ++r) {
      double ss_del = 0.0;
      for (int e = 0; e < n_e; ++e) {
        double d = f[static_cast<std::size_t>(r) * n_e + e] - mean_e[e];
        ss_del += ss_e[e] - d * d * nr / (nr - 1.0);
      }
      double iv_del = width * ss_del / (static_cast<double>(n_e) * (n_r - 2));
      jsum += iv_del;
      jsq += iv_del * iv_del;
    }
    double jmean = jsum / nr;
    double var = (nr - 1.0) / nr * (jsq - nr * jmean * jmean);
    out.se_iv = std::sqrt(std::max(var, 0.0));
  }

  if (!fexact.empty()) {
    double mse_sum = 0.0;
    for (int r = 0; r < n_r; ++r)
      for (int e = 0; e < n_e; ++e) {
        double d = f[static_cast<std::size_t>(r) * n_e + e] - fexact[e];
        mse_sum += d * d;
      }
    out.mise = width * mse_sum / (static_cast<double>(n_e) * n_r);
    out.isb = out.mise - out.iv * (n_r - 1.0) / n_r;
  }
  return out;
}

// Shared core for estimate_surface and second_stage: for each n, n_r
// replicate samples, each reused across h_of_n(n_index); results are
// aggregated in replicate order regardless of thread count.
IvSurface run_surface(const Model& model, const SamplerSpec& sampler_in,
                      std::span<const std::size_t> n_targets,
                      const std::function<std::vector<double>(std::size_t, std::size_t)>& h_of_n,
                      int n_r, int n_e, double a, double b, std::uint64_t seed,
                      int threads) {
  if (n_r < 2) throw std::invalid_argument("estimate_surface: need n_r >= 2");
  if (n_e < 1) throw std::invalid_argument("estimate_surface: need n_e >= 1");
  if (!(a < b)) throw std::invalid_argument("estimate_surface: need a < b");
  if (sampler_in.s != model.s)
    throw std::invalid_argument("estimate_surface: sampler and model dimension differ");

  const GaussianKernel kernel;
  IvSurface surf;
  surf.model_name = model.name;
  surf.sampler = sampler_in.kind;
  surf.s = model.s;
  surf.a = a;
  surf.b = b;

  std::vector<double> xs = eval_points(a, b, n_e, seed);
  std::vector<double> fexact;
  if (model.has_exact_density()) {
    fexact.resize(xs.size());
    for (std::size_t e = 0; e < xs.size(); ++e) fexact[e] = model.exact_density(xs[e]);
  }

  std::size_t max_nh = 0;
  for (std::size_t ni = 0; ni < n_targets.size(); ++ni)
    max_nh = std::max(max_nh, h_of_n(snapped_n(sampler_in, n_targets[ni]), ni).size());
  surf.n_h = static_cast<int>(max_nh);

  for (std::size_t ni = 0; ni < n_targets.size(); ++ni) {
    const std::size_t actual_n = snapped_n(sampler_in, n_targets[ni]);
    const std::vector<double> hs = h_of_n(actual_n, ni);
    const std::uint64_t n_seed =
        derive_stream(derive_stream(seed, kCellStream), static_cast<std::uint64_t>(ni));

    // f values for every (replicate, h, eval point)
    std::vector<std::vector<double>> fvals(hs.size());
    for (auto& v : fvals)
      v.resize(static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_e));

    parallel_for(static_cast<std::size_t>(n_r), threads, [&](std::size_t rep) {
      SamplerSpec child = sampler_in.with_seed(derive_stream(n_seed, rep));
      PointSet ps = generate(child, n_targets[ni]);
      std::vector<double> sample(ps.n);
      for (std::size_t i = 0; i < ps.n; ++i) sample[i] = model.eval(ps.row(i));
      std::sort(sample.begin(), sample.end());
      for (std::size_t hi = 0; hi < hs.size(); ++hi) {
        std::vector<double> fe = kde_evaluate(sample, hs[hi], kernel, xs);
        std::copy(fe.begin(), fe.end(),
                  fvals[hi].begin() + static_cast<std::size_t>(rep) * n_e);
      }
    });

    for (std::size_t hi = 0; hi < hs.size(); ++hi) {
      CellStats st = cell_stats(fvals[hi], n_r, n_e, b - a, fexact);
      surf.cells.push_back(
          {actual_n, hs[hi], st.iv, st.se_iv, st.mise, st.isb, n_r});
    }
  }
  return surf;
}

// OLS of y on centered regressors; returns {intercept, slopes...}, R^2.
struct OlsResult {
  std::vector<double> coef;
  double R2;
};

OlsResult ols(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
  const std::size_t n = y.size();
  const std::size_t p = x.size();
  std::vector<double> xm(p, 0.0);
  double ym = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) xm[j] += x[j][i];
    xm[j] /= static_cast<double>(n);
  }
  for (double v : y) ym += v;
  ym /= static_cast<double>(n);

  // normal equations on centered data
  std::vector<double> M(p * p, 0.0), rhs(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t i = 0; i < n; ++i)
        M[j * p + k] += (x[j][i] - xm[j]) * (x[k][i] - xm[k]);
    for (std::size_t i = 0; i < n; ++i) rhs[j] += (x[j][i] - xm[j]) * (y[i] - ym);
  }

  // Gaussian elimination with partial pivoting
  std::vector<double> A(M);
  std::vector<double> bvec(rhs);
  std::vector<std::size_t> piv(p);
  for (std::size_t j = 0; j < p; ++j) piv[j] = j;
  double scale = 0.0;
  for (double v : M) scale = std::max(scale, std::fabs(v));
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t best = c;
    for (std::size_t r = c + 1; r < p; ++r)
      if (std::fabs(A[r * p + c]) > std::fabs(A[best * p + c])) best = r;
    if (std::fabs(A[best * p + c]) <= 1e-12 * std::max(scale, 1.0))
      throw std::invalid_argument("fit: singular design (no variation in a regressor)");
    if (best != c) {
      for (std::size_t k = 0; k < p; ++k) std::swap(A[c * p + k], A[best * p + k]);
      std::swap(bvec[c], bvec[best]);
    }
    for (std::size_t r = c + 1; r < p; ++r) {
      double f = A[r * p + c] / A[c * p + c];
      for (std::size_t k = c; k < p; ++k) A[r * p + k] -= f * A[c * p + k];
      bvec[r] -= f * bvec[c];
    }
  }
  std::vector<double> beta(p, 0.0);
  for (std::size_t c = p; c-- > 0;) {
    double v = bvec[c];
    for (std::size_t k = c + 1; k < p; ++k) v -= A[c * p + k] * beta[k];
    beta[c] = v / A[c * p + c];
  }

  double intercept = ym;
  for (std::size_t j = 0; j < p; ++j) intercept -= beta[j] * xm[j];

  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = intercept;
    for (std::size_t j = 0; j < p; ++j) pred += beta[j] * x[j][i];
    sse += (y[i] - pred) * (y[i] - pred);
    sst += (y[i] - ym) * (y[i] - ym);
  }
  OlsResult out;
  out.coef.push_back(intercept);
  for (double bj : beta) out.coef.push_back(bj);
  out.R2 = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  return out;
}

}  // namespace

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int k = std::min<int>(threads, static_cast<int>(count));
  pool.reserve(static_cast<std::size_t>(k));
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

double round_half(double x) { return std::round(2.0 * x) / 2.0; }

std::vector<double> ExperimentGrid::h_values() const {
  if (std::round(2.0 * ell0) != 2.0 * ell0)
    throw std::invalid_argument("ExperimentGrid: 2*ell0 must be an integer");
  std::vector<double> hs(static_cast<std::size_t>(n_h));
  for (int j = 0; j < n_h; ++j) hs[j] = std::exp2(-ell0 + 0.5 * j);
  return hs;
}

ExperimentGrid ExperimentGrid::desk(double a, double b, std::uint64_t seed) {
  ExperimentGrid g;
  g.n_values = {1u << 10, 1u << 11, 1u << 12, 1u << 13, 1u << 14, 1u << 15};
  g.n_r = 50;
  g.a = a;
  g.b = b;
  g.seed = seed;
  return g;
}

ExperimentGrid ExperimentGrid::paper(double a, double b, std::uint64_t seed) {
  ExperimentGrid g;
  g.n_values = {1u << 14, 1u << 15, 1u << 16, 1u << 17, 1u << 18, 1u << 19};
  g.n_r = 100;
  g.a = a;
  g.b = b;
  g.seed = seed;
  return g;
}

IvSurface estimate_surface(const Model& model, const SamplerSpec& sampler,
                           const ExperimentGrid& grid, int threads) {
  std::vector<double> hs = grid.h_values();
  return run_surface(
      model, sampler, grid.n_values,
      [&hs](std::size_t, std::size_t) { return hs; }, grid.n_r, grid.n_e,
      grid.a, grid.b, grid.seed, threads);
}

IvFit fit_iv_model(const IvSurface& surface, double B) {
  std::vector<double> logn, logh, logiv;
  for (const auto& c : surface.cells) {
    if (!(c.iv > 0.0)) continue;
    logn.push_back(std::log2(static_cast<double>(c.n)));
    logh.push_back(std::log2(c.h));
    logiv.push_back(std::log2(c.iv));
  }
  if (logiv.size() < 6)
    throw std::invalid_argument("fit_iv_model: need at least 6 cells with positive IV");
  OlsResult r = ols({logn, logh}, logiv);
  IvFit fit;
  fit.C = std::exp2(r.coef[0]);
  fit.beta = -r.coef[1];
  fit.delta = -r.coef[2];
  fit.R2 = r.R2;
  fit.B = B;
  return fit;
}

OptimalParams derive_optimal(const IvFit& fit) {
  constexpr double alpha = 4.0;
  if (!(fit.B > 0.0)) throw std::invalid_argument("derive_optimal: B must be > 0");
  if (!(fit.C > 0.0) || !(fit.delta > 0.0))
    throw std::invalid_argument("derive_optimal: fit must have C > 0 and delta > 0");
  OptimalParams p;
  p.kappa_star = std::pow(fit.C * fit.delta / (fit.B * alpha), 1.0 / (alpha + fit.delta));
  p.gamma_star = fit.beta / (alpha + fit.delta);
  p.K_star = fit.C * std::pow(p.kappa_star, -fit.delta) +
             fit.B * std::pow(p.kappa_star, alpha);
  p.nu_star = alpha * fit.beta / (alpha + fit.delta);
  p.ell_star = 19.0 * p.gamma_star - std::log2(p.kappa_star);
  return p;
}

SecondStageResult second_stage(const Model& model, const SamplerSpec& sampler,
                               double kappa, double gamma,
                               std::span<const std::size_t> n_values, int n_r,
                               int n_e, std::uint64_t seed, int threads) {
  if (!(kappa > 0.0)) throw std::invalid_argument("second_stage: kappa must be > 0");
  IvSurface surf = run_surface(
      model, sampler, n_values,
      [kappa, gamma](std::size_t actual_n, std::size_t) {
        return std::vector<double>{
            kappa * std::pow(static_cast<double>(actual_n), -gamma)};
      },
      n_r, n_e, model.a, model.b, seed, threads);

  SecondStageResult res;
  res.from_iv = !model.has_exact_density();
  res.cells = surf.cells;

  std::vector<double> logn, logm;
  for (const auto& c : surf.cells) {
    double v = res.from_iv ? c.iv : c.mise;
    if (!(v > 0.0)) continue;
    logn.push_back(std::log2(static_cast<double>(c.n)));
    logm.push_back(std::log2(v));
  }
  if (logm.size() < 2)
    throw std::invalid_argument("second_stage: need at least 2 usable n values");
  OlsResult r = ols({logn}, logm);
  res.K_tilde = std::exp2(r.coef[0]);
  res.nu_tilde = -r.coef[1];
  res.e19_extrapolated = 19.0 * res.nu_tilde - std::log2(res.K_tilde);

  const auto& last = surf.cells.back();
  res.e_max = -std::log2(res.from_iv ? last.iv : last.mise);
  res.log2_n_max = static_cast<int>(std::lround(std::log2(static_cast<double>(last.n))));
  return res;
}

double estimate_B(const Model& model, std::uint64_t seed,
                  const GaussianKernel& kernel, int log2_n) {
  SamplerSpec spec{SamplerKind::SobolLMS, model.s, derive_stream(seed, 0xB), 31};
  PointSet ps = generate(spec, std::size_t{1} << log2_n);
  std::vector<double> sample(ps.n);
  for (std::size_t i = 0; i < ps.n; ++i) sample[i] = model.eval(ps.row(i));
  PluginResult plug = plugin_chain(sample, model.a, model.b, kernel);
  return plug.B_hat;
}

double pilot_ell0(const Model& model, const SamplerSpec& sampler,
                  std::size_t n_ref, std::size_t n_target,
                  const GaussianKernel& kernel, std::uint64_t seed,
                  int threads) {
  const double B = estimate_B(model, seed, kernel);

  // coarse sampler-specific IV scan over a wide bandwidth range
  std::vector<std::size_t> pilot_n{std::max<std::size_t>(n_ref / 16, 64),
                                   std::max<std::size_t>(n_ref / 4, 128), n_ref};
  std::vector<double> pilot_h;
  for (double ell = 1.0; ell <= 10.0; ell += 1.0) pilot_h.push_back(std::exp2(-ell));

  ExperimentGrid pg;
  pg.n_values = pilot_n;
  pg.n_r = 24;
  pg.n_e = 512;
  pg.a = model.a;
  pg.b = model.b;
  pg.seed = derive_stream(seed, 0xF);
  IvSurface coarse = run_surface(
      model, sampler, pg.n_values,
      [&pilot_h](std::size_t, std::size_t) { return pilot_h; }, pg.n_r, pg.n_e,
      pg.a, pg.b, pg.seed, threads);

  auto ell_star_at = [n_target](const IvFit& fit) {
    OptimalParams p = derive_optimal(fit);
    return p.gamma_star * std::log2(static_cast<double>(n_target)) -
           std::log2(p.kappa_star);
  };
  double ell = ell_star_at(fit_iv_model(coarse, B));

  // refit on the cells near the anticipated optimum; the wide scan can be
  // curved, the local fit is what the real grid will see
  IvSurface local = coarse;
  local.cells.clear();
  for (const auto& c : coarse.cells)
    if (std::fabs(-std::log2(c.h) - ell) <= 2.0 && c.iv > 0.0)
      local.cells.push_back(c);
  bool n_varies = false, h_varies = false;
  for (const auto& c : local.cells) {
    if (c.n != local.cells.front().n) n_varies = true;
    if (c.h != local.cells.front().h) h_varies = true;
  }
  if (local.cells.size() >= 6 && n_varies && h_varies)
    ell = ell_star_at(fit_iv_model(local, B));

  return std::clamp(round_half(ell) + 1.0, 1.0, 24.0);
}

}  // namespace qmcdens
