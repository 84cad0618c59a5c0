#include "qmcdens/pointset.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qmcdens/rng.hpp"
#include "qmcdens/sobol.hpp"

namespace qmcdens {

const char* sampler_name(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::MC: return "mc";
    case SamplerKind::Stratified: return "strat";
    case SamplerKind::SobolLMS: return "lms";
    case SamplerKind::SobolNUS: return "nus";
  }
  return "?";
}

SamplerKind sampler_from_name(const std::string& name) {
  if (name == "mc") return SamplerKind::MC;
  if (name == "strat") return SamplerKind::Stratified;
  if (name == "lms") return SamplerKind::SobolLMS;
  if (name == "nus") return SamplerKind::SobolNUS;
  throw std::invalid_argument("unknown sampler: " + name);
}

PointSet sample_mc(int s, std::size_t n, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("sample_mc: s must be >= 1");
  if (n < 1) throw std::invalid_argument("sample_mc: n must be >= 1");
  PointSet ps;
  ps.spec = SamplerSpec{SamplerKind::MC, s, seed};
  ps.n = n;
  ps.s = s;
  ps.pts.resize(n * static_cast<std::size_t>(s));
  SplitMix64 rng(mix64(seed));
  for (auto& v : ps.pts) v = rng.next_double();
  return ps;
}

int stratified_q(int s, std::size_t target_n) {
  if (s < 1) throw std::invalid_argument("stratified_q: s must be >= 1");
  double q = std::pow(static_cast<double>(target_n), 1.0 / s);
  return static_cast<int>(std::llround(q));
}

PointSet sample_stratified(int s, std::size_t target_n, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("sample_stratified: s must be >= 1");
  if (s > 63 || target_n < (std::size_t{1} << s))
    throw std::invalid_argument("sample_stratified: need target_n >= 2^s");
  const int q = stratified_q(s, target_n);
  std::size_t n = 1;
  for (int j = 0; j < s; ++j) n *= static_cast<std::size_t>(q);

  PointSet ps;
  ps.spec = SamplerSpec{SamplerKind::Stratified, s, seed};
  ps.n = n;
  ps.s = s;
  ps.strat_q = q;
  ps.pts.resize(n * static_cast<std::size_t>(s));
  const double invq = 1.0 / q;
  std::vector<std::size_t> idx(static_cast<std::size_t>(s));
  for (std::size_t c = 0; c < n; ++c) {
    // lexicographic cell order: last coordinate varies fastest
    std::size_t rest = c;
    for (int j = s - 1; j >= 0; --j) {
      idx[j] = rest % static_cast<std::size_t>(q);
      rest /= static_cast<std::size_t>(q);
    }
    SplitMix64 rng(derive_stream(seed, c));
    for (int j = 0; j < s; ++j)
      ps.pts[c * s + j] = (static_cast<double>(idx[j]) + rng.next_double()) * invq;
  }
  return ps;
}

std::size_t snapped_n(const SamplerSpec& spec, std::size_t target_n) {
  if (spec.kind != SamplerKind::Stratified) return target_n;
  const int q = stratified_q(spec.s, target_n);
  std::size_t n = 1;
  for (int j = 0; j < spec.s; ++j) n *= static_cast<std::size_t>(q);
  return n;
}

PointSet generate(const SamplerSpec& spec, std::size_t target_n) {
  switch (spec.kind) {
    case SamplerKind::MC:
      return sample_mc(spec.s, target_n, spec.seed);
    case SamplerKind::Stratified:
      return sample_stratified(spec.s, target_n, spec.seed);
    case SamplerKind::SobolLMS:
    case SamplerKind::SobolNUS: {
      if (target_n == 0 || !std::has_single_bit(target_n))
        throw std::invalid_argument("generate: Sobol' samplers need n to be a power of 2");
      const int m = std::countr_zero(target_n);
      DigitalNet net = sobol_net(spec.s, m, spec.bit_depth);
      return spec.kind == SamplerKind::SobolLMS ? randomize_lms(net, spec.seed)
                                                : randomize_nus(net, spec.seed);
    }
  }
  throw std::logic_error("generate: bad sampler kind");
}

void write_points_csv(const PointSet& ps, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < ps.n; ++i) {
    for (int j = 0; j < ps.s; ++j)
      std::fprintf(f, "%s%.17g", j ? "," : "", ps(i, j));
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace qmcdens
