// Point sets over [0,1)^s: crude Monte Carlo, stratified subcube sampling,
// and randomized Sobol' nets (see sobol.hpp for the digital-net machinery).
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qmcdens {

enum class SamplerKind { MC, Stratified, SobolLMS, SobolNUS };

const char* sampler_name(SamplerKind kind);
SamplerKind sampler_from_name(const std::string& name);  // mc|strat|lms|nus

struct SamplerSpec {
  SamplerKind kind = SamplerKind::MC;
  int s = 1;
  std::uint64_t seed = 0;
  int bit_depth = 31;

  SamplerSpec with_seed(std::uint64_t sd) const {
    SamplerSpec r = *this;
    r.seed = sd;
    return r;
  }
};

// Immutable n x s matrix of uniforms plus the spec that produced it.
// Safe to share across threads.
struct PointSet {
  SamplerSpec spec;
  std::size_t n = 0;
  int s = 0;
  int strat_q = 0;  // Stratified only: n == strat_q^s
  std::vector<double> pts;  // row-major

  double operator()(std::size_t i, int j) const {
    return pts[i * static_cast<std::size_t>(s) + static_cast<std::size_t>(j)];
  }
  std::span<const double> row(std::size_t i) const {
    return {pts.data() + i * static_cast<std::size_t>(s),
            static_cast<std::size_t>(s)};
  }
};

// n x s independent uniforms, deterministic given seed.
PointSet sample_mc(int s, std::size_t n, std::uint64_t seed);

// One uniform point per cell of the q^s congruent-subcube partition with
// q = round(target_n^(1/s)); cells enumerated in lexicographic index order.
// Requires target_n >= 2^s.
PointSet sample_stratified(int s, std::size_t target_n, std::uint64_t seed);

// round(target_n^(1/s)) as used by sample_stratified.
int stratified_q(int s, std::size_t target_n);

// The n a sampler will actually produce for a requested target_n
// (q^s for Stratified, target_n otherwise).
std::size_t snapped_n(const SamplerSpec& spec, std::size_t target_n);

// Dispatch on spec.kind.  Sobol' kinds require target_n to be a power of 2.
PointSet generate(const SamplerSpec& spec, std::size_t target_n);

// CSV dump, one row per point, full decimal precision.
void write_points_csv(const PointSet& ps, const std::string& path);

}  // namespace qmcdens
