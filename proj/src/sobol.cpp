#include "qmcdens/sobol.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qmcdens/errors.hpp"
#include "qmcdens/rng.hpp"

namespace qmcdens {

DirectionTable DirectionTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open direction-number table: " + path);
  DirectionTable table;
  std::string line;
  int expected_dim = 2;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int dim = 0, degree = 0;
    std::uint32_t a = 0;
    if (!(ls >> dim >> degree >> a))
      throw std::runtime_error("malformed direction table line: " + line);
    if (dim != expected_dim)
      throw std::runtime_error("direction table dimensions out of order at dim " +
                               std::to_string(dim));
    Dim d;
    d.degree = degree;
    d.a = a;
    d.m.resize(degree);
    for (int k = 0; k < degree; ++k) {
      if (!(ls >> d.m[k]))
        throw std::runtime_error("missing m values at dim " + std::to_string(dim));
      if (d.m[k] % 2 == 0 || d.m[k] >= (1u << (k + 1)))
        throw std::runtime_error("invalid m value at dim " + std::to_string(dim));
    }
    table.dims.push_back(std::move(d));
    ++expected_dim;
  }
  if (table.dims.empty())
    throw std::runtime_error("empty direction-number table: " + path);
  return table;
}

const DirectionTable& DirectionTable::standard() {
  static const DirectionTable table = [] {
    if (const char* env = std::getenv("QMCDENS_SOBOL_FILE"))
      return load(env);
    return load(std::string(QMCDENS_DATA_DIR) + "/sobol_directions.txt");
  }();
  return table;
}

void DigitalNet::point_bits(std::uint64_t i, std::uint32_t* out) const {
  for (int j = 0; j < s; ++j) out[j] = 0;
  const std::uint32_t* c = cols.data();
  for (int k = 0; k < m && (i >> k) != 0; ++k) {
    if ((i >> k) & 1u) {
      for (int j = 0; j < s; ++j) out[j] ^= c[static_cast<std::size_t>(j) * m + k];
    }
  }
}

DigitalNet sobol_net(int s, int m, int bit_depth, const DirectionTable& table) {
  if (s < 1) throw std::invalid_argument("sobol_net: s must be >= 1");
  if (s > table.max_dimension())
    throw unsupported_dimension_error(
        "sobol_net: dimension " + std::to_string(s) +
        " exceeds direction-number table limit " +
        std::to_string(table.max_dimension()));
  if (bit_depth < 1 || bit_depth > 31)
    throw std::invalid_argument("sobol_net: bit_depth must be in 1..31");
  if (m < 0 || m > bit_depth)
    throw std::invalid_argument("sobol_net: need 0 <= m <= bit_depth");

  DigitalNet net;
  net.s = s;
  net.m = m;
  net.bit_depth = bit_depth;
  net.cols.assign(static_cast<std::size_t>(s) * m, 0);

  // direction integers v_k = m_k * 2^(bit_depth - k), k = 1..m
  std::vector<std::uint32_t> v(static_cast<std::size_t>(std::max(m, 1)));
  for (int j = 0; j < s; ++j) {
    if (j == 0) {
      for (int k = 0; k < m; ++k) v[k] = 1u << (bit_depth - 1 - k);
    } else {
      const auto& dim = table.dims[j - 1];
      const int d = dim.degree;
      for (int k = 0; k < m; ++k) {
        if (k < d) {
          v[k] = dim.m[k] << (bit_depth - 1 - k);
        } else {
          // Bratley-Fox recurrence on direction integers:
          // v_k = v_{k-d} ^ (v_{k-d} >> d) ^ sum_i a_i v_{k-i}
          std::uint32_t val = v[k - d] ^ (v[k - d] >> d);
          for (int i = 1; i < d; ++i) {
            if ((dim.a >> (d - 1 - i)) & 1u) val ^= v[k - i];
          }
          v[k] = val;
        }
      }
    }
    for (int k = 0; k < m; ++k) net.cols[static_cast<std::size_t>(j) * m + k] = v[k];
  }
  return net;
}

namespace {

PointSet make_pointset(const DigitalNet& net, SamplerKind kind, std::uint64_t seed) {
  PointSet ps;
  ps.spec.kind = kind;
  ps.spec.s = net.s;
  ps.spec.seed = seed;
  ps.spec.bit_depth = net.bit_depth;
  ps.n = std::size_t{1} << net.m;
  ps.s = net.s;
  ps.pts.resize(ps.n * static_cast<std::size_t>(net.s));
  return ps;
}

}  // namespace

PointSet net_points(const DigitalNet& net) {
  PointSet ps = make_pointset(net, SamplerKind::SobolLMS, 0);
  const double scale = std::ldexp(1.0, -net.bit_depth);
  std::vector<std::uint32_t> x(net.s, 0u);
  for (std::size_t i = 0; i < ps.n; ++i) {
    if (i > 0) {
      // natural order: index i-1 -> i flips bits 0..ctz(i)
      std::uint64_t changed = i ^ (i - 1);
      for (int k = 0; k < net.m && (changed >> k); ++k)
        for (int j = 0; j < net.s; ++j) x[j] ^= net.col(j, k);
    }
    for (int j = 0; j < net.s; ++j)
      ps.pts[i * net.s + j] = static_cast<double>(x[j]) * scale;
  }
  return ps;
}

PointSet randomize_lms(const DigitalNet& net, std::uint64_t seed) {
  const int w = net.bit_depth;
  PointSet ps = make_pointset(net, SamplerKind::SobolLMS, seed);
  const double scale = std::ldexp(1.0, -w);

  // Scrambled generating matrices L_j C_j and per-dimension digital shifts.
  std::vector<std::uint32_t> scols(net.cols.size());
  std::vector<std::uint32_t> shift(net.s);
  std::vector<std::uint32_t> rows(w);
  for (int j = 0; j < net.s; ++j) {
    SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(j)));
    // Row r (digit r+1, MSB first) has ones in columns r+1..w-1 of the
    // lower triangle plus the unit diagonal, as a mask on column words.
    for (int r = 0; r < w; ++r) {
      std::uint32_t below = 0;
      if (r > 0) below = static_cast<std::uint32_t>(rng.next() >> (64 - r)) << (w - r);
      rows[r] = below | (1u << (w - 1 - r));
    }
    shift[j] = static_cast<std::uint32_t>(rng.next() >> (64 - w));
    for (int k = 0; k < net.m; ++k) {
      std::uint32_t c = net.col(j, k);
      std::uint32_t out = 0;
      for (int r = 0; r < w; ++r)
        out |= static_cast<std::uint32_t>(std::popcount(rows[r] & c) & 1) << (w - 1 - r);
      scols[static_cast<std::size_t>(j) * net.m + k] = out;
    }
  }

  std::vector<std::uint32_t> x(shift);  // point 0 = shift
  for (std::size_t i = 0; i < ps.n; ++i) {
    if (i > 0) {
      std::uint64_t changed = i ^ (i - 1);
      for (int k = 0; k < net.m && (changed >> k); ++k)
        for (int j = 0; j < net.s; ++j) x[j] ^= scols[static_cast<std::size_t>(j) * net.m + k];
    }
    for (int j = 0; j < net.s; ++j)
      ps.pts[i * net.s + j] = static_cast<double>(x[j]) * scale;
  }
  return ps;
}

PointSet randomize_nus(const DigitalNet& net, std::uint64_t seed) {
  const int w = net.bit_depth;
  PointSet ps = make_pointset(net, SamplerKind::SobolNUS, seed);
  const double scale = std::ldexp(1.0, -w);

  std::vector<std::uint64_t> key(net.s);
  for (int j = 0; j < net.s; ++j)
    key[j] = derive_stream(seed, static_cast<std::uint64_t>(j));

  std::vector<std::uint32_t> x(net.s, 0u);
  for (std::size_t i = 0; i < ps.n; ++i) {
    if (i > 0) {
      std::uint64_t changed = i ^ (i - 1);
      for (int k = 0; k < net.m && (changed >> k); ++k)
        for (int j = 0; j < net.s; ++j) x[j] ^= net.col(j, k);
    }
    for (int j = 0; j < net.s; ++j) {
      const std::uint32_t b = x[j];
      std::uint32_t flips = 0;
      // One permutation bit per node of the digit tree; node ids are the
      // original digit prefixes with a depth marker bit.
      for (int d = 0; d < w; ++d) {
        std::uint64_t node = (std::uint64_t{1} << d) | (b >> (w - d));
        flips |= static_cast<std::uint32_t>(derive_stream(key[j], node) & 1u) << (w - 1 - d);
      }
      // fresh uniform digits below the tree depth
      double tail = to_unit_double(derive_stream(key[j], (std::uint64_t{1} << w) | b));
      ps.pts[i * net.s + j] = (static_cast<double>(b ^ flips) + tail) * scale;
    }
  }
  return ps;
}

}  // namespace qmcdens
