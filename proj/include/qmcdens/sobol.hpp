// Sobol' digital nets in base 2 and their randomizations: left matrix
// scrambling with a digital shift (LMS) and Owen's nested uniform scramble
// (NUS).  Direction numbers come from a Joe-Kuo style table shipped as a
// data file (dimensions 2..250; dimension 1 is the van der Corput sequence).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmcdens/pointset.hpp"

namespace qmcdens {

struct DirectionTable {
  struct Dim {
    int degree = 0;
    std::uint32_t a = 0;             // interior polynomial coefficients
    std::vector<std::uint32_t> m;    // initial direction numbers, m_k odd
  };
  std::vector<Dim> dims;  // dims[0] is dimension 2

  int max_dimension() const { return static_cast<int>(dims.size()) + 1; }

  static DirectionTable load(const std::string& path);
  // Table from QMCDENS_SOBOL_FILE or the build-time data directory,
  // loaded once.
  static const DirectionTable& standard();
};

// A base-2 digital net of n = 2^m points in s dimensions: per dimension the
// m generating-matrix columns, as bit_depth-bit integers with the first
// digit in the most significant position.
struct DigitalNet {
  int s = 0;
  int m = 0;
  int bit_depth = 31;
  std::vector<std::uint32_t> cols;  // s * m, column k of dim j at [j*m + k]

  std::uint32_t col(int j, int k) const { return cols[static_cast<std::size_t>(j) * m + k]; }

  // Integer coordinates of point i (XOR of columns selected by the bits
  // of i), coordinate value = result / 2^bit_depth.
  void point_bits(std::uint64_t i, std::uint32_t* out) const;
};

// Deterministic Sobol' net.  The first coordinate is the base-2 radical
// inverse of the point index; point 0 is the origin.
DigitalNet sobol_net(int s, int m, int bit_depth = 31,
                     const DirectionTable& table = DirectionTable::standard());

// The unrandomized net as doubles.
PointSet net_points(const DigitalNet& net);

// Per dimension: random nonsingular lower-triangular matrix applied on the
// left of the generating matrix, then a random digital shift.  Preserves all
// base-2 elementary-interval equidistribution; each point is marginally
// uniform over the bit_depth-digit grid.
PointSet randomize_lms(const DigitalNet& net, std::uint64_t seed);

// Owen nested uniform scramble to bit_depth digits, realized by a keyed hash
// per node of the binary digit tree (in base 2 a uniform permutation per node
// is a fair coin flip of that digit).  Digits below the tree depth are fresh
// uniform bits, so each coordinate is exactly U[0,1).
PointSet randomize_nus(const DigitalNet& net, std::uint64_t seed);

}  // namespace qmcdens
