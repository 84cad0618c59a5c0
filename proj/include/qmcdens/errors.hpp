#pragma once

#include <stdexcept>
#include <string>

namespace qmcdens {

// Requested dimension exceeds the shipped direction-number table.
struct unsupported_dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Sample has zero variance; plug-in bandwidth selection cannot proceed.
struct degenerate_sample_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qmcdens
