// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppmv {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;

/// Length-M vector of symbols on the DFT-precoder input bins.
using BinFrame = ComplexVec;

/// Votes over {+1, -1}; one entry per model parameter.
using SignVector = std::vector<std::int8_t>;

/// Raised for inconsistent experiment or layout parameters.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

} // namespace ppmv
