// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "isac/param_estimation.hpp"

#include <iosfwd>
#include <string>

// Binary observation file, little-endian:
//   8 bytes   magic "ISACOBS1"
//   4 x u64   subcarriers, symbols, rx, probes
//   3 x f64   subcarrier spacing (Hz), symbol duration (s), carrier (Hz)
//   payload   interleaved (re, im) f64 pairs in (n, t, r, p) order, p fastest

namespace isac {

void write_observations(std::ostream& out, const ObservationTensor& obs);
ObservationTensor read_observations(std::istream& in);

void save_observations(const std::string& path, const ObservationTensor& obs);
ObservationTensor load_observations(const std::string& path);

}  // namespace isac
