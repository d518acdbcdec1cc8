#pragma once

#include <string>

#include "designlift/design.hpp"
#include "designlift/measurement.hpp"

namespace designlift {

// Plain-text formats. Complex entries are interleaved "re im" pairs in
// row-major order; floats are written with 17 significant digits so
// save/load round-trips exactly.
//
//   HMAT n           + n*n lines "re im"
//   DESIGN n N mode  + N records: one weight line, then n lines "re im"
//   ENS n m scaling seed + m records of n lines "re im"
//   OBS m q eta      + m value lines            (q is one of 1, 2, inf)

void save_hmat(const HermitianMatrix& z, const std::string& path);
HermitianMatrix load_hmat(const std::string& path);

void save_design(const Design& d, const std::string& path);
Design load_design(const std::string& path);

void save_ensemble(const MeasurementEnsemble& e, const std::string& path);
MeasurementEnsemble load_ensemble(const std::string& path);

void save_observations(const RealVector& b, NoiseNorm q, double eta, const std::string& path);
struct Observations {
    RealVector values;
    NoiseNorm q = NoiseNorm::l2;
    double eta = 0.0;
};
Observations load_observations(const std::string& path);

std::string noise_norm_token(NoiseNorm q);
NoiseNorm parse_noise_norm(const std::string& token);

// full-precision decimal rendering used by every writer
std::string format_double(double v);

}  // namespace designlift
