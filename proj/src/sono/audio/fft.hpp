#pragma once

#include <complex>
#include <span>
#include <vector>

namespace sono::audio {

/// Non-negative-frequency half of the DFT of a real signal of any length
/// (floor(n/2) + 1 bins, no padding).
std::vector<std::complex<double>> real_dft(std::span<const double> signal);

} // namespace sono::audio
