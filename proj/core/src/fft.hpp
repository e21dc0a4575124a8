#pragma once

#include <complex>
#include <vector>

namespace mfou {

// Thin FFTW wrappers. Planning goes through a global lock since the FFTW
// planner is not reentrant; execution on private buffers is.

// forward transform of real input, returns the n/2+1 nonredundant bins
std::vector<std::complex<double>> real_fft(const std::vector<double>& x);

// forward transform, sign -1
void complex_fft_inplace(std::vector<std::complex<double>>& x);

}  // namespace mfou
