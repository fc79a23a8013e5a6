#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace roughvol::detail {

/// Smallest 7-smooth integer >= n (fast FFTW sizes).
std::size_t good_fft_size(std::size_t n);

/// In-place forward complex DFT, X_k = sum_j x_j exp(-2 pi i jk / N).
void fft_forward(std::vector<std::complex<double>>& data);

/// Real-input forward DFT; returns the N/2+1 nonredundant bins.
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Inverse of rfft for a length-n real signal, unnormalized (times n).
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

}  // namespace roughvol::detail
