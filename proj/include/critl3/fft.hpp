#pragma once

#include <complex>

namespace critl3 {

// Sets the FFTW worker count for plans created afterwards.
void set_fft_threads(int n);
int fft_threads();

// Unnormalized forward r2c on an N^3 cube.
void fft_forward(int n, const double* in, std::complex<double>* out);
// Inverse c2r including the 1/N^3 factor. The input is not modified.
void fft_backward(int n, const std::complex<double>* in, double* out);

}  // namespace critl3
