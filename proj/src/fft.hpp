#pragma once

#include <complex>

namespace hydroradar::detail {

/// Forward DFT (sum x_n * exp(-2*pi*i*k*n/N)), arbitrary length, in place.
/// Thread-safe; plans are cached per size behind a mutex.
void fft_inplace(std::complex<double>* data, int n);

}  // namespace hydroradar::detail
