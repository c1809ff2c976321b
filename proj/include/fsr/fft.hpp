#pragma once

#include <cstddef>
#include <utility>

#include "fsr/tensor.hpp"

namespace fsr {

/// Half-width 2-D spectrum of a real tensor: complex bins of shape
/// (..., H, floor(W/2)+1). The implied full spectrum is Hermitian,
/// S[u,v] = conj(S[(-u) mod H, (-v) mod W]).
struct Spectrum2D {
  ComplexTensor data;
  std::size_t full_width = 0;

  std::size_t height() const { return data.extent(data.rank() - 2); }
  std::size_t half_width() const { return data.extent(data.rank() - 1); }
};

/// DFT convention: forward unnormalized, X[k] = sum_n x[n] exp(-2i*pi*k*n/N);
/// the inverse carries the 1/N factor. Any length N >= 1 is supported
/// (power-of-two fast path, mixed-radix otherwise).
ComplexTensor fft1d(const ComplexTensor& x);
ComplexTensor ifft1d(const ComplexTensor& x);

/// 2-D transform over the last two axes with half-width storage.
Spectrum2D rfft2(const Tensor& x);

/// Real reconstruction assuming the Hermitian extension; imaginary content
/// the extension determines is never read. The (h, w) overload checks the
/// requested target against the stored extents.
Tensor irfft2(const Spectrum2D& s);
Tensor irfft2(const Spectrum2D& s, std::size_t target_h, std::size_t target_w);

/// Modular index reversal on the last two axes: y[m,n] = x[(-m) mod H, (-n) mod W].
/// Index 0 is a fixed point; satisfies rfft2(circular_flip(x)) == conj(rfft2(x)).
Tensor circular_flip(const Tensor& x);

/// Direct-sum circular convolution over the last two axes (no FFT; this is
/// the oracle path for the convolution-theorem checks). `kernel` is either
/// rank-2 (shared across leading slices) or shaped like `x`.
Tensor circular_conv2d(const Tensor& x, const Tensor& kernel);

/// even = (x + flip(x))/2, odd = (x - flip(x))/2; even + odd == x.
std::pair<Tensor, Tensor> even_odd_parts(const Tensor& x);

// Adjoints of the real transforms as linear maps over (re, im) scalars;
// reverse-mode differentiation composes these.
Tensor rfft2_adjoint(const Spectrum2D& grad_spectrum);
Spectrum2D irfft2_adjoint(const Tensor& grad_output, std::size_t full_width);

}  // namespace fsr
