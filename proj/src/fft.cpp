#include "fsr/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

namespace fsr {

namespace {

// e^{-2*pi*i*j/n} for j in [0, n); shared across calls.
struct Twiddles {
  std::vector<double> c;
  std::vector<double> s;
};

const Twiddles& twiddles_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<Twiddles>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto tw = std::make_unique<Twiddles>();
    tw->c.resize(n);
    tw->s.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      tw->c[j] = std::cos(a);
      tw->s[j] = -std::sin(a);
    }
    it = cache.emplace(n, std::move(tw)).first;
  }
  return *it->second;
}

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t smallest_odd_factor(std::size_t n) {
  for (std::size_t p = 3; p * p <= n; p += 2)
    if (n % p == 0) return p;
  return n;
}

// In-place iterative radix-2; `sign` is -1 forward, +1 inverse. Unnormalized.
template <typename T>
void fft_pow2(T* re, T* im, std::size_t n, int sign) {
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  const Twiddles& tw = twiddles_for(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const std::size_t tj = j * step;
        const T wr = static_cast<T>(tw.c[tj]);
        const T wi = static_cast<T>(sign < 0 ? tw.s[tj] : -tw.s[tj]);
        const T xr = re[i + j + half];
        const T xi = im[i + j + half];
        const T vr = xr * wr - xi * wi;
        const T vi = xr * wi + xi * wr;
        re[i + j + half] = re[i + j] - vr;
        im[i + j + half] = im[i + j] - vi;
        re[i + j] += vr;
        im[i + j] += vi;
      }
    }
  }
}

// Recursive mixed-radix decimation in time. `ratio` = N_top / n maps local
// twiddle indices into the top-level table. Prime sizes fall back to the
// direct sum, which is fine at the lengths this project meets.
template <typename T>
void fft_general(std::size_t n, std::size_t stride, const T* in_re, const T* in_im, T* out_re,
                 T* out_im, int sign, const Twiddles& tw, std::size_t ratio) {
  if (n == 1) {
    out_re[0] = in_re[0];
    out_im[0] = in_im[0];
    return;
  }
  if (is_pow2(n)) {
    for (std::size_t j = 0; j < n; ++j) {
      out_re[j] = in_re[j * stride];
      out_im[j] = in_im[j * stride];
    }
    fft_pow2(out_re, out_im, n, sign);
    return;
  }
  const std::size_t p = smallest_odd_factor(n);
  if (p == n) {  // no usable split: direct sum (correct for any n)
    for (std::size_t k = 0; k < n; ++k) {
      T accr = 0, acci = 0;
      for (std::size_t q = 0; q < n; ++q) {
        const std::size_t tj = ((q * k) % n) * ratio;
        const T wr = static_cast<T>(tw.c[tj]);
        const T wi = static_cast<T>(sign < 0 ? tw.s[tj] : -tw.s[tj]);
        const T xr = in_re[q * stride];
        const T xi = in_im[q * stride];
        accr += xr * wr - xi * wi;
        acci += xr * wi + xi * wr;
      }
      out_re[k] = accr;
      out_im[k] = acci;
    }
    return;
  }
  const std::size_t m = n / p;
  for (std::size_t q = 0; q < p; ++q)
    fft_general(m, stride * p, in_re + q * stride, in_im + q * stride, out_re + q * m,
                out_im + q * m, sign, tw, ratio * p);
  std::vector<T> tr(n), ti(n);
  for (std::size_t k = 0; k < n; ++k) {
    T accr = 0, acci = 0;
    const std::size_t km = k % m;
    for (std::size_t q = 0; q < p; ++q) {
      const std::size_t tj = ((q * k) % n) * ratio;
      const T wr = static_cast<T>(tw.c[tj]);
      const T wi = static_cast<T>(sign < 0 ? tw.s[tj] : -tw.s[tj]);
      const T xr = out_re[q * m + km];
      const T xi = out_im[q * m + km];
      accr += xr * wr - xi * wi;
      acci += xr * wi + xi * wr;
    }
    tr[k] = accr;
    ti[k] = acci;
  }
  for (std::size_t k = 0; k < n; ++k) {
    out_re[k] = tr[k];
    out_im[k] = ti[k];
  }
}

// Unnormalized in-place transform of a contiguous length-n signal.
template <typename T>
void transform(T* re, T* im, std::size_t n, int sign) {
  if (n == 1) return;
  if (is_pow2(n)) {
    fft_pow2(re, im, n, sign);
    return;
  }
  const Twiddles& tw = twiddles_for(n);
  std::vector<T> outr(n), outi(n);
  std::vector<T> inr(re, re + n), ini(im, im + n);
  fft_general<T>(n, 1, inr.data(), ini.data(), outr.data(), outi.data(), sign, tw, 1);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = outr[i];
    im[i] = outi[i];
  }
}

void check_rank2(const Tensor& x, const char* what) {
  if (x.rank() < 2) throw DimensionError(std::string(what) + " needs rank >= 2, got shape " +
                                         to_string(x.shape()));
}

struct SpatialDims {
  std::size_t lead, h, w;
};

SpatialDims spatial_dims(const Shape& shape) {
  SpatialDims d;
  d.h = shape[shape.size() - 2];
  d.w = shape[shape.size() - 1];
  d.lead = 1;
  for (std::size_t i = 0; i + 2 < shape.size(); ++i) d.lead *= shape[i];
  return d;
}

// ---- per-slice 2-D kernels -------------------------------------------------

template <typename T>
void rfft2_slice(const double* x, std::size_t h, std::size_t w, std::size_t wh, double* out_re,
                 double* out_im) {
  std::vector<T> tr(h * w), ti(h * w);
  std::vector<T> rr(w), ri(w);
  for (std::size_t m = 0; m < h; ++m) {
    for (std::size_t n = 0; n < w; ++n) {
      rr[n] = static_cast<T>(x[m * w + n]);
      ri[n] = 0;
    }
    transform(rr.data(), ri.data(), w, -1);
    for (std::size_t n = 0; n < w; ++n) {
      tr[m * w + n] = rr[n];
      ti[m * w + n] = ri[n];
    }
  }
  std::vector<T> cr(h), ci(h);
  for (std::size_t v = 0; v < wh; ++v) {
    for (std::size_t u = 0; u < h; ++u) {
      cr[u] = tr[u * w + v];
      ci[u] = ti[u * w + v];
    }
    transform(cr.data(), ci.data(), h, -1);
    for (std::size_t u = 0; u < h; ++u) {
      out_re[u * wh + v] = static_cast<double>(cr[u]);
      out_im[u * wh + v] = static_cast<double>(ci[u]);
    }
  }
}

// mirror = true reconstructs missing columns from the Hermitian extension
// (irfft2); mirror = false treats them as zero (the rfft2 adjoint). `scale`
// multiplies the real output.
template <typename T>
void half_inverse_slice(const double* s_re, const double* s_im, std::size_t h, std::size_t w,
                        std::size_t wh, bool mirror, double scale, double* y) {
  std::vector<T> tr(h * wh), ti(h * wh);
  std::vector<T> cr(h), ci(h);
  for (std::size_t v = 0; v < wh; ++v) {
    for (std::size_t u = 0; u < h; ++u) {
      cr[u] = static_cast<T>(s_re[u * wh + v]);
      ci[u] = static_cast<T>(s_im[u * wh + v]);
    }
    transform(cr.data(), ci.data(), h, +1);
    for (std::size_t u = 0; u < h; ++u) {
      tr[u * wh + v] = cr[u];
      ti[u * wh + v] = ci[u];
    }
  }
  // After the column pass the Hermitian relation is row-local:
  // row[v] = conj(row[w - v]) for v > w/2.
  std::vector<T> rr(w), ri(w);
  const T sc = static_cast<T>(scale);
  for (std::size_t m = 0; m < h; ++m) {
    for (std::size_t v = 0; v < wh; ++v) {
      rr[v] = tr[m * wh + v];
      ri[v] = ti[m * wh + v];
    }
    for (std::size_t v = wh; v < w; ++v) {
      if (mirror) {
        rr[v] = tr[m * wh + (w - v)];
        ri[v] = -ti[m * wh + (w - v)];
      } else {
        rr[v] = 0;
        ri[v] = 0;
      }
    }
    transform(rr.data(), ri.data(), w, +1);
    for (std::size_t n = 0; n < w; ++n) y[m * w + n] = static_cast<double>(rr[n] * sc);
  }
}

}  // namespace

ComplexTensor fft1d(const ComplexTensor& x) {
  if (x.rank() != 1)
    throw DimensionError("fft1d expects rank-1 input, got shape " + to_string(x.shape()));
  const std::size_t n = x.numel();
  ComplexTensor out(x.shape(), x.precision());
  if (x.precision() == Precision::Single) {
    std::vector<float> re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
      re[i] = static_cast<float>(x.re[i]);
      im[i] = static_cast<float>(x.im[i]);
    }
    transform(re.data(), im.data(), n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      out.re.set(i, re[i]);
      out.im.set(i, im[i]);
    }
  } else {
    std::vector<double> re(x.re.data(), x.re.data() + n), im(x.im.data(), x.im.data() + n);
    transform(re.data(), im.data(), n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      out.re.set(i, re[i]);
      out.im.set(i, im[i]);
    }
  }
  return out;
}

ComplexTensor ifft1d(const ComplexTensor& x) {
  if (x.rank() != 1)
    throw DimensionError("ifft1d expects rank-1 input, got shape " + to_string(x.shape()));
  const std::size_t n = x.numel();
  ComplexTensor out(x.shape(), x.precision());
  if (x.precision() == Precision::Single) {
    std::vector<float> re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
      re[i] = static_cast<float>(x.re[i]);
      im[i] = static_cast<float>(x.im[i]);
    }
    transform(re.data(), im.data(), n, +1);
    const float inv = 1.0f / static_cast<float>(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.re.set(i, re[i] * inv);
      out.im.set(i, im[i] * inv);
    }
  } else {
    std::vector<double> re(x.re.data(), x.re.data() + n), im(x.im.data(), x.im.data() + n);
    transform(re.data(), im.data(), n, +1);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.re.set(i, re[i] * inv);
      out.im.set(i, im[i] * inv);
    }
  }
  return out;
}

Spectrum2D rfft2(const Tensor& x) {
  check_rank2(x, "rfft2");
  const SpatialDims d = spatial_dims(x.shape());
  const std::size_t wh = d.w / 2 + 1;
  Shape out_shape = x.shape();
  out_shape.back() = wh;
  Spectrum2D s;
  s.data = ComplexTensor(out_shape, x.precision());
  s.full_width = d.w;
  double* re = s.data.re.raw();
  double* im = s.data.im.raw();
  for (std::size_t l = 0; l < d.lead; ++l) {
    const double* xp = x.data() + l * d.h * d.w;
    double* rp = re + l * d.h * wh;
    double* ip = im + l * d.h * wh;
    if (x.precision() == Precision::Single)
      rfft2_slice<float>(xp, d.h, d.w, wh, rp, ip);
    else
      rfft2_slice<double>(xp, d.h, d.w, wh, rp, ip);
  }
  s.data.re.quantize();
  s.data.im.quantize();
  return s;
}

Tensor irfft2(const Spectrum2D& s) { return irfft2(s, s.height(), s.full_width); }

Tensor irfft2(const Spectrum2D& s, std::size_t target_h, std::size_t target_w) {
  check_rank2(s.data.re, "irfft2");
  const SpatialDims d = spatial_dims(s.data.shape());
  const std::size_t wh = d.w;  // stored width is the half width
  if (target_h != d.h || target_w / 2 + 1 != wh || s.full_width != target_w)
    throw DimensionError("irfft2 target " + std::to_string(target_h) + "x" +
                         std::to_string(target_w) + " inconsistent with spectrum " +
                         to_string(s.data.shape()) + " (full width " +
                         std::to_string(s.full_width) + ")");
  Shape out_shape = s.data.shape();
  out_shape.back() = target_w;
  Tensor y(out_shape, s.data.precision());
  const double scale = 1.0 / (static_cast<double>(d.h) * static_cast<double>(target_w));
  for (std::size_t l = 0; l < d.lead; ++l) {
    const double* rp = s.data.re.data() + l * d.h * wh;
    const double* ip = s.data.im.data() + l * d.h * wh;
    double* yp = y.raw() + l * d.h * target_w;
    if (y.precision() == Precision::Single)
      half_inverse_slice<float>(rp, ip, d.h, target_w, wh, true, scale, yp);
    else
      half_inverse_slice<double>(rp, ip, d.h, target_w, wh, true, scale, yp);
  }
  y.quantize();
  return y;
}

Tensor rfft2_adjoint(const Spectrum2D& grad_spectrum) {
  check_rank2(grad_spectrum.data.re, "rfft2_adjoint");
  const SpatialDims d = spatial_dims(grad_spectrum.data.shape());
  const std::size_t wh = d.w;
  const std::size_t w = grad_spectrum.full_width;
  if (w / 2 + 1 != wh)
    throw DimensionError("rfft2_adjoint: stored width " + std::to_string(wh) +
                         " inconsistent with full width " + std::to_string(w));
  Shape out_shape = grad_spectrum.data.shape();
  out_shape.back() = w;
  Tensor y(out_shape, grad_spectrum.data.precision());
  for (std::size_t l = 0; l < d.lead; ++l) {
    const double* rp = grad_spectrum.data.re.data() + l * d.h * wh;
    const double* ip = grad_spectrum.data.im.data() + l * d.h * wh;
    double* yp = y.raw() + l * d.h * w;
    if (y.precision() == Precision::Single)
      half_inverse_slice<float>(rp, ip, d.h, w, wh, false, 1.0, yp);
    else
      half_inverse_slice<double>(rp, ip, d.h, w, wh, false, 1.0, yp);
  }
  y.quantize();
  return y;
}

Spectrum2D irfft2_adjoint(const Tensor& grad_output, std::size_t full_width) {
  check_rank2(grad_output, "irfft2_adjoint");
  const SpatialDims d = spatial_dims(grad_output.shape());
  if (d.w != full_width)
    throw DimensionError("irfft2_adjoint: gradient width " + std::to_string(d.w) +
                         " != full width " + std::to_string(full_width));
  Spectrum2D g = rfft2(grad_output);
  const std::size_t wh = g.half_width();
  const double inv = 1.0 / (static_cast<double>(d.h) * static_cast<double>(d.w));
  double* re = g.data.re.raw();
  double* im = g.data.im.raw();
  const std::size_t total = g.data.numel();
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t v = i % wh;
    const bool self_conjugate = (v == 0) || (d.w % 2 == 0 && v == d.w / 2);
    const double f = (self_conjugate ? 1.0 : 2.0) * inv;
    re[i] *= f;
    im[i] *= f;
  }
  g.data.re.quantize();
  g.data.im.quantize();
  return g;
}

Tensor circular_flip(const Tensor& x) {
  check_rank2(x, "circular_flip");
  const SpatialDims d = spatial_dims(x.shape());
  Tensor y(x.shape(), x.precision());
  double* yp = y.raw();
  for (std::size_t l = 0; l < d.lead; ++l) {
    const double* xp = x.data() + l * d.h * d.w;
    double* op = yp + l * d.h * d.w;
    for (std::size_t m = 0; m < d.h; ++m) {
      const std::size_t sm = (d.h - m) % d.h;
      for (std::size_t n = 0; n < d.w; ++n) op[m * d.w + n] = xp[sm * d.w + (d.w - n) % d.w];
    }
  }
  return y;
}

Tensor circular_conv2d(const Tensor& x, const Tensor& kernel) {
  check_rank2(x, "circular_conv2d");
  const SpatialDims d = spatial_dims(x.shape());
  const bool shared = kernel.rank() == 2;
  if (shared) {
    if (kernel.extent(0) != d.h || kernel.extent(1) != d.w)
      throw DimensionError("circular_conv2d kernel " + to_string(kernel.shape()) +
                           " does not match spatial extents of " + to_string(x.shape()));
  } else if (kernel.shape() != x.shape()) {
    throw DimensionError("circular_conv2d kernel " + to_string(kernel.shape()) +
                         " must be rank-2 or match input " + to_string(x.shape()));
  }
  Tensor y(x.shape(), x.precision());
  double* out = y.raw();
  for (std::size_t l = 0; l < d.lead; ++l) {
    const double* xp = x.data() + l * d.h * d.w;
    const double* kp = kernel.data() + (shared ? 0 : l * d.h * d.w);
    double* yp = out + l * d.h * d.w;
    for (std::size_t m = 0; m < d.h; ++m) {
      for (std::size_t n = 0; n < d.w; ++n) {
        double acc = 0.0;
        for (std::size_t p = 0; p < d.h; ++p) {
          const std::size_t km = (m + d.h - p) % d.h;
          const double* xr = xp + p * d.w;
          const double* kr = kp + km * d.w;
          for (std::size_t q = 0; q < d.w; ++q) acc += xr[q] * kr[(n + d.w - q) % d.w];
        }
        yp[m * d.w + n] = acc;
      }
    }
  }
  y.quantize();
  return y;
}

std::pair<Tensor, Tensor> even_odd_parts(const Tensor& x) {
  check_rank2(x, "even_odd_parts");
  const Tensor f = circular_flip(x);
  Tensor even(x.shape(), x.precision());
  Tensor odd(x.shape(), x.precision());
  for (std::size_t i = 0; i < x.numel(); ++i) {
    even.set(i, 0.5 * (x[i] + f[i]));
    odd.set(i, x[i] - even[i]);  // keeps even + odd == x exact
  }
  return {std::move(even), std::move(odd)};
}

}  // namespace fsr
