#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "fsr/fft.hpp"
#include "oracles.hpp"

using namespace fsr;

namespace {

ComplexTensor to_tensor(const std::vector<oracle::cplx>& v) {
  ComplexTensor t({v.size()});
  for (std::size_t i = 0; i < v.size(); ++i) {
    t.re.set(i, v[i].real());
    t.im.set(i, v[i].imag());
  }
  return t;
}

std::vector<oracle::cplx> to_vec(const ComplexTensor& t) {
  std::vector<oracle::cplx> v(t.numel());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {t.re[i], t.im[i]};
  return v;
}

double max_cplx_diff(const std::vector<oracle::cplx>& a, const std::vector<oracle::cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("fft1d of a delta is all ones") {
  ComplexTensor x({4});
  x.re.set(0, 1.0);
  ComplexTensor s = fft1d(x);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(s.re[k] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.im[k] == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("fft1d concentrates a constant into the DC bin") {
  const double c = 0.75;
  ComplexTensor x({4});
  for (std::size_t i = 0; i < 4; ++i) x.re.set(i, c);
  ComplexTensor s = fft1d(x);
  CHECK(s.re[0] == doctest::Approx(4 * c).epsilon(1e-14));
  for (std::size_t k = 1; k < 4; ++k) {
    CHECK(std::abs(s.re[k]) < 1e-13);
    CHECK(std::abs(s.im[k]) < 1e-13);
  }
}

TEST_CASE("fft1d matches the direct DFT on a random length-12 signal") {
  std::mt19937_64 rng(23);
  ComplexTensor x = oracle::random_complex({12}, rng);
  auto got = to_vec(fft1d(x));
  auto want = oracle::dft1d(to_vec(x));
  CHECK(max_cplx_diff(got, want) < 1e-12);
}

TEST_CASE("fft1d matches the direct DFT exhaustively for N in 1..32") {
  std::mt19937_64 rng(29);
  for (std::size_t n = 1; n <= 32; ++n) {
    ComplexTensor x = oracle::random_complex({n}, rng);
    auto got = to_vec(fft1d(x));
    auto want = oracle::dft1d(to_vec(x));
    CAPTURE(n);
    CHECK(max_cplx_diff(got, want) < 1e-11);
    // inverse round trip at the same length
    auto back = to_vec(ifft1d(fft1d(x)));
    CHECK(max_cplx_diff(back, to_vec(x)) < 1e-12);
  }
}

TEST_CASE("rfft2 of a constant image is DC only") {
  const double c = 1.25;
  Tensor x = Tensor::full({4, 4}, c);
  Spectrum2D s = rfft2(x);
  REQUIRE(s.half_width() == 3);
  CHECK(s.data.re[0] == doctest::Approx(16 * c).epsilon(1e-14));
  for (std::size_t i = 1; i < s.data.numel(); ++i) {
    CHECK(std::abs(s.data.re[i]) < 1e-12);
    CHECK(std::abs(s.data.im[i]) < 1e-12);
  }
}

TEST_CASE("irfft2(rfft2(x)) == x, even and odd widths") {
  std::mt19937_64 rng(31);
  for (auto [h, w] : {std::pair<std::size_t, std::size_t>{8, 10},
                      {8, 9},
                      {1, 7},
                      {5, 1},
                      {1, 1}}) {
    Tensor x = oracle::random_tensor({3, h, w}, rng);
    Tensor back = irfft2(rfft2(x));
    CAPTURE(h);
    CAPTURE(w);
    CHECK(oracle::max_abs_diff(x, back) < 1e-12);
  }
}

TEST_CASE("rfft2 equals the direct 2-D DFT restricted to the half width") {
  std::mt19937_64 rng(37);
  const std::size_t h = 6, w = 6;
  Tensor x = oracle::random_tensor({h, w}, rng);
  Spectrum2D s = rfft2(x);
  auto full = oracle::dft2d_real(x.data(), h, w);
  const std::size_t wh = s.half_width();
  for (std::size_t u = 0; u < h; ++u)
    for (std::size_t v = 0; v < wh; ++v) {
      CHECK(std::abs(s.data.re[u * wh + v] - full[u * w + v].real()) < 1e-12);
      CHECK(std::abs(s.data.im[u * wh + v] - full[u * w + v].imag()) < 1e-12);
    }
}

TEST_CASE("irfft2 rejects an inconsistent target size") {
  Tensor x({4, 6});
  Spectrum2D s = rfft2(x);
  CHECK_THROWS_AS(irfft2(s, 4, 8), DimensionError);
  CHECK_THROWS_AS(irfft2(s, 5, 6), DimensionError);
  CHECK_NOTHROW(irfft2(s, 4, 6));
}

TEST_CASE("circular_flip fixes index 0 and reverses the rest") {
  Tensor x({1, 4}, {1, 2, 3, 4});  // a,b,c,d
  Tensor y = circular_flip(x);
  CHECK(y[0] == 1);
  CHECK(y[1] == 4);
  CHECK(y[2] == 3);
  CHECK(y[3] == 2);

  Tensor one({2, 1, 1}, {5, 6});
  Tensor fone = circular_flip(one);
  CHECK(fone[0] == 5);
  CHECK(fone[1] == 6);
}

TEST_CASE("flip conjugates the spectrum") {
  std::mt19937_64 rng(41);
  Tensor x = oracle::random_tensor({5, 8}, rng);
  Spectrum2D a = rfft2(circular_flip(x));
  Spectrum2D b = rfft2(x);
  for (std::size_t i = 0; i < a.data.numel(); ++i) {
    CHECK(std::abs(a.data.re[i] - b.data.re[i]) < 1e-12);
    CHECK(std::abs(a.data.im[i] + b.data.im[i]) < 1e-12);
  }
}

TEST_CASE("circular_conv2d: delta kernel is the identity") {
  std::mt19937_64 rng(43);
  Tensor x = oracle::random_tensor({2, 4, 5}, rng);
  Tensor k({4, 5});
  k.set(0, 1.0);
  Tensor y = circular_conv2d(x, k);
  CHECK(oracle::max_abs_diff(x, y) == 0.0);
}

TEST_CASE("circular_conv2d: 2x2 wrap-around sums") {
  Tensor x({2, 2}, {1, 2, 3, 4});
  Tensor k({2, 2}, {1, 0, 0, 1});
  // Confirmed against the independent direct sum before freezing.
  auto ref = oracle::circ_conv2d({1, 2, 3, 4}, {1, 0, 0, 1}, 2, 2);
  Tensor y = circular_conv2d(x, k);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(y[i] == ref[i]);
    CHECK(y[i] == 5.0);
  }
}

TEST_CASE("convolution theorem: FFT product path equals the direct sum") {
  std::mt19937_64 rng(47);
  for (int seed = 0; seed < 20; ++seed) {
    Tensor x = oracle::random_tensor({8, 8}, rng);
    Tensor k = oracle::random_tensor({8, 8}, rng);
    Spectrum2D sx = rfft2(x);
    Spectrum2D sk = rfft2(k);
    Spectrum2D prod;
    prod.full_width = sx.full_width;
    prod.data = ComplexTensor(sx.data.shape());
    for (std::size_t i = 0; i < prod.data.numel(); ++i) {
      prod.data.re.set(i, sx.data.re[i] * sk.data.re[i] - sx.data.im[i] * sk.data.im[i]);
      prod.data.im.set(i, sx.data.re[i] * sk.data.im[i] + sx.data.im[i] * sk.data.re[i]);
    }
    Tensor via_fft = irfft2(prod);
    Tensor direct = circular_conv2d(x, k);
    CHECK(oracle::max_abs_diff(via_fft, direct) < 1e-10);
  }
}

TEST_CASE("even/odd decomposition") {
  std::mt19937_64 rng(53);
  Tensor x = oracle::random_tensor({8, 8}, rng);

  auto [even, odd] = even_odd_parts(x);
  SUBCASE("parts reconstruct the input exactly") {
    for (std::size_t i = 0; i < x.numel(); ++i) CHECK(even[i] + odd[i] == x[i]);
  }
  SUBCASE("symmetric input has zero odd part") {
    Tensor sym(x.shape());
    Tensor f = circular_flip(x);
    for (std::size_t i = 0; i < x.numel(); ++i) sym.set(i, x[i] + f[i]);
    auto [e2, o2] = even_odd_parts(sym);
    CHECK(oracle::max_abs(o2) == 0.0);
    CHECK(oracle::max_abs_diff(e2, sym) == 0.0);
  }
  SUBCASE("real part of the spectrum transforms to the even part") {
    Spectrum2D s = rfft2(x);
    Spectrum2D re_only;
    re_only.full_width = s.full_width;
    re_only.data = ComplexTensor(s.data.shape());
    re_only.data.re = s.data.re;
    Tensor via = irfft2(re_only);
    CHECK(oracle::max_abs_diff(via, even) < 1e-10);
  }
  SUBCASE("imaginary part kept on the imaginary axis transforms to the odd part") {
    Spectrum2D s = rfft2(x);
    Spectrum2D im_only;
    im_only.full_width = s.full_width;
    im_only.data = ComplexTensor(s.data.shape());
    im_only.data.im = s.data.im;
    Tensor via = irfft2(im_only);
    CHECK(oracle::max_abs_diff(via, odd) < 1e-10);
  }
}

TEST_CASE("inverse transform distributes over sums of spectra") {
  std::mt19937_64 rng(59);
  Tensor x = oracle::random_tensor({6, 7}, rng);
  Tensor z = oracle::random_tensor({6, 7}, rng);
  Spectrum2D a = rfft2(x);
  Spectrum2D b = rfft2(z);
  for (double sign : {1.0, -1.0}) {
    Spectrum2D sum;
    sum.full_width = a.full_width;
    sum.data = ComplexTensor(a.data.shape());
    for (std::size_t i = 0; i < sum.data.numel(); ++i) {
      sum.data.re.set(i, a.data.re[i] + sign * b.data.re[i]);
      sum.data.im.set(i, a.data.im[i] + sign * b.data.im[i]);
    }
    Tensor lhs = irfft2(sum);
    Tensor ra = irfft2(a);
    Tensor rb = irfft2(b);
    Tensor rhs(lhs.shape());
    for (std::size_t i = 0; i < rhs.numel(); ++i) rhs.set(i, ra[i] + sign * rb[i]);
    CHECK(oracle::max_abs_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("Parseval: spatial energy equals spectral energy / HW") {
  std::mt19937_64 rng(61);
  for (auto [h, w] : {std::pair<std::size_t, std::size_t>{8, 8}, {6, 9}, {5, 4}}) {
    Tensor x = oracle::random_tensor({h, w}, rng);
    Spectrum2D s = rfft2(x);
    double spatial = 0.0;
    for (std::size_t i = 0; i < x.numel(); ++i) spatial += x[i] * x[i];
    // Reassemble full-spectrum energy from the half storage: self-conjugate
    // columns count once, the rest twice.
    const std::size_t wh = s.half_width();
    double spectral = 0.0;
    for (std::size_t u = 0; u < h; ++u)
      for (std::size_t v = 0; v < wh; ++v) {
        const bool self_conj = (v == 0) || (w % 2 == 0 && v == w / 2);
        const double mag2 = s.data.re[u * wh + v] * s.data.re[u * wh + v] +
                            s.data.im[u * wh + v] * s.data.im[u * wh + v];
        spectral += (self_conj ? 1.0 : 2.0) * mag2;
      }
    spectral /= static_cast<double>(h * w);
    CHECK(std::abs(spatial - spectral) / spatial < 1e-10);
  }
}

TEST_CASE("adjoint identities: <A x, y> == <x, A^T y>") {
  std::mt19937_64 rng(67);
  const std::size_t h = 5, w = 6, wh = w / 2 + 1;

  SUBCASE("rfft2") {
    Tensor x = oracle::random_tensor({h, w}, rng);
    ComplexTensor y = oracle::random_complex({h, wh}, rng);
    Spectrum2D ax = rfft2(x);
    double lhs = 0.0;
    for (std::size_t i = 0; i < y.numel(); ++i)
      lhs += ax.data.re[i] * y.re[i] + ax.data.im[i] * y.im[i];
    Spectrum2D ys{y, w};
    Tensor aty = rfft2_adjoint(ys);
    double rhs = 0.0;
    for (std::size_t i = 0; i < x.numel(); ++i) rhs += x[i] * aty[i];
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }

  SUBCASE("irfft2") {
    ComplexTensor sx = oracle::random_complex({h, wh}, rng);
    Tensor y = oracle::random_tensor({h, w}, rng);
    Tensor ax = irfft2(Spectrum2D{sx, w});
    double lhs = 0.0;
    for (std::size_t i = 0; i < y.numel(); ++i) lhs += ax[i] * y[i];
    Spectrum2D aty = irfft2_adjoint(y, w);
    double rhs = 0.0;
    for (std::size_t i = 0; i < sx.numel(); ++i)
      rhs += sx.re[i] * aty.data.re[i] + sx.im[i] * aty.data.im[i];
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("single precision transforms stay within float accuracy") {
  std::mt19937_64 rng(71);
  Tensor x = oracle::random_tensor({4, 8, 8}, rng, -1.0, 1.0, Precision::Single);
  Tensor back = irfft2(rfft2(x));
  CHECK(back.precision() == Precision::Single);
  CHECK(oracle::max_abs_diff(x, back) < 1e-4);
  CHECK(oracle::max_abs_diff(x, back) > 0.0);  // genuinely float, not double
}
