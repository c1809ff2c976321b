#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fsr/errors.hpp"

namespace fsr {

enum class Precision : std::uint8_t { Single = 0, Double = 1 };

/// Process-wide default precision; reads FSR_PRECISION once ("single"/"double").
Precision default_precision();

using Shape = std::vector<std::size_t>;

std::size_t numel_of(const Shape& shape);
std::string to_string(const Shape& shape);

/// Rounds through float when the declared precision is single.
inline double store_value(double v, Precision p) {
  return p == Precision::Single ? static_cast<double>(static_cast<float>(v)) : v;
}

/// Dense row-major real tensor. Storage is double; tensors declared Single
/// keep every element float-representable (kernels round once per store).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, Precision prec = Precision::Double);
  Tensor(Shape shape, std::vector<double> data, Precision prec = Precision::Double);

  static Tensor full(Shape shape, double value, Precision prec = Precision::Double);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_[axis]; }
  std::size_t numel() const { return data_.size(); }
  Precision precision() const { return precision_; }

  double operator[](std::size_t i) const { return data_[i]; }
  void set(std::size_t i, double v) { data_[i] = store_value(v, precision_); }

  const double* data() const { return data_.data(); }
  /// Mutable access for kernels; call quantize() afterwards on Single tensors.
  double* raw() { return data_.data(); }
  void quantize();

  Tensor to(Precision prec) const;
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

 private:
  Shape shape_;
  std::vector<double> data_;
  Precision precision_ = Precision::Double;
};

/// Split-plane complex tensor: separate real and imaginary Tensors of equal shape.
struct ComplexTensor {
  Tensor re;
  Tensor im;

  ComplexTensor() = default;
  explicit ComplexTensor(Shape shape, Precision prec = Precision::Double)
      : re(shape, prec), im(std::move(shape), prec) {}
  ComplexTensor(Tensor re_part, Tensor im_part);

  const Shape& shape() const { return re.shape(); }
  std::size_t rank() const { return re.rank(); }
  std::size_t extent(std::size_t axis) const { return re.extent(axis); }
  std::size_t numel() const { return re.numel(); }
  Precision precision() const { return re.precision(); }
};

ComplexTensor conj(const ComplexTensor& x);

/// Row-major reinterpretation; element order is untouched.
Tensor reshape(const Tensor& t, Shape new_shape);
ComplexTensor reshape(const ComplexTensor& t, Shape new_shape);

/// Element-wise product with virtual broadcast: each extent of `filt` must
/// equal the matching extent of `x` or be 1. The expansion is never
/// materialized; arithmetic is identical to the materialized product.
ComplexTensor broadcast_mul(const Tensor& filt, const ComplexTensor& x);
ComplexTensor broadcast_mul(const ComplexTensor& filt, const ComplexTensor& x);

// Container I/O. Layout: magic "FSRT", version u32=1, dtype u8 (0 single /
// 1 double), complex u8, ndim u8, ndim x u64 extents, then the row-major
// little-endian payload (complex: full re plane, then full im plane).
void save_tensor(const Tensor& t, const std::string& path);
void save_tensor(const ComplexTensor& t, const std::string& path);
Tensor load_tensor(const std::string& path);
ComplexTensor load_complex_tensor(const std::string& path);

}  // namespace fsr
