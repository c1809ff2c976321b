#include "fsr/tensor.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>

namespace fsr {

Precision default_precision() {
  static const Precision prec = [] {
    const char* env = std::getenv("FSR_PRECISION");
    if (env == nullptr) return Precision::Double;
    const std::string v(env);
    if (v == "single") return Precision::Single;
    if (v == "double") return Precision::Double;
    throw ConfigError("FSR_PRECISION must be 'single' or 'double', got '" + v + "'");
  }();
  return prec;
}

std::size_t numel_of(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  return n;
}

std::string to_string(const Shape& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

static void check_extents(const Shape& shape) {
  for (std::size_t e : shape)
    if (e == 0) throw DimensionError("zero extent in shape " + to_string(shape));
}

Tensor::Tensor(Shape shape, Precision prec)
    : shape_(std::move(shape)), data_(numel_of(shape_), 0.0), precision_(prec) {
  check_extents(shape_);
}

Tensor::Tensor(Shape shape, std::vector<double> data, Precision prec)
    : shape_(std::move(shape)), data_(std::move(data)), precision_(prec) {
  check_extents(shape_);
  if (data_.size() != numel_of(shape_))
    throw DimensionError("data length " + std::to_string(data_.size()) +
                         " does not match shape " + to_string(shape_));
  quantize();
}

Tensor Tensor::full(Shape shape, double value, Precision prec) {
  Tensor t(std::move(shape), prec);
  value = store_value(value, prec);
  for (double& v : t.data_) v = value;
  return t;
}

void Tensor::quantize() {
  if (precision_ != Precision::Single) return;
  for (double& v : data_) v = static_cast<double>(static_cast<float>(v));
}

Tensor Tensor::to(Precision prec) const {
  Tensor t(shape_, prec);
  t.data_ = data_;
  t.quantize();
  return t;
}

ComplexTensor::ComplexTensor(Tensor re_part, Tensor im_part)
    : re(std::move(re_part)), im(std::move(im_part)) {
  if (!re.same_shape(im))
    throw DimensionError("complex tensor planes disagree: re " + to_string(re.shape()) +
                         " vs im " + to_string(im.shape()));
  if (re.precision() != im.precision())
    throw ConfigError("complex tensor planes carry different precisions");
}

ComplexTensor conj(const ComplexTensor& x) {
  ComplexTensor y = x;
  double* im = y.im.raw();
  for (std::size_t i = 0; i < y.numel(); ++i) im[i] = -im[i];
  return y;
}

Tensor reshape(const Tensor& t, Shape new_shape) {
  check_extents(new_shape);
  if (numel_of(new_shape) != t.numel())
    throw DimensionError("reshape " + to_string(t.shape()) + " -> " + to_string(new_shape) +
                         " changes element count");
  Tensor out = t;
  return Tensor(std::move(new_shape),
                std::vector<double>(out.data(), out.data() + out.numel()), t.precision());
}

ComplexTensor reshape(const ComplexTensor& t, Shape new_shape) {
  return ComplexTensor(reshape(t.re, new_shape), reshape(t.im, std::move(new_shape)));
}

namespace {

// Broadcast plan: filt extents must equal x extents or be 1. The trailing
// run of broadcast axes forms a contiguous inner block so the hot loop is a
// plain scalar-times-span.
struct BroadcastPlan {
  std::size_t outer;   // number of filter-indexed blocks
  std::size_t inner;   // contiguous elements sharing one filter value
  std::vector<std::size_t> x_extent;
  std::vector<std::size_t> f_stride;  // 0 on broadcast axes
  std::size_t outer_rank;
};

BroadcastPlan plan_broadcast(const Shape& f, const Shape& x) {
  if (f.size() != x.size())
    throw DimensionError("broadcast rank mismatch: filter " + to_string(f) + " vs input " +
                         to_string(x));
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != x[i] && f[i] != 1)
      throw DimensionError("cannot broadcast filter " + to_string(f) + " onto " + to_string(x));

  std::size_t split = f.size();
  while (split > 0 && f[split - 1] == 1) --split;

  BroadcastPlan p;
  p.outer_rank = split;
  p.inner = 1;
  for (std::size_t i = split; i < x.size(); ++i) p.inner *= x[i];
  p.outer = 1;
  for (std::size_t i = 0; i < split; ++i) p.outer *= x[i];
  p.x_extent.assign(x.begin(), x.begin() + split);

  p.f_stride.assign(split, 0);
  std::size_t stride = 1;
  for (std::size_t i = split; i-- > 0;) {
    p.f_stride[i] = (f[i] == 1) ? 0 : stride;
    stride *= f[i];
  }
  return p;
}

template <typename MulFn>
void for_each_block(const BroadcastPlan& p, MulFn&& fn) {
  std::vector<std::size_t> idx(p.outer_rank, 0);
  for (std::size_t o = 0; o < p.outer; ++o) {
    std::size_t fidx = 0;
    for (std::size_t i = 0; i < p.outer_rank; ++i) fidx += idx[i] * p.f_stride[i];
    fn(o * p.inner, fidx, p.inner);
    for (std::size_t i = p.outer_rank; i-- > 0;) {
      if (++idx[i] < p.x_extent[i]) break;
      idx[i] = 0;
    }
  }
}

}  // namespace

ComplexTensor broadcast_mul(const Tensor& filt, const ComplexTensor& x) {
  if (filt.precision() != x.precision())
    throw ConfigError("broadcast_mul operands carry different precisions");
  const BroadcastPlan p = plan_broadcast(filt.shape(), x.shape());
  ComplexTensor out(x.shape(), x.precision());
  const double* fr = filt.data();
  const double* xr = x.re.data();
  const double* xi = x.im.data();
  double* yr = out.re.raw();
  double* yi = out.im.raw();
  for_each_block(p, [&](std::size_t base, std::size_t fidx, std::size_t n) {
    const double f = fr[fidx];
    for (std::size_t i = 0; i < n; ++i) {
      yr[base + i] = f * xr[base + i];
      yi[base + i] = f * xi[base + i];
    }
  });
  out.re.quantize();
  out.im.quantize();
  return out;
}

ComplexTensor broadcast_mul(const ComplexTensor& filt, const ComplexTensor& x) {
  if (filt.precision() != x.precision())
    throw ConfigError("broadcast_mul operands carry different precisions");
  const BroadcastPlan p = plan_broadcast(filt.shape(), x.shape());
  ComplexTensor out(x.shape(), x.precision());
  const double* fr = filt.re.data();
  const double* fi = filt.im.data();
  const double* xr = x.re.data();
  const double* xi = x.im.data();
  double* yr = out.re.raw();
  double* yi = out.im.raw();
  for_each_block(p, [&](std::size_t base, std::size_t fidx, std::size_t n) {
    const double a = fr[fidx];
    const double b = fi[fidx];
    for (std::size_t i = 0; i < n; ++i) {
      yr[base + i] = a * xr[base + i] - b * xi[base + i];
      yi[base + i] = a * xi[base + i] + b * xr[base + i];
    }
  });
  out.re.quantize();
  out.im.quantize();
  return out;
}

// ---------------------------------------------------------------------------
// Container I/O

namespace {

constexpr char kMagic[4] = {'F', 'S', 'R', 'T'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kMaxRank = 16;

void write_bytes(std::ofstream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void write_payload(std::ofstream& out, const Tensor& t) {
  if (t.precision() == Precision::Double) {
    write_bytes(out, t.data(), t.numel() * sizeof(double));
  } else {
    std::vector<float> buf(t.numel());
    for (std::size_t i = 0; i < t.numel(); ++i) buf[i] = static_cast<float>(t[i]);
    write_bytes(out, buf.data(), buf.size() * sizeof(float));
  }
}

void write_header(std::ofstream& out, const Tensor& t, bool is_complex) {
  write_bytes(out, kMagic, 4);
  write_bytes(out, &kVersion, 4);
  const std::uint8_t dtype = t.precision() == Precision::Single ? 0 : 1;
  const std::uint8_t cplx = is_complex ? 1 : 0;
  const std::uint8_t ndim = static_cast<std::uint8_t>(t.rank());
  write_bytes(out, &dtype, 1);
  write_bytes(out, &cplx, 1);
  write_bytes(out, &ndim, 1);
  for (std::size_t e : t.shape()) {
    const std::uint64_t e64 = e;
    write_bytes(out, &e64, 8);
  }
}

struct LoadedHeader {
  Precision prec;
  bool is_complex;
  Shape shape;
  std::size_t payload_offset;
};

LoadedHeader read_header(std::ifstream& in, const std::string& path) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError(path + ": bad magic", 0);
  std::uint32_t version = 0;
  if (!in.read(reinterpret_cast<char*>(&version), 4) || version != kVersion)
    throw FormatError(path + ": unsupported version " + std::to_string(version), 4);
  std::uint8_t dtype = 0, cplx = 0, ndim = 0;
  if (!in.read(reinterpret_cast<char*>(&dtype), 1) || dtype > 1)
    throw FormatError(path + ": bad dtype tag", 8);
  if (!in.read(reinterpret_cast<char*>(&cplx), 1) || cplx > 1)
    throw FormatError(path + ": bad complex flag", 9);
  if (!in.read(reinterpret_cast<char*>(&ndim), 1) || ndim > kMaxRank)
    throw FormatError(path + ": bad ndim", 10);
  LoadedHeader h;
  h.prec = dtype == 0 ? Precision::Single : Precision::Double;
  h.is_complex = cplx == 1;
  h.shape.resize(ndim);
  for (std::size_t i = 0; i < ndim; ++i) {
    std::uint64_t e = 0;
    if (!in.read(reinterpret_cast<char*>(&e), 8) || e == 0)
      throw FormatError(path + ": bad extent", 11 + 8 * i);
    h.shape[i] = static_cast<std::size_t>(e);
  }
  h.payload_offset = 11 + 8 * ndim;
  return h;
}

Tensor read_payload(std::ifstream& in, const LoadedHeader& h, const std::string& path,
                    std::size_t plane_offset) {
  const std::size_t n = numel_of(h.shape);
  std::vector<double> data(n);
  const std::size_t at = h.payload_offset + plane_offset;
  if (h.prec == Precision::Double) {
    if (!in.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(n * sizeof(double))))
      throw FormatError(path + ": truncated payload", at);
  } else {
    std::vector<float> buf(n);
    if (!in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(n * sizeof(float))))
      throw FormatError(path + ": truncated payload", at);
    for (std::size_t i = 0; i < n; ++i) data[i] = static_cast<double>(buf[i]);
  }
  return Tensor(h.shape, std::move(data), h.prec);
}

}  // namespace

void save_tensor(const Tensor& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_header(out, t, false);
  write_payload(out, t);
  if (!out) throw IoError("write failed: " + path);
}

void save_tensor(const ComplexTensor& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_header(out, t.re, true);
  write_payload(out, t.re);
  write_payload(out, t.im);
  if (!out) throw IoError("write failed: " + path);
}

Tensor load_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const LoadedHeader h = read_header(in, path);
  if (h.is_complex) throw FormatError(path + ": expected a real tensor, file is complex", 9);
  return read_payload(in, h, path, 0);
}

ComplexTensor load_complex_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const LoadedHeader h = read_header(in, path);
  if (!h.is_complex) throw FormatError(path + ": expected a complex tensor, file is real", 9);
  const std::size_t plane =
      numel_of(h.shape) * (h.prec == Precision::Double ? sizeof(double) : sizeof(float));
  Tensor re = read_payload(in, h, path, 0);
  Tensor im = read_payload(in, h, path, plane);
  return ComplexTensor(std::move(re), std::move(im));
}

}  // namespace fsr
