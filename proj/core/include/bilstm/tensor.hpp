#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bilstm/errors.hpp"

namespace bilstm {

// Extents of a dense row-major array. Empty shape = rank-0 scalar.
using Shape = std::vector<int>;

int64_t shape_numel(const Shape& shape);
std::string shape_to_string(const Shape& shape);

// Dense 64-bit float array, row-major. The universal value carrier of the
// library: inputs, hidden states, weights, gradients.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);  // zero-filled
  Tensor(Shape shape, std::vector<double> values);

  static Tensor scalar(double value);
  static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }
  static Tensor full(Shape shape, double value);
  static Tensor identity(int n);

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t size() const { return static_cast<int64_t>(data_.size()); }
  int extent(int axis) const;

  // Rank-2 accessors.
  int rows() const;
  int cols() const;
  double& at(int r, int c) { return data_[static_cast<int64_t>(r) * cols() + c]; }
  double at(int r, int c) const { return data_[static_cast<int64_t>(r) * cols() + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](int64_t i) { return data_[i]; }
  double operator[](int64_t i) const { return data_[i]; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;

  // Explicit reshape; element count must be preserved.
  Tensor reshaped(Shape new_shape) const;

  bool operator==(const Tensor& other) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

// Throws a contract error naming `what` if any element of `t` is non-finite.
// Ops themselves allow non-finite propagation; callers opt in to validation.
void check_finite(const Tensor& t, const std::string& what);

}  // namespace bilstm
