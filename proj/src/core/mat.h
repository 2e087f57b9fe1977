// core/mat.h

// Copyright 2026  adaptASR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ADAPTASR_CORE_MAT_H_
#define ADAPTASR_CORE_MAT_H_

#include <algorithm>
#include <cstddef>
#include <vector>

namespace adaptasr {

// Dense row-major double matrix. Row vectors are 1 x n, scalars 1 x 1.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols),
                            v_(static_cast<size_t>(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double* row(int r) { return v_.data() + static_cast<size_t>(r) * cols_; }
  const double* row(int r) const {
    return v_.data() + static_cast<size_t>(r) * cols_;
  }

  double& operator()(int r, int c) {
    return v_[static_cast<size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    return v_[static_cast<size_t>(r) * cols_ + c];
  }

  void fill(double x) { std::fill(v_.begin(), v_.end(), x); }
  void set_zero() { fill(0.0); }

  bool same_shape(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  static Mat scalar(double x) {
    Mat m(1, 1);
    m(0, 0) = x;
    return m;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

bool all_finite(const Mat& m);
double max_abs_diff(const Mat& a, const Mat& b);
bool bit_equal(const Mat& a, const Mat& b);

}  // namespace adaptasr

#endif  // ADAPTASR_CORE_MAT_H_
