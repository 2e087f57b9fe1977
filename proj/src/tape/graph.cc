// tape/graph.cc

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

#include "tape/graph.h"

#include <cmath>
#include <cstring>

#include "core/util.h"
#include "kernels/kernels.h"

namespace adaptasr::tape {

namespace {

double sigmoid_scalar(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

int Graph::add_node(Mat value, bool needs_grad, BackwardFn bwd) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  n.backward = std::move(bwd);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Graph::leaf(Mat value, bool needs_grad) {
  return add_node(std::move(value), needs_grad, nullptr);
}

int Graph::param(Param& p) {
  Node n;
  n.external = &p.value;
  n.needs_grad = p.trainable;
  n.bound = &p;
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

const Mat& Graph::value(int id) const {
  const Node& n = nodes_[id];
  return n.external ? *n.external : n.value;
}

Mat Graph::grad_of(int id) const {
  const Node& n = nodes_[id];
  if (n.grad_alloc) return n.grad;
  return Mat(value(id).rows(), value(id).cols());
}

Mat* Graph::accum(int id) {
  Node& n = nodes_[id];
  if (!n.needs_grad) return nullptr;
  if (!n.grad_alloc) {
    n.grad = Mat(value(id).rows(), value(id).cols());
    n.grad_alloc = true;
  }
  return &n.grad;
}

void Graph::backward(int root) {
  require(value(root).rows() == 1 && value(root).cols() == 1,
          "backward root must be a 1x1 scalar node");
  require(nodes_[root].needs_grad, "backward root does not require gradient");
  accum(root)->fill(1.0);
  for (int id = root; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.grad_alloc) continue;
    if (n.backward) n.backward(*this, n.grad);
    if (n.bound) {
      Param& p = *n.bound;
      if (p.grad.size() != p.value.size()) {
        p.grad = Mat(p.value.rows(), p.value.cols());
      }
      for (size_t i = 0; i < p.grad.size(); ++i) {
        p.grad.data()[i] += n.grad.data()[i];
      }
    }
  }
}

// ---------------------------------------------------------------------------
// elementwise / broadcast
// ---------------------------------------------------------------------------

int Graph::add(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.same_shape(B), "add: shape mismatch");
  Mat out = A;
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] += B.data()[i];
  return add_node(std::move(out), needs_grad(a) || needs_grad(b),
                  [a, b](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      for (size_t i = 0; i < dy.size(); ++i)
                        da->data()[i] += dy.data()[i];
                    }
                    if (Mat* db = g.accum(b)) {
                      for (size_t i = 0; i < dy.size(); ++i)
                        db->data()[i] += dy.data()[i];
                    }
                  });
}

int Graph::sub(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.same_shape(B), "sub: shape mismatch");
  Mat out = A;
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] -= B.data()[i];
  return add_node(std::move(out), needs_grad(a) || needs_grad(b),
                  [a, b](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      for (size_t i = 0; i < dy.size(); ++i)
                        da->data()[i] += dy.data()[i];
                    }
                    if (Mat* db = g.accum(b)) {
                      for (size_t i = 0; i < dy.size(); ++i)
                        db->data()[i] -= dy.data()[i];
                    }
                  });
}

int Graph::mul(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.same_shape(B), "mul: shape mismatch");
  Mat out = A;
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] *= B.data()[i];
  return add_node(std::move(out), needs_grad(a) || needs_grad(b),
                  [a, b](Graph& g, const Mat& dy) {
                    const Mat& A = g.value(a);
                    const Mat& B = g.value(b);
                    if (Mat* da = g.accum(a)) {
                      for (size_t i = 0; i < dy.size(); ++i)
                        da->data()[i] += dy.data()[i] * B.data()[i];
                    }
                    if (Mat* db = g.accum(b)) {
                      for (size_t i = 0; i < dy.size(); ++i)
                        db->data()[i] += dy.data()[i] * A.data()[i];
                    }
                  });
}

int Graph::scale(int a, double c) {
  Mat out = value(a);
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] *= c;
  return add_node(std::move(out), needs_grad(a),
                  [a, c](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      for (size_t i = 0; i < dy.size(); ++i)
                        da->data()[i] += c * dy.data()[i];
                    }
                  });
}

int Graph::add_row(int a, int bias) {
  const Mat& A = value(a);
  const Mat& B = value(bias);
  require(B.rows() == 1 && B.cols() == A.cols(), "add_row: bias shape");
  Mat out = A;
  for (int r = 0; r < out.rows(); ++r) {
    double* orow = out.row(r);
    for (int c = 0; c < out.cols(); ++c) orow[c] += B.data()[c];
  }
  return add_node(std::move(out), needs_grad(a) || needs_grad(bias),
                  [a, bias](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      for (size_t i = 0; i < dy.size(); ++i)
                        da->data()[i] += dy.data()[i];
                    }
                    if (Mat* db = g.accum(bias)) {
                      for (int r = 0; r < dy.rows(); ++r) {
                        const double* drow = dy.row(r);
                        for (int c = 0; c < dy.cols(); ++c)
                          db->data()[c] += drow[c];
                      }
                    }
                  });
}

int Graph::mul_row(int a, int rowvec) {
  const Mat& A = value(a);
  const Mat& R = value(rowvec);
  require(R.rows() == 1 && R.cols() == A.cols(), "mul_row: shape");
  Mat out = A;
  for (int r = 0; r < out.rows(); ++r) {
    double* orow = out.row(r);
    for (int c = 0; c < out.cols(); ++c) orow[c] *= R.data()[c];
  }
  return add_node(std::move(out), needs_grad(a) || needs_grad(rowvec),
                  [a, rowvec](Graph& g, const Mat& dy) {
                    const Mat& A = g.value(a);
                    const Mat& R = g.value(rowvec);
                    if (Mat* da = g.accum(a)) {
                      for (int r = 0; r < dy.rows(); ++r)
                        for (int c = 0; c < dy.cols(); ++c)
                          (*da)(r, c) += dy(r, c) * R.data()[c];
                    }
                    if (Mat* dr = g.accum(rowvec)) {
                      for (int r = 0; r < dy.rows(); ++r)
                        for (int c = 0; c < dy.cols(); ++c)
                          dr->data()[c] += dy(r, c) * A(r, c);
                    }
                  });
}

int Graph::relu(int a) {
  Mat out = value(a);
  for (size_t i = 0; i < out.size(); ++i)
    if (out.data()[i] < 0.0) out.data()[i] = 0.0;
  return add_node(std::move(out), needs_grad(a),
                  [a](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      const Mat& A = g.value(a);
                      for (size_t i = 0; i < dy.size(); ++i)
                        if (A.data()[i] > 0.0) da->data()[i] += dy.data()[i];
                    }
                  });
}

int Graph::swish(int a) {
  const Mat& A = value(a);
  Mat out(A.rows(), A.cols());
  for (size_t i = 0; i < out.size(); ++i) {
    const double x = A.data()[i];
    out.data()[i] = x * sigmoid_scalar(x);
  }
  return add_node(std::move(out), needs_grad(a),
                  [a](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      const Mat& A = g.value(a);
                      for (size_t i = 0; i < dy.size(); ++i) {
                        const double x = A.data()[i];
                        const double s = sigmoid_scalar(x);
                        da->data()[i] += dy.data()[i] * (s * (1.0 + x * (1.0 - s)));
                      }
                    }
                  });
}

int Graph::sigmoid(int a) {
  const Mat& A = value(a);
  Mat out(A.rows(), A.cols());
  for (size_t i = 0; i < out.size(); ++i)
    out.data()[i] = sigmoid_scalar(A.data()[i]);
  return add_node(std::move(out), needs_grad(a),
                  [a, self = static_cast<int>(nodes_.size())](Graph& g,
                                                              const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      const Mat& Y = g.value(self);
                      for (size_t i = 0; i < dy.size(); ++i) {
                        const double y = Y.data()[i];
                        da->data()[i] += dy.data()[i] * y * (1.0 - y);
                      }
                    }
                  });
}

int Graph::tanh_act(int a) {
  const Mat& A = value(a);
  Mat out(A.rows(), A.cols());
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] = std::tanh(A.data()[i]);
  return add_node(std::move(out), needs_grad(a),
                  [a, self = static_cast<int>(nodes_.size())](Graph& g,
                                                              const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      const Mat& Y = g.value(self);
                      for (size_t i = 0; i < dy.size(); ++i) {
                        const double y = Y.data()[i];
                        da->data()[i] += dy.data()[i] * (1.0 - y * y);
                      }
                    }
                  });
}

int Graph::glu_cols(int a) {
  const Mat& A = value(a);
  require(A.cols() % 2 == 0, "glu_cols: even column count required");
  const int d = A.cols() / 2;
  Mat out(A.rows(), d);
  for (int r = 0; r < A.rows(); ++r) {
    const double* arow = A.row(r);
    double* orow = out.row(r);
    for (int c = 0; c < d; ++c)
      orow[c] = arow[c] * sigmoid_scalar(arow[d + c]);
  }
  return add_node(std::move(out), needs_grad(a),
                  [a, d](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      const Mat& A = g.value(a);
                      for (int r = 0; r < dy.rows(); ++r) {
                        const double* arow = A.row(r);
                        const double* drow = dy.row(r);
                        double* garow = da->row(r);
                        for (int c = 0; c < d; ++c) {
                          const double s = sigmoid_scalar(arow[d + c]);
                          garow[c] += drow[c] * s;
                          garow[d + c] +=
                              drow[c] * arow[c] * s * (1.0 - s);
                        }
                      }
                    }
                  });
}

int Graph::log_floor(int a, double eps) {
  const Mat& A = value(a);
  Mat out(A.rows(), A.cols());
  for (size_t i = 0; i < out.size(); ++i)
    out.data()[i] = std::log(std::max(A.data()[i], eps));
  return add_node(std::move(out), needs_grad(a),
                  [a, eps](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      const Mat& A = g.value(a);
                      for (size_t i = 0; i < dy.size(); ++i) {
                        const double x = A.data()[i];
                        if (x > eps) da->data()[i] += dy.data()[i] / x;
                      }
                    }
                  });
}

int Graph::sqrt_eps(int a, double eps) {
  const Mat& A = value(a);
  Mat out(A.rows(), A.cols());
  for (size_t i = 0; i < out.size(); ++i)
    out.data()[i] = std::sqrt(A.data()[i] + eps);
  return add_node(std::move(out), needs_grad(a),
                  [a, self = static_cast<int>(nodes_.size())](Graph& g,
                                                              const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      const Mat& Y = g.value(self);
                      for (size_t i = 0; i < dy.size(); ++i)
                        da->data()[i] += dy.data()[i] * 0.5 / Y.data()[i];
                    }
                  });
}

// ---------------------------------------------------------------------------
// linear algebra
// ---------------------------------------------------------------------------

int Graph::matmul(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.cols() == B.rows(), "matmul: inner dimension mismatch");
  Mat out(A.rows(), B.cols());
  kernels::gemm_nn(A.rows(), A.cols(), B.cols(), A.data(), B.data(), out.data(),
                   0.0);
  return add_node(std::move(out), needs_grad(a) || needs_grad(b),
                  [a, b](Graph& g, const Mat& dy) {
                    const Mat& A = g.value(a);
                    const Mat& B = g.value(b);
                    if (Mat* da = g.accum(a)) {
                      // dA = dY * B^T
                      kernels::gemm_nt(dy.rows(), dy.cols(), B.rows(),
                                       dy.data(), B.data(), da->data(), 1.0);
                    }
                    if (Mat* db = g.accum(b)) {
                      // dB = A^T * dY
                      kernels::gemm_tn(A.cols(), A.rows(), dy.cols(), A.data(),
                                       dy.data(), db->data(), 1.0);
                    }
                  });
}

int Graph::matmul_nt(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.cols() == B.cols(), "matmul_nt: inner dimension mismatch");
  Mat out(A.rows(), B.rows());
  kernels::gemm_nt(A.rows(), A.cols(), B.rows(), A.data(), B.data(), out.data(),
                   0.0);
  return add_node(std::move(out), needs_grad(a) || needs_grad(b),
                  [a, b](Graph& g, const Mat& dy) {
                    const Mat& A = g.value(a);
                    const Mat& B = g.value(b);
                    if (Mat* da = g.accum(a)) {
                      // dA = dY * B
                      kernels::gemm_nn(dy.rows(), dy.cols(), B.cols(),
                                       dy.data(), B.data(), da->data(), 1.0);
                    }
                    if (Mat* db = g.accum(b)) {
                      // dB = dY^T * A
                      kernels::gemm_tn(dy.cols(), dy.rows(), A.cols(),
                                       dy.data(), A.data(), db->data(), 1.0);
                    }
                  });
}

// ---------------------------------------------------------------------------
// shape
// ---------------------------------------------------------------------------

int Graph::reshape(int a, int rows, int cols) {
  const Mat& A = value(a);
  require(static_cast<size_t>(rows) * cols == A.size(), "reshape: size");
  Mat out(rows, cols);
  std::memcpy(out.data(), A.data(), A.size() * sizeof(double));
  return add_node(std::move(out), needs_grad(a),
                  [a](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      for (size_t i = 0; i < dy.size(); ++i)
                        da->data()[i] += dy.data()[i];
                    }
                  });
}

int Graph::slice_rows(int a, int r0, int r1) {
  const Mat& A = value(a);
  require(0 <= r0 && r0 < r1 && r1 <= A.rows(), "slice_rows: range");
  Mat out(r1 - r0, A.cols());
  std::memcpy(out.data(), A.row(r0), out.size() * sizeof(double));
  return add_node(std::move(out), needs_grad(a),
                  [a, r0](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      for (int r = 0; r < dy.rows(); ++r) {
                        double* drow = da->row(r0 + r);
                        const double* srow = dy.row(r);
                        for (int c = 0; c < dy.cols(); ++c) drow[c] += srow[c];
                      }
                    }
                  });
}

int Graph::slice_cols(int a, int c0, int c1) {
  const Mat& A = value(a);
  require(0 <= c0 && c0 < c1 && c1 <= A.cols(), "slice_cols: range");
  Mat out(A.rows(), c1 - c0);
  for (int r = 0; r < A.rows(); ++r)
    std::memcpy(out.row(r), A.row(r) + c0, out.cols() * sizeof(double));
  return add_node(std::move(out), needs_grad(a),
                  [a, c0](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      for (int r = 0; r < dy.rows(); ++r) {
                        double* drow = da->row(r) + c0;
                        const double* srow = dy.row(r);
                        for (int c = 0; c < dy.cols(); ++c) drow[c] += srow[c];
                      }
                    }
                  });
}

int Graph::concat_rows(const std::vector<int>& parts) {
  require(!parts.empty(), "concat_rows: empty");
  int rows = 0;
  const int cols = value(parts[0]).cols();
  bool ng = false;
  for (int p : parts) {
    require(value(p).cols() == cols, "concat_rows: column mismatch");
    rows += value(p).rows();
    ng = ng || needs_grad(p);
  }
  Mat out(rows, cols);
  int r = 0;
  for (int p : parts) {
    const Mat& P = value(p);
    std::memcpy(out.row(r), P.data(), P.size() * sizeof(double));
    r += P.rows();
  }
  return add_node(std::move(out), ng,
                  [parts](Graph& g, const Mat& dy) {
                    int r = 0;
                    for (int p : parts) {
                      const int pr = g.value(p).rows();
                      if (Mat* dp = g.accum(p)) {
                        for (int i = 0; i < pr; ++i) {
                          const double* srow = dy.row(r + i);
                          double* drow = dp->row(i);
                          for (int c = 0; c < dy.cols(); ++c) drow[c] += srow[c];
                        }
                      }
                      r += pr;
                    }
                  });
}

int Graph::concat_cols(const std::vector<int>& parts) {
  require(!parts.empty(), "concat_cols: empty");
  const int rows = value(parts[0]).rows();
  int cols = 0;
  bool ng = false;
  for (int p : parts) {
    require(value(p).rows() == rows, "concat_cols: row mismatch");
    cols += value(p).cols();
    ng = ng || needs_grad(p);
  }
  Mat out(rows, cols);
  int c = 0;
  for (int p : parts) {
    const Mat& P = value(p);
    for (int r = 0; r < rows; ++r)
      std::memcpy(out.row(r) + c, P.row(r), P.cols() * sizeof(double));
    c += P.cols();
  }
  return add_node(std::move(out), ng,
                  [parts](Graph& g, const Mat& dy) {
                    int c = 0;
                    for (int p : parts) {
                      const int pc = g.value(p).cols();
                      if (Mat* dp = g.accum(p)) {
                        for (int r = 0; r < dy.rows(); ++r) {
                          const double* srow = dy.row(r) + c;
                          double* drow = dp->row(r);
                          for (int j = 0; j < pc; ++j) drow[j] += srow[j];
                        }
                      }
                      c += pc;
                    }
                  });
}

int Graph::pad_cols(int a, int left, int right) {
  const Mat& A = value(a);
  require(left >= 0 && right >= 0, "pad_cols: negative padding");
  Mat out(A.rows(), left + A.cols() + right);
  for (int r = 0; r < A.rows(); ++r)
    std::memcpy(out.row(r) + left, A.row(r), A.cols() * sizeof(double));
  return add_node(std::move(out), needs_grad(a),
                  [a, left](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      for (int r = 0; r < da->rows(); ++r) {
                        const double* srow = dy.row(r) + left;
                        double* drow = da->row(r);
                        for (int c = 0; c < da->cols(); ++c) drow[c] += srow[c];
                      }
                    }
                  });
}

int Graph::permute_chw_to_hcw(int a, int c, int h, int w) {
  const Mat& A = value(a);
  require(A.rows() == c && A.cols() == h * w, "permute_chw_to_hcw: shape");
  Mat out(h, c * w);
  for (int ch = 0; ch < c; ++ch) {
    const double* arow = A.row(ch);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        out(y, ch * w + x) = arow[static_cast<long>(y) * w + x];
  }
  return add_node(std::move(out), needs_grad(a),
                  [a, c, h, w](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      for (int ch = 0; ch < c; ++ch) {
                        double* drow = da->row(ch);
                        for (int y = 0; y < h; ++y)
                          for (int x = 0; x < w; ++x)
                            drow[static_cast<long>(y) * w + x] +=
                                dy(y, ch * w + x);
                      }
                    }
                  });
}

// ---------------------------------------------------------------------------
// attention pieces
// ---------------------------------------------------------------------------

int Graph::row_softmax(int a, const Mat* mask) {
  const Mat& A = value(a);
  if (mask) require(mask->same_shape(A), "row_softmax: mask shape");
  Mat out(A.rows(), A.cols());
  for (int r = 0; r < A.rows(); ++r) {
    const double* arow = A.row(r);
    double* orow = out.row(r);
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < A.cols(); ++c) {
      const double v = arow[c] + (mask ? (*mask)(r, c) : 0.0);
      orow[c] = v;
      mx = std::max(mx, v);
    }
    double sum = 0.0;
    for (int c = 0; c < A.cols(); ++c) {
      orow[c] = std::exp(orow[c] - mx);
      sum += orow[c];
    }
    for (int c = 0; c < A.cols(); ++c) orow[c] /= sum;
  }
  return add_node(std::move(out), needs_grad(a),
                  [a, self = static_cast<int>(nodes_.size())](Graph& g,
                                                              const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      const Mat& Y = g.value(self);
                      for (int r = 0; r < dy.rows(); ++r) {
                        const double* yrow = Y.row(r);
                        const double* drow = dy.row(r);
                        double dot = 0.0;
                        for (int c = 0; c < dy.cols(); ++c)
                          dot += drow[c] * yrow[c];
                        double* garow = da->row(r);
                        for (int c = 0; c < dy.cols(); ++c)
                          garow[c] += yrow[c] * (drow[c] - dot);
                      }
                    }
                  });
}

int Graph::rel_shift(int a) {
  const Mat& A = value(a);
  const int t = A.rows();
  require(A.cols() == 2 * t - 1, "rel_shift: expected T x (2T-1)");
  Mat out(t, t);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) out(i, j) = A(i, t - 1 - i + j);
  return add_node(std::move(out), needs_grad(a),
                  [a, t](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      for (int i = 0; i < t; ++i)
                        for (int j = 0; j < t; ++j)
                          (*da)(i, t - 1 - i + j) += dy(i, j);
                    }
                  });
}

int Graph::layer_norm(int x, int gamma, int beta, double eps) {
  const Mat& X = value(x);
  const Mat& G = value(gamma);
  const Mat& B = value(beta);
  require(G.rows() == 1 && G.cols() == X.cols(), "layer_norm: gamma shape");
  require(B.rows() == 1 && B.cols() == X.cols(), "layer_norm: beta shape");
  const int n = X.cols();
  Mat out(X.rows(), n);
  Mat stats(X.rows(), 2);  // mean, inv-std per row
  for (int r = 0; r < X.rows(); ++r) {
    const double* xrow = X.row(r);
    double mean = 0.0;
    for (int c = 0; c < n; ++c) mean += xrow[c];
    mean /= n;
    double var = 0.0;
    for (int c = 0; c < n; ++c) {
      const double d = xrow[c] - mean;
      var += d * d;
    }
    var /= n;
    const double inv = 1.0 / std::sqrt(var + eps);
    stats(r, 0) = mean;
    stats(r, 1) = inv;
    double* orow = out.row(r);
    for (int c = 0; c < n; ++c)
      orow[c] = (xrow[c] - mean) * inv * G.data()[c] + B.data()[c];
  }
  const bool ng = needs_grad(x) || needs_grad(gamma) || needs_grad(beta);
  return add_node(
      std::move(out), ng,
      [x, gamma, beta, stats = std::move(stats)](Graph& g, const Mat& dy) {
        const Mat& X = g.value(x);
        const Mat& G = g.value(gamma);
        const int n = X.cols();
        Mat* dx = g.accum(x);
        Mat* dg = g.accum(gamma);
        Mat* db = g.accum(beta);
        for (int r = 0; r < X.rows(); ++r) {
          const double* xrow = X.row(r);
          const double* drow = dy.row(r);
          const double mean = stats(r, 0);
          const double inv = stats(r, 1);
          if (dg || db) {
            for (int c = 0; c < n; ++c) {
              if (dg) dg->data()[c] += drow[c] * (xrow[c] - mean) * inv;
              if (db) db->data()[c] += drow[c];
            }
          }
          if (dx) {
            double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
            for (int c = 0; c < n; ++c) {
              const double xhat = (xrow[c] - mean) * inv;
              const double dxhat = drow[c] * G.data()[c];
              sum_dxhat += dxhat;
              sum_dxhat_xhat += dxhat * xhat;
            }
            double* gxrow = dx->row(r);
            for (int c = 0; c < n; ++c) {
              const double xhat = (xrow[c] - mean) * inv;
              const double dxhat = drow[c] * G.data()[c];
              gxrow[c] += inv * (dxhat - sum_dxhat / n -
                                 xhat * sum_dxhat_xhat / n);
            }
          }
        }
      });
}

// ---------------------------------------------------------------------------
// embeddings
// ---------------------------------------------------------------------------

int Graph::embed(const std::vector<int>& ids, int table) {
  const Mat& W = value(table);
  Mat out(static_cast<int>(ids.size()), W.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    require(ids[i] >= 0 && ids[i] < W.rows(), "embed: id out of range");
    std::memcpy(out.row(static_cast<int>(i)), W.row(ids[i]),
                W.cols() * sizeof(double));
  }
  return add_node(std::move(out), needs_grad(table),
                  [ids, table](Graph& g, const Mat& dy) {
                    if (Mat* dw = g.accum(table)) {
                      for (size_t i = 0; i < ids.size(); ++i) {
                        double* drow = dw->row(ids[i]);
                        const double* srow = dy.row(static_cast<int>(i));
                        for (int c = 0; c < dy.cols(); ++c) drow[c] += srow[c];
                      }
                    }
                  });
}

// ---------------------------------------------------------------------------
// convolution
// ---------------------------------------------------------------------------

int Graph::conv2d(int x, int w, int bias, int cin, int h, int wdt, int cout,
                  int kh, int kw, int stride, int pad) {
  const Mat& X = value(x);
  const Mat& W = value(w);
  require(X.rows() == cin && X.cols() == h * wdt, "conv2d: input shape");
  require(W.rows() == cout && W.cols() == cin * kh * kw, "conv2d: weight shape");
  const int oh = kernels::conv_out_len(h, kh, stride, pad);
  const int ow = kernels::conv_out_len(wdt, kw, stride, pad);
  require(oh > 0 && ow > 0, "conv2d: input too small for kernel");
  const Mat* bmat = bias >= 0 ? &value(bias) : nullptr;
  if (bmat) require(bmat->size() == static_cast<size_t>(cout), "conv2d: bias");
  Mat out(cout, oh * ow);
  kernels::conv2d(X.data(), cin, h, wdt, W.data(),
                  bmat ? bmat->data() : nullptr, cout, kh, kw, stride, pad,
                  out.data());
  const bool ng = needs_grad(x) || needs_grad(w) ||
                  (bias >= 0 && needs_grad(bias));
  return add_node(
      std::move(out), ng,
      [x, w, bias, cin, h, wdt, cout, kh, kw, stride, pad](Graph& g,
                                                           const Mat& dy) {
        const Mat& X = g.value(x);
        const Mat& W = g.value(w);
        if (Mat* dx = g.accum(x)) {
          Mat tmp(dx->rows(), dx->cols());
          kernels::conv2d_grad_x(dy.data(), W.data(), cin, h, wdt, cout, kh,
                                 kw, stride, pad, tmp.data());
          for (size_t i = 0; i < tmp.size(); ++i)
            dx->data()[i] += tmp.data()[i];
        }
        Mat* dw = g.accum(w);
        Mat* db = bias >= 0 ? g.accum(bias) : nullptr;
        if (dw || db) {
          Mat tw(W.rows(), W.cols());
          Mat tb(1, cout);
          kernels::conv2d_grad_w(dy.data(), X.data(), cin, h, wdt, cout, kh,
                                 kw, stride, pad, tw.data(), tb.data());
          if (dw)
            for (size_t i = 0; i < tw.size(); ++i)
              dw->data()[i] += tw.data()[i];
          if (db)
            for (int i = 0; i < cout; ++i) db->data()[i] += tb.data()[i];
        }
      });
}

int Graph::conv1d(int x, int w, int bias, int cin, int len, int cout, int k,
                  int stride, int pad) {
  const Mat& X = value(x);
  const Mat& W = value(w);
  require(X.rows() == cin && X.cols() == len, "conv1d: input shape");
  require(W.rows() == cout && W.cols() == cin * k, "conv1d: weight shape");
  const int olen = kernels::conv_out_len(len, k, stride, pad);
  require(olen > 0, "conv1d: input too short for kernel");
  const Mat* bmat = bias >= 0 ? &value(bias) : nullptr;
  Mat out(cout, olen);
  kernels::conv1d(X.data(), cin, len, W.data(), bmat ? bmat->data() : nullptr,
                  cout, k, stride, pad, out.data());
  const bool ng = needs_grad(x) || needs_grad(w) ||
                  (bias >= 0 && needs_grad(bias));
  return add_node(
      std::move(out), ng,
      [x, w, bias, cin, len, cout, k, stride, pad](Graph& g, const Mat& dy) {
        const Mat& X = g.value(x);
        const Mat& W = g.value(w);
        if (Mat* dx = g.accum(x)) {
          Mat tmp(cin, len);
          kernels::conv1d_grad_x(dy.data(), W.data(), cin, len, cout, k,
                                 stride, pad, tmp.data());
          for (size_t i = 0; i < tmp.size(); ++i)
            dx->data()[i] += tmp.data()[i];
        }
        Mat* dw = g.accum(w);
        Mat* db = bias >= 0 ? g.accum(bias) : nullptr;
        if (dw || db) {
          Mat tw(W.rows(), W.cols());
          Mat tb(1, cout);
          kernels::conv1d_grad_w(dy.data(), X.data(), cin, len, cout, k,
                                 stride, pad, tw.data(), tb.data());
          if (dw)
            for (size_t i = 0; i < tw.size(); ++i)
              dw->data()[i] += tw.data()[i];
          if (db)
            for (int i = 0; i < cout; ++i) db->data()[i] += tb.data()[i];
        }
      });
}

int Graph::conv1d_transpose(int x, int w, int bias, int cin, int len, int cout,
                            int k, int stride) {
  const Mat& X = value(x);
  const Mat& W = value(w);
  require(X.rows() == cin && X.cols() == len, "conv1d_transpose: input shape");
  require(W.rows() == cin && W.cols() == cout * k,
          "conv1d_transpose: weight shape");
  const int olen = (len - 1) * stride + k;
  const Mat* bmat = bias >= 0 ? &value(bias) : nullptr;
  Mat out(cout, olen);
  kernels::conv1d_transpose(X.data(), cin, len, W.data(),
                            bmat ? bmat->data() : nullptr, cout, k, stride,
                            out.data());
  const bool ng = needs_grad(x) || needs_grad(w) ||
                  (bias >= 0 && needs_grad(bias));
  return add_node(
      std::move(out), ng,
      [x, w, bias, cin, len, cout, k, stride](Graph& g, const Mat& dy) {
        const Mat& X = g.value(x);
        const Mat& W = g.value(w);
        if (Mat* dx = g.accum(x)) {
          Mat tmp(cin, len);
          kernels::conv1d_transpose_grad_x(dy.data(), W.data(), cin, len, cout,
                                           k, stride, tmp.data());
          for (size_t i = 0; i < tmp.size(); ++i)
            dx->data()[i] += tmp.data()[i];
        }
        Mat* dw = g.accum(w);
        Mat* db = bias >= 0 ? g.accum(bias) : nullptr;
        if (dw || db) {
          Mat tw(W.rows(), W.cols());
          Mat tb(1, cout);
          kernels::conv1d_transpose_grad_w(dy.data(), X.data(), cin, len, cout,
                                           k, stride, tw.data(), tb.data());
          if (dw)
            for (size_t i = 0; i < tw.size(); ++i)
              dw->data()[i] += tw.data()[i];
          if (db)
            for (int i = 0; i < cout; ++i) db->data()[i] += tb.data()[i];
        }
      });
}

int Graph::depthwise_conv_time(int x, int w, int bias, int k, int pad) {
  const Mat& X = value(x);
  const Mat& W = value(w);
  const int t = X.rows(), c = X.cols();
  require(W.rows() == c && W.cols() == k, "depthwise_conv_time: weight shape");
  const Mat* bmat = bias >= 0 ? &value(bias) : nullptr;
  if (bmat) require(bmat->size() == static_cast<size_t>(c), "depthwise: bias");
  Mat out(t, c);
  kernels::depthwise_conv_time(X.data(), t, c, W.data(),
                               bmat ? bmat->data() : nullptr, k, pad,
                               out.data());
  const bool ng = needs_grad(x) || needs_grad(w) ||
                  (bias >= 0 && needs_grad(bias));
  return add_node(
      std::move(out), ng,
      [x, w, bias, t, c, k, pad](Graph& g, const Mat& dy) {
        const Mat& X = g.value(x);
        const Mat& W = g.value(w);
        if (Mat* dx = g.accum(x)) {
          Mat tmp(t, c);
          kernels::depthwise_conv_time_grad_x(dy.data(), W.data(), t, c, k,
                                              pad, tmp.data());
          for (size_t i = 0; i < tmp.size(); ++i)
            dx->data()[i] += tmp.data()[i];
        }
        Mat* dw = g.accum(w);
        Mat* db = bias >= 0 ? g.accum(bias) : nullptr;
        if (dw || db) {
          Mat tw(c, k);
          Mat tb(1, c);
          kernels::depthwise_conv_time_grad_w(dy.data(), X.data(), t, c, k,
                                              pad, tw.data(), tb.data());
          if (dw)
            for (size_t i = 0; i < tw.size(); ++i)
              dw->data()[i] += tw.data()[i];
          if (db)
            for (int i = 0; i < c; ++i) db->data()[i] += tb.data()[i];
        }
      });
}

// ---------------------------------------------------------------------------
// signal
// ---------------------------------------------------------------------------

int Graph::frame_signal(int x, int win, int hop) {
  const Mat& X = value(x);
  require(X.rows() == 1, "frame_signal: expects a 1 x N waveform");
  const int n = X.cols();
  require(n >= win, "frame_signal: waveform shorter than one window");
  const int t = 1 + (n - win) / hop;
  Mat out(t, win);
  for (int f = 0; f < t; ++f)
    std::memcpy(out.row(f), X.data() + static_cast<long>(f) * hop,
                win * sizeof(double));
  return add_node(std::move(out), needs_grad(x),
                  [x, win, hop](Graph& g, const Mat& dy) {
                    if (Mat* dx = g.accum(x)) {
                      for (int f = 0; f < dy.rows(); ++f) {
                        const double* srow = dy.row(f);
                        double* d = dx->data() + static_cast<long>(f) * hop;
                        for (int j = 0; j < win; ++j) d[j] += srow[j];
                      }
                    }
                  });
}

// ---------------------------------------------------------------------------
// reductions / losses
// ---------------------------------------------------------------------------

int Graph::mean_all(int a) {
  const Mat& A = value(a);
  require(A.size() > 0, "mean_all: empty");
  double s = 0.0;
  for (size_t i = 0; i < A.size(); ++i) s += A.data()[i];
  const double inv = 1.0 / static_cast<double>(A.size());
  return add_node(Mat::scalar(s * inv), needs_grad(a),
                  [a, inv](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      const double gscale = dy(0, 0) * inv;
                      for (size_t i = 0; i < da->size(); ++i)
                        da->data()[i] += gscale;
                    }
                  });
}

int Graph::weighted_sum(int a, Mat weights) {
  const Mat& A = value(a);
  require(weights.same_shape(A), "weighted_sum: shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < A.size(); ++i) s += A.data()[i] * weights.data()[i];
  return add_node(Mat::scalar(s), needs_grad(a),
                  [a, w = std::move(weights)](Graph& g, const Mat& dy) {
                    if (Mat* da = g.accum(a)) {
                      const double gs = dy(0, 0);
                      for (size_t i = 0; i < da->size(); ++i)
                        da->data()[i] += gs * w.data()[i];
                    }
                  });
}

int Graph::l1_loss(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.same_shape(B), "l1_loss: shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < A.size(); ++i)
    s += std::fabs(A.data()[i] - B.data()[i]);
  const double inv = 1.0 / static_cast<double>(A.size());
  return add_node(Mat::scalar(s * inv), needs_grad(a) || needs_grad(b),
                  [a, b, inv](Graph& g, const Mat& dy) {
                    const Mat& A = g.value(a);
                    const Mat& B = g.value(b);
                    const double gs = dy(0, 0) * inv;
                    Mat* da = g.accum(a);
                    Mat* db = g.accum(b);
                    for (size_t i = 0; i < A.size(); ++i) {
                      const double d = A.data()[i] - B.data()[i];
                      const double sgn = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
                      if (da) da->data()[i] += gs * sgn;
                      if (db) db->data()[i] -= gs * sgn;
                    }
                  });
}

int Graph::mse_loss(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.same_shape(B), "mse_loss: shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < A.size(); ++i) {
    const double d = A.data()[i] - B.data()[i];
    s += d * d;
  }
  const double inv = 1.0 / static_cast<double>(A.size());
  return add_node(Mat::scalar(s * inv), needs_grad(a) || needs_grad(b),
                  [a, b, inv](Graph& g, const Mat& dy) {
                    const Mat& A = g.value(a);
                    const Mat& B = g.value(b);
                    const double gs = dy(0, 0) * inv * 2.0;
                    Mat* da = g.accum(a);
                    Mat* db = g.accum(b);
                    for (size_t i = 0; i < A.size(); ++i) {
                      const double d = A.data()[i] - B.data()[i];
                      if (da) da->data()[i] += gs * d;
                      if (db) db->data()[i] -= gs * d;
                    }
                  });
}

int Graph::label_smoothed_ce(int logits, const std::vector<int>& targets,
                             double smoothing) {
  const Mat& L = value(logits);
  const int rows = L.rows(), v = L.cols();
  require(rows == static_cast<int>(targets.size()),
          "label_smoothed_ce: target length mismatch");
  require(rows > 0, "label_smoothed_ce: empty target");
  Mat probs(rows, v);
  double loss = 0.0;
  for (int r = 0; r < rows; ++r) {
    require(targets[r] >= 0 && targets[r] < v,
            "label_smoothed_ce: target id out of range");
    const double* lrow = L.row(r);
    double mx = lrow[0];
    for (int c = 1; c < v; ++c) mx = std::max(mx, lrow[c]);
    double sum = 0.0;
    double* prow = probs.row(r);
    for (int c = 0; c < v; ++c) {
      prow[c] = std::exp(lrow[c] - mx);
      sum += prow[c];
    }
    const double log_sum = std::log(sum) + mx;
    double row_loss = 0.0;
    for (int c = 0; c < v; ++c) {
      prow[c] /= sum;
      const double q = (c == targets[r] ? 1.0 - smoothing : 0.0) + smoothing / v;
      row_loss -= q * (lrow[c] - log_sum);
    }
    loss += row_loss;
  }
  loss /= rows;
  return add_node(
      Mat::scalar(loss), needs_grad(logits),
      [logits, targets, smoothing, probs = std::move(probs)](Graph& g,
                                                             const Mat& dy) {
        if (Mat* dl = g.accum(logits)) {
          const int rows = probs.rows(), v = probs.cols();
          const double gs = dy(0, 0) / rows;
          for (int r = 0; r < rows; ++r) {
            const double* prow = probs.row(r);
            double* drow = dl->row(r);
            for (int c = 0; c < v; ++c) {
              const double q =
                  (c == targets[r] ? 1.0 - smoothing : 0.0) + smoothing / v;
              drow[c] += gs * (prow[c] - q);
            }
          }
        }
      });
}

}  // namespace adaptasr::tape
