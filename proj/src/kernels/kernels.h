// kernels/kernels.h

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

#ifndef ADAPTASR_KERNELS_KERNELS_H_
#define ADAPTASR_KERNELS_KERNELS_H_

// OpenMP-parallel dense kernels. Every output element is written by exactly
// one thread and accumulated in a fixed ascending order, so results are
// bit-identical for any thread count and bit-identical to the serial
// implementations in kernels/reference.h (which tests compare against).

namespace adaptasr::kernels {

void set_threads(int n);
int max_threads();

// C(m x n) = beta*C + A(m x k) * B(k x n)
void gemm_nn(int m, int k, int n, const double* A, const double* B, double* C,
             double beta);
// C(m x n) = beta*C + A(m x k) * B(n x k)^T
void gemm_nt(int m, int k, int n, const double* A, const double* B, double* C,
             double beta);
// C(m x n) = beta*C + A(k x m)^T * B(k x n)
void gemm_tn(int m, int k, int n, const double* A, const double* B, double* C,
             double beta);

// 2-D convolution, single image, channel-major layout: x[c][y][x],
// w[co][ci][ky][kx], out[co][y'][x']. Identical stride/pad on both axes.
void conv2d(const double* x, int cin, int h, int w_in, const double* w,
            const double* bias, int cout, int kh, int kw, int stride, int pad,
            double* out);
void conv2d_grad_x(const double* dout, const double* w, int cin, int h,
                   int w_in, int cout, int kh, int kw, int stride, int pad,
                   double* dx);
void conv2d_grad_w(const double* dout, const double* x, int cin, int h,
                   int w_in, int cout, int kh, int kw, int stride, int pad,
                   double* dw, double* dbias);

// 1-D convolution over channel-major sequences: x[c][t], w[co][ci][k].
void conv1d(const double* x, int cin, int len, const double* w,
            const double* bias, int cout, int k, int stride, int pad,
            double* out);
void conv1d_grad_x(const double* dout, const double* w, int cin, int len,
                   int cout, int k, int stride, int pad, double* dx);
void conv1d_grad_w(const double* dout, const double* x, int cin, int len,
                   int cout, int k, int stride, int pad, double* dw,
                   double* dbias);

// Transposed 1-D convolution, w[ci][co][k]; out length (len-1)*stride + k.
void conv1d_transpose(const double* x, int cin, int len, const double* w,
                      const double* bias, int cout, int k, int stride,
                      double* out);
void conv1d_transpose_grad_x(const double* dout, const double* w, int cin,
                             int len, int cout, int k, int stride, double* dx);
void conv1d_transpose_grad_w(const double* dout, const double* x, int cin,
                             int len, int cout, int k, int stride, double* dw,
                             double* dbias);

// Depthwise 1-D convolution along rows of a (T x C) matrix: each column c is
// filtered with its own kernel w[c][k]; stride 1, zero padding `pad`.
void depthwise_conv_time(const double* x, int t, int c, const double* w,
                         const double* bias, int k, int pad, double* out);
void depthwise_conv_time_grad_x(const double* dout, const double* w, int t,
                                int c, int k, int pad, double* dx);
void depthwise_conv_time_grad_w(const double* dout, const double* x, int t,
                                int c, int k, int pad, double* dw,
                                double* dbias);

inline int conv_out_len(int len, int k, int stride, int pad) {
  const int span = len + 2 * pad - k;
  return span < 0 ? 0 : span / stride + 1;
}

}  // namespace adaptasr::kernels

#endif  // ADAPTASR_KERNELS_KERNELS_H_
