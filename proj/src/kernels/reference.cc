// kernels/reference.cc

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

#include "kernels/reference.h"

namespace adaptasr::kernels::reference {

void gemm_nn(int m, int k, int n, const double* A, const double* B, double* C,
             double beta) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = beta == 0.0 ? 0.0 : beta * C[static_cast<long>(i) * n + j];
      for (int p = 0; p < k; ++p) {
        acc += A[static_cast<long>(i) * k + p] * B[static_cast<long>(p) * n + j];
      }
      C[static_cast<long>(i) * n + j] = acc;
    }
  }
}

void gemm_nt(int m, int k, int n, const double* A, const double* B, double* C,
             double beta) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = beta == 0.0 ? 0.0 : beta * C[static_cast<long>(i) * n + j];
      for (int p = 0; p < k; ++p) {
        acc += A[static_cast<long>(i) * k + p] * B[static_cast<long>(j) * k + p];
      }
      C[static_cast<long>(i) * n + j] = acc;
    }
  }
}

void gemm_tn(int m, int k, int n, const double* A, const double* B, double* C,
             double beta) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = beta == 0.0 ? 0.0 : beta * C[static_cast<long>(i) * n + j];
      for (int p = 0; p < k; ++p) {
        acc += A[static_cast<long>(p) * m + i] * B[static_cast<long>(p) * n + j];
      }
      C[static_cast<long>(i) * n + j] = acc;
    }
  }
}

void conv2d(const double* x, int cin, int h, int w_in, const double* w,
            const double* bias, int cout, int kh, int kw, int stride, int pad,
            double* out) {
  const int oh = (h + 2 * pad - kh) / stride + 1;
  const int ow = (w_in + 2 * pad - kw) / stride + 1;
  for (int co = 0; co < cout; ++co) {
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        double acc = bias ? bias[co] : 0.0;
        for (int ci = 0; ci < cin; ++ci) {
          for (int ky = 0; ky < kh; ++ky) {
            for (int kx = 0; kx < kw; ++kx) {
              const int iy = oy * stride + ky - pad;
              const int ix = ox * stride + kx - pad;
              if (iy < 0 || iy >= h || ix < 0 || ix >= w_in) continue;
              acc += x[(static_cast<long>(ci) * h + iy) * w_in + ix] *
                     w[((static_cast<long>(co) * cin + ci) * kh + ky) * kw + kx];
            }
          }
        }
        out[(static_cast<long>(co) * oh + oy) * ow + ox] = acc;
      }
    }
  }
}

void conv1d(const double* x, int cin, int len, const double* w,
            const double* bias, int cout, int k, int stride, int pad,
            double* out) {
  const int olen = (len + 2 * pad - k) / stride + 1;
  for (int co = 0; co < cout; ++co) {
    for (int ot = 0; ot < olen; ++ot) {
      double acc = bias ? bias[co] : 0.0;
      for (int ci = 0; ci < cin; ++ci) {
        for (int kk = 0; kk < k; ++kk) {
          const int it = ot * stride + kk - pad;
          if (it < 0 || it >= len) continue;
          acc += x[static_cast<long>(ci) * len + it] *
                 w[(static_cast<long>(co) * cin + ci) * k + kk];
        }
      }
      out[static_cast<long>(co) * olen + ot] = acc;
    }
  }
}

void conv1d_transpose(const double* x, int cin, int len, const double* w,
                      const double* bias, int cout, int k, int stride,
                      double* out) {
  const int olen = (len - 1) * stride + k;
  for (int co = 0; co < cout; ++co) {
    for (int ot = 0; ot < olen; ++ot) {
      double acc = bias ? bias[co] : 0.0;
      for (int ci = 0; ci < cin; ++ci) {
        for (int kk = 0; kk < k; ++kk) {
          const int num = ot - kk;
          if (num < 0 || num % stride != 0) continue;
          const int it = num / stride;
          if (it >= len) continue;
          acc += x[static_cast<long>(ci) * len + it] *
                 w[(static_cast<long>(ci) * cout + co) * k + kk];
        }
      }
      out[static_cast<long>(co) * olen + ot] = acc;
    }
  }
}

void depthwise_conv_time(const double* x, int t, int c, const double* w,
                         const double* bias, int k, int pad, double* out) {
  for (int ot = 0; ot < t; ++ot) {
    for (int ch = 0; ch < c; ++ch) {
      double acc = bias ? bias[ch] : 0.0;
      for (int kk = 0; kk < k; ++kk) {
        const int it = ot + kk - pad;
        if (it < 0 || it >= t) continue;
        acc += x[static_cast<long>(it) * c + ch] * w[static_cast<long>(ch) * k + kk];
      }
      out[static_cast<long>(ot) * c + ch] = acc;
    }
  }
}

}  // namespace adaptasr::kernels::reference
