// kernels/kernels.cc

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

#include "kernels/kernels.h"

#include <omp.h>

#include <cstring>

namespace adaptasr::kernels {

namespace {
// Below this many multiply-adds the parallel-for fork costs more than it buys.
constexpr long kParallelGrain = 16384;
}  // namespace

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

void gemm_nn(int m, int k, int n, const double* A, const double* B, double* C,
             double beta) {
  const long work = static_cast<long>(m) * k * n;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && m > 1)
  for (int i = 0; i < m; ++i) {
    double* ci = C + static_cast<long>(i) * n;
    if (beta == 0.0) {
      std::memset(ci, 0, sizeof(double) * n);
    } else if (beta != 1.0) {
      for (int j = 0; j < n; ++j) ci[j] *= beta;
    }
    const double* ai = A + static_cast<long>(i) * k;
    for (int p = 0; p < k; ++p) {
      const double a = ai[p];
      const double* bp = B + static_cast<long>(p) * n;
      for (int j = 0; j < n; ++j) ci[j] += a * bp[j];
    }
  }
}

void gemm_nt(int m, int k, int n, const double* A, const double* B, double* C,
             double beta) {
  const long work = static_cast<long>(m) * k * n;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && m > 1)
  for (int i = 0; i < m; ++i) {
    const double* ai = A + static_cast<long>(i) * k;
    double* ci = C + static_cast<long>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* bj = B + static_cast<long>(j) * k;
      double acc = beta == 0.0 ? 0.0 : beta * ci[j];
      for (int p = 0; p < k; ++p) acc += ai[p] * bj[p];
      ci[j] = acc;
    }
  }
}

void gemm_tn(int m, int k, int n, const double* A, const double* B, double* C,
             double beta) {
  const long work = static_cast<long>(m) * k * n;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && m > 1)
  for (int i = 0; i < m; ++i) {
    double* ci = C + static_cast<long>(i) * n;
    if (beta == 0.0) {
      std::memset(ci, 0, sizeof(double) * n);
    } else if (beta != 1.0) {
      for (int j = 0; j < n; ++j) ci[j] *= beta;
    }
    for (int p = 0; p < k; ++p) {
      const double a = A[static_cast<long>(p) * m + i];
      const double* bp = B + static_cast<long>(p) * n;
      for (int j = 0; j < n; ++j) ci[j] += a * bp[j];
    }
  }
}

void conv2d(const double* x, int cin, int h, int w_in, const double* w,
            const double* bias, int cout, int kh, int kw, int stride, int pad,
            double* out) {
  const int oh = conv_out_len(h, kh, stride, pad);
  const int ow = conv_out_len(w_in, kw, stride, pad);
  const long work = static_cast<long>(cout) * oh * ow * cin * kh * kw;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && cout > 1)
  for (int co = 0; co < cout; ++co) {
    double* oc = out + static_cast<long>(co) * oh * ow;
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        double acc = bias ? bias[co] : 0.0;
        for (int ci = 0; ci < cin; ++ci) {
          const double* xc = x + static_cast<long>(ci) * h * w_in;
          const double* wc =
              w + ((static_cast<long>(co) * cin + ci) * kh) * kw;
          for (int ky = 0; ky < kh; ++ky) {
            const int iy = oy * stride + ky - pad;
            if (iy < 0 || iy >= h) continue;
            for (int kx = 0; kx < kw; ++kx) {
              const int ix = ox * stride + kx - pad;
              if (ix < 0 || ix >= w_in) continue;
              acc += xc[static_cast<long>(iy) * w_in + ix] *
                     wc[static_cast<long>(ky) * kw + kx];
            }
          }
        }
        oc[static_cast<long>(oy) * ow + ox] = acc;
      }
    }
  }
}

void conv2d_grad_x(const double* dout, const double* w, int cin, int h,
                   int w_in, int cout, int kh, int kw, int stride, int pad,
                   double* dx) {
  const int oh = conv_out_len(h, kh, stride, pad);
  const int ow = conv_out_len(w_in, kw, stride, pad);
  const long work = static_cast<long>(cin) * h * w_in * cout * kh * kw;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && cin > 1)
  for (int ci = 0; ci < cin; ++ci) {
    double* dxc = dx + static_cast<long>(ci) * h * w_in;
    for (int iy = 0; iy < h; ++iy) {
      for (int ix = 0; ix < w_in; ++ix) {
        double acc = 0.0;
        for (int co = 0; co < cout; ++co) {
          const double* dc = dout + static_cast<long>(co) * oh * ow;
          const double* wc =
              w + ((static_cast<long>(co) * cin + ci) * kh) * kw;
          for (int ky = 0; ky < kh; ++ky) {
            const int num_y = iy + pad - ky;
            if (num_y < 0 || num_y % stride != 0) continue;
            const int oy = num_y / stride;
            if (oy >= oh) continue;
            for (int kx = 0; kx < kw; ++kx) {
              const int num_x = ix + pad - kx;
              if (num_x < 0 || num_x % stride != 0) continue;
              const int ox = num_x / stride;
              if (ox >= ow) continue;
              acc += dc[static_cast<long>(oy) * ow + ox] *
                     wc[static_cast<long>(ky) * kw + kx];
            }
          }
        }
        dxc[static_cast<long>(iy) * w_in + ix] = acc;
      }
    }
  }
}

void conv2d_grad_w(const double* dout, const double* x, int cin, int h,
                   int w_in, int cout, int kh, int kw, int stride, int pad,
                   double* dw, double* dbias) {
  const int oh = conv_out_len(h, kh, stride, pad);
  const int ow = conv_out_len(w_in, kw, stride, pad);
  const long work = static_cast<long>(cout) * cin * kh * kw * oh * ow;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && cout > 1)
  for (int co = 0; co < cout; ++co) {
    const double* dc = dout + static_cast<long>(co) * oh * ow;
    if (dbias) {
      double acc = 0.0;
      for (long i = 0; i < static_cast<long>(oh) * ow; ++i) acc += dc[i];
      dbias[co] = acc;
    }
    for (int ci = 0; ci < cin; ++ci) {
      const double* xc = x + static_cast<long>(ci) * h * w_in;
      double* wc = dw + ((static_cast<long>(co) * cin + ci) * kh) * kw;
      for (int ky = 0; ky < kh; ++ky) {
        for (int kx = 0; kx < kw; ++kx) {
          double acc = 0.0;
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy * stride + ky - pad;
            if (iy < 0 || iy >= h) continue;
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox * stride + kx - pad;
              if (ix < 0 || ix >= w_in) continue;
              acc += dc[static_cast<long>(oy) * ow + ox] *
                     xc[static_cast<long>(iy) * w_in + ix];
            }
          }
          wc[static_cast<long>(ky) * kw + kx] = acc;
        }
      }
    }
  }
}

void conv1d(const double* x, int cin, int len, const double* w,
            const double* bias, int cout, int k, int stride, int pad,
            double* out) {
  const int olen = conv_out_len(len, k, stride, pad);
  const long work = static_cast<long>(cout) * olen * cin * k;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && cout > 1)
  for (int co = 0; co < cout; ++co) {
    double* oc = out + static_cast<long>(co) * olen;
    for (int ot = 0; ot < olen; ++ot) {
      double acc = bias ? bias[co] : 0.0;
      for (int ci = 0; ci < cin; ++ci) {
        const double* xc = x + static_cast<long>(ci) * len;
        const double* wc = w + (static_cast<long>(co) * cin + ci) * k;
        for (int kk = 0; kk < k; ++kk) {
          const int it = ot * stride + kk - pad;
          if (it < 0 || it >= len) continue;
          acc += xc[it] * wc[kk];
        }
      }
      oc[ot] = acc;
    }
  }
}

void conv1d_grad_x(const double* dout, const double* w, int cin, int len,
                   int cout, int k, int stride, int pad, double* dx) {
  const int olen = conv_out_len(len, k, stride, pad);
  const long work = static_cast<long>(cin) * len * cout * k;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && cin > 1)
  for (int ci = 0; ci < cin; ++ci) {
    double* dxc = dx + static_cast<long>(ci) * len;
    for (int it = 0; it < len; ++it) {
      double acc = 0.0;
      for (int co = 0; co < cout; ++co) {
        const double* dc = dout + static_cast<long>(co) * olen;
        const double* wc = w + (static_cast<long>(co) * cin + ci) * k;
        for (int kk = 0; kk < k; ++kk) {
          const int num = it + pad - kk;
          if (num < 0 || num % stride != 0) continue;
          const int ot = num / stride;
          if (ot >= olen) continue;
          acc += dc[ot] * wc[kk];
        }
      }
      dxc[it] = acc;
    }
  }
}

void conv1d_grad_w(const double* dout, const double* x, int cin, int len,
                   int cout, int k, int stride, int pad, double* dw,
                   double* dbias) {
  const int olen = conv_out_len(len, k, stride, pad);
  const long work = static_cast<long>(cout) * cin * k * olen;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && cout > 1)
  for (int co = 0; co < cout; ++co) {
    const double* dc = dout + static_cast<long>(co) * olen;
    if (dbias) {
      double acc = 0.0;
      for (int ot = 0; ot < olen; ++ot) acc += dc[ot];
      dbias[co] = acc;
    }
    for (int ci = 0; ci < cin; ++ci) {
      const double* xc = x + static_cast<long>(ci) * len;
      double* wc = dw + (static_cast<long>(co) * cin + ci) * k;
      for (int kk = 0; kk < k; ++kk) {
        double acc = 0.0;
        for (int ot = 0; ot < olen; ++ot) {
          const int it = ot * stride + kk - pad;
          if (it < 0 || it >= len) continue;
          acc += dc[ot] * xc[it];
        }
        wc[kk] = acc;
      }
    }
  }
}

void conv1d_transpose(const double* x, int cin, int len, const double* w,
                      const double* bias, int cout, int k, int stride,
                      double* out) {
  const int olen = (len - 1) * stride + k;
  const long work = static_cast<long>(cout) * olen * cin * k;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && cout > 1)
  for (int co = 0; co < cout; ++co) {
    double* oc = out + static_cast<long>(co) * olen;
    for (int ot = 0; ot < olen; ++ot) {
      double acc = bias ? bias[co] : 0.0;
      for (int ci = 0; ci < cin; ++ci) {
        const double* xc = x + static_cast<long>(ci) * len;
        const double* wc = w + (static_cast<long>(ci) * cout + co) * k;
        for (int kk = 0; kk < k; ++kk) {
          const int num = ot - kk;
          if (num < 0 || num % stride != 0) continue;
          const int it = num / stride;
          if (it >= len) continue;
          acc += xc[it] * wc[kk];
        }
      }
      oc[ot] = acc;
    }
  }
}

void conv1d_transpose_grad_x(const double* dout, const double* w, int cin,
                             int len, int cout, int k, int stride, double* dx) {
  const int olen = (len - 1) * stride + k;
  const long work = static_cast<long>(cin) * len * cout * k;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && cin > 1)
  for (int ci = 0; ci < cin; ++ci) {
    double* dxc = dx + static_cast<long>(ci) * len;
    for (int it = 0; it < len; ++it) {
      double acc = 0.0;
      for (int co = 0; co < cout; ++co) {
        const double* dc = dout + static_cast<long>(co) * olen;
        const double* wc = w + (static_cast<long>(ci) * cout + co) * k;
        for (int kk = 0; kk < k; ++kk) {
          const int ot = it * stride + kk;
          if (ot >= olen) continue;
          acc += dc[ot] * wc[kk];
        }
      }
      dxc[it] = acc;
    }
  }
}

void conv1d_transpose_grad_w(const double* dout, const double* x, int cin,
                             int len, int cout, int k, int stride, double* dw,
                             double* dbias) {
  const int olen = (len - 1) * stride + k;
  const long work = static_cast<long>(cin) * cout * k * len;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && cin > 1)
  for (int ci = 0; ci < cin; ++ci) {
    const double* xc = x + static_cast<long>(ci) * len;
    for (int co = 0; co < cout; ++co) {
      const double* dc = dout + static_cast<long>(co) * olen;
      double* wc = dw + (static_cast<long>(ci) * cout + co) * k;
      for (int kk = 0; kk < k; ++kk) {
        double acc = 0.0;
        for (int it = 0; it < len; ++it) {
          const int ot = it * stride + kk;
          if (ot >= olen) continue;
          acc += dc[ot] * xc[it];
        }
        wc[kk] = acc;
      }
    }
  }
  if (dbias) {
    for (int co = 0; co < cout; ++co) {
      const double* dc = dout + static_cast<long>(co) * olen;
      double acc = 0.0;
      for (int ot = 0; ot < olen; ++ot) acc += dc[ot];
      dbias[co] = acc;
    }
  }
}

void depthwise_conv_time(const double* x, int t, int c, const double* w,
                         const double* bias, int k, int pad, double* out) {
  const long work = static_cast<long>(t) * c * k;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && t > 1)
  for (int ot = 0; ot < t; ++ot) {
    double* orow = out + static_cast<long>(ot) * c;
    for (int ch = 0; ch < c; ++ch) {
      double acc = bias ? bias[ch] : 0.0;
      const double* wc = w + static_cast<long>(ch) * k;
      for (int kk = 0; kk < k; ++kk) {
        const int it = ot + kk - pad;
        if (it < 0 || it >= t) continue;
        acc += x[static_cast<long>(it) * c + ch] * wc[kk];
      }
      orow[ch] = acc;
    }
  }
}

void depthwise_conv_time_grad_x(const double* dout, const double* w, int t,
                                int c, int k, int pad, double* dx) {
  const long work = static_cast<long>(t) * c * k;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && t > 1)
  for (int it = 0; it < t; ++it) {
    double* drow = dx + static_cast<long>(it) * c;
    for (int ch = 0; ch < c; ++ch) {
      double acc = 0.0;
      const double* wc = w + static_cast<long>(ch) * k;
      for (int kk = 0; kk < k; ++kk) {
        const int ot = it - kk + pad;
        if (ot < 0 || ot >= t) continue;
        acc += dout[static_cast<long>(ot) * c + ch] * wc[kk];
      }
      drow[ch] = acc;
    }
  }
}

void depthwise_conv_time_grad_w(const double* dout, const double* x, int t,
                                int c, int k, int pad, double* dw,
                                double* dbias) {
  const long work = static_cast<long>(t) * c * k;
#pragma omp parallel for schedule(static) if (work > kParallelGrain && c > 1)
  for (int ch = 0; ch < c; ++ch) {
    double* wc = dw + static_cast<long>(ch) * k;
    for (int kk = 0; kk < k; ++kk) {
      double acc = 0.0;
      for (int ot = 0; ot < t; ++ot) {
        const int it = ot + kk - pad;
        if (it < 0 || it >= t) continue;
        acc += dout[static_cast<long>(ot) * c + ch] *
               x[static_cast<long>(it) * c + ch];
      }
      wc[kk] = acc;
    }
    if (dbias) {
      double acc = 0.0;
      for (int ot = 0; ot < t; ++ot) acc += dout[static_cast<long>(ot) * c + ch];
      dbias[ch] = acc;
    }
  }
}

}  // namespace adaptasr::kernels
