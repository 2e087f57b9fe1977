// kernels/reference.h

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

#ifndef ADAPTASR_KERNELS_REFERENCE_H_
#define ADAPTASR_KERNELS_REFERENCE_H_

// Serial textbook implementations of the hot kernels. Kept as the oracle the
// parallel kernels are tested against; per output element the accumulation
// order (ascending reduction index) matches kernels/kernels.h, so agreement
// is bit-exact, not approximate.

namespace adaptasr::kernels::reference {

void gemm_nn(int m, int k, int n, const double* A, const double* B, double* C,
             double beta);
void gemm_nt(int m, int k, int n, const double* A, const double* B, double* C,
             double beta);
void gemm_tn(int m, int k, int n, const double* A, const double* B, double* C,
             double beta);

void conv2d(const double* x, int cin, int h, int w_in, const double* w,
            const double* bias, int cout, int kh, int kw, int stride, int pad,
            double* out);
void conv1d(const double* x, int cin, int len, const double* w,
            const double* bias, int cout, int k, int stride, int pad,
            double* out);
void conv1d_transpose(const double* x, int cin, int len, const double* w,
                      const double* bias, int cout, int k, int stride,
                      double* out);
void depthwise_conv_time(const double* x, int t, int c, const double* w,
                         const double* bias, int k, int pad, double* out);

}  // namespace adaptasr::kernels::reference

#endif  // ADAPTASR_KERNELS_REFERENCE_H_
