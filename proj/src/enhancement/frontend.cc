// enhancement/frontend.cc

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

#include "enhancement/frontend.h"

namespace adaptasr::enhancement {

std::string frontend_kind_name(FrontendKind k) {
  return k == FrontendKind::masknet ? "masknet" : "demucs_lite";
}

Mat waveform_to_mat(const corpus::Waveform& w) {
  Mat m(1, static_cast<int>(w.size()));
  for (size_t i = 0; i < w.size(); ++i) m.data()[i] = w[i];
  return m;
}

Mat Frontend::enhanced_logmel(const corpus::Waveform& noisy,
                              const features::Analyzer& an) {
  tape::Graph g;
  const Forward f = forward(g, g.constant(waveform_to_mat(noisy)), an);
  return g.value(f.features);
}

}  // namespace adaptasr::enhancement
