// Copyright 2026 The ltamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batched one-step images of an affine template and their successor cell
// ranges. The scalar and AVX2 variants evaluate the same operations in the
// same order and agree bit for bit.

#ifndef LTAMP_KERNELS_HPP_
#define LTAMP_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ltamp {

// Inclusive cell index ranges; x_lo < 0 marks an image that leaves the grid.
struct SuccessorBox {
  std::int16_t x_lo = -1;
  std::int16_t x_hi = -1;
  std::int16_t v_lo = -1;
  std::int16_t v_hi = -1;

  bool valid() const { return x_lo >= 0; }
  int count() const { return valid() ? (x_hi - x_lo + 1) * (v_hi - v_lo + 1) : 0; }
  bool operator==(const SuccessorBox&) const = default;
};

struct BoxKernelArgs {
  const double* x = nullptr;
  const double* v = nullptr;
  std::size_t n = 0;
  // xddot = k x + m, one RK4 step of length h.
  double k = 0.0;
  double m = 0.0;
  double h = 0.02;
  double infl_x = 0.0;
  double infl_v = 0.0;
  double x_min = 0.0;
  double v_min = 0.0;
  double eta_x = 1.0;
  double eta_v = 1.0;
  int nx = 0;
  int nv = 0;
  SuccessorBox* out = nullptr;
  // Optional nominal images.
  double* img_x = nullptr;
  double* img_v = nullptr;
};

using BoxKernel = void (*)(const BoxKernelArgs&);

void successor_boxes_scalar(const BoxKernelArgs& args);
void successor_boxes_avx2(const BoxKernelArgs& args);

bool avx2_available();
// AVX2 when the CPU has it and LTAMP_FORCE_SCALAR is unset.
BoxKernel select_box_kernel();
std::string_view selected_kernel_name();

}  // namespace ltamp

#endif  // LTAMP_KERNELS_HPP_
