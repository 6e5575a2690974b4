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

#include <cstdlib>

#include "ltamp/kernels.hpp"

namespace ltamp {
namespace {

bool force_scalar() {
  const char* v = std::getenv("LTAMP_FORCE_SCALAR");
  return v != nullptr && *v != '\0' && *v != '0';
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

BoxKernel select_box_kernel() {
  if (!force_scalar() && avx2_available()) return successor_boxes_avx2;
  return successor_boxes_scalar;
}

std::string_view selected_kernel_name() {
  return select_box_kernel() == successor_boxes_avx2 ? "avx2" : "scalar";
}

}  // namespace ltamp
