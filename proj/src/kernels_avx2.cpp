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

#include <immintrin.h>

#include <cstdint>

#include "ltamp/kernels.hpp"

namespace ltamp {

void successor_boxes_avx2(const BoxKernelArgs& a) {
  const __m256d k = _mm256_set1_pd(a.k);
  const __m256d m = _mm256_set1_pd(a.m);
  const __m256d h = _mm256_set1_pd(a.h);
  const __m256d hh = _mm256_set1_pd(0.5 * a.h);
  const __m256d h6 = _mm256_set1_pd(a.h / 6.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d ix = _mm256_set1_pd(a.infl_x);
  const __m256d iv = _mm256_set1_pd(a.infl_v);
  const __m256d x0 = _mm256_set1_pd(a.x_min);
  const __m256d v0 = _mm256_set1_pd(a.v_min);
  const __m256d ex = _mm256_set1_pd(a.eta_x);
  const __m256d ev = _mm256_set1_pd(a.eta_v);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d ux = _mm256_set1_pd(static_cast<double>(a.nx));
  const __m256d uv = _mm256_set1_pd(static_cast<double>(a.nv));
  const __m256d ux1 = _mm256_set1_pd(static_cast<double>(a.nx) - 1.0);
  const __m256d uv1 = _mm256_set1_pd(static_cast<double>(a.nv) - 1.0);
  auto affine = [&](__m256d x) { return _mm256_add_pd(_mm256_mul_pd(k, x), m); };

  std::size_t i = 0;
  for (; i + 4 <= a.n; i += 4) {
    const __m256d x = _mm256_loadu_pd(a.x + i);
    const __m256d v = _mm256_loadu_pd(a.v + i);
    const __m256d k1x = v;
    const __m256d k1v = affine(x);
    const __m256d k2x = _mm256_add_pd(v, _mm256_mul_pd(hh, k1v));
    const __m256d k2v = affine(_mm256_add_pd(x, _mm256_mul_pd(hh, k1x)));
    const __m256d k3x = _mm256_add_pd(v, _mm256_mul_pd(hh, k2v));
    const __m256d k3v = affine(_mm256_add_pd(x, _mm256_mul_pd(hh, k2x)));
    const __m256d k4x = _mm256_add_pd(v, _mm256_mul_pd(h, k3v));
    const __m256d k4v = affine(_mm256_add_pd(x, _mm256_mul_pd(h, k3x)));
    auto combine = [&](__m256d s, __m256d c1, __m256d c2, __m256d c3,
                       __m256d c4) {
      __m256d acc = _mm256_add_pd(c1, _mm256_mul_pd(two, c2));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(two, c3));
      acc = _mm256_add_pd(acc, c4);
      return _mm256_add_pd(s, _mm256_mul_pd(h6, acc));
    };
    const __m256d xn = combine(x, k1x, k2x, k3x, k4x);
    const __m256d vn = combine(v, k1v, k2v, k3v, k4v);
    if (a.img_x) _mm256_storeu_pd(a.img_x + i, xn);
    if (a.img_v) _mm256_storeu_pd(a.img_v + i, vn);

    const __m256d fx_lo = _mm256_floor_pd(
        _mm256_div_pd(_mm256_sub_pd(_mm256_sub_pd(xn, ix), x0), ex));
    const __m256d gx_hi =
        _mm256_div_pd(_mm256_sub_pd(_mm256_add_pd(xn, ix), x0), ex);
    const __m256d fv_lo = _mm256_floor_pd(
        _mm256_div_pd(_mm256_sub_pd(_mm256_sub_pd(vn, iv), v0), ev));
    const __m256d gv_hi =
        _mm256_div_pd(_mm256_sub_pd(_mm256_add_pd(vn, iv), v0), ev);
    // Ordered comparisons are false on NaN, as in the scalar path.
    __m256d ok = _mm256_cmp_pd(fx_lo, zero, _CMP_GE_OQ);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(gx_hi, ux, _CMP_LE_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(fv_lo, zero, _CMP_GE_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(gv_hi, uv, _CMP_LE_OQ));
    const int mask = _mm256_movemask_pd(ok);
    const __m256d fx_hi = _mm256_min_pd(_mm256_floor_pd(gx_hi), ux1);
    const __m256d fv_hi = _mm256_min_pd(_mm256_floor_pd(gv_hi), uv1);

    alignas(32) double lx[4], hx[4], lv[4], hv[4];
    _mm256_store_pd(lx, fx_lo);
    _mm256_store_pd(hx, fx_hi);
    _mm256_store_pd(lv, fv_lo);
    _mm256_store_pd(hv, fv_hi);
    for (int j = 0; j < 4; ++j) {
      SuccessorBox& b = a.out[i + j];
      if (!(mask & (1 << j))) {
        b = SuccessorBox{};
        continue;
      }
      b.x_lo = static_cast<std::int16_t>(lx[j]);
      b.x_hi = static_cast<std::int16_t>(hx[j]);
      b.v_lo = static_cast<std::int16_t>(lv[j]);
      b.v_hi = static_cast<std::int16_t>(hv[j]);
    }
  }
  if (i < a.n) {
    BoxKernelArgs tail = a;
    tail.x += i;
    tail.v += i;
    tail.n = a.n - i;
    tail.out += i;
    if (tail.img_x) tail.img_x += i;
    if (tail.img_v) tail.img_v += i;
    successor_boxes_scalar(tail);
  }
}

}  // namespace ltamp
