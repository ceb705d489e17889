#include <immintrin.h>

#include "tmef/simd/lag_moments.hpp"

namespace tmef::simd::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

LagPowerSums lag_power_sums_avx2(const double* y, std::size_t n) {
  LagPowerSums out;
  if (n < 2) return out;
  const std::size_t steps = n - 1;
  const std::size_t body = steps - steps % 4;

  __m256d acc[kMaxLagPower + 1][kMaxLeadPower + 1];
  for (auto& row : acc)
    for (auto& v : row) v = _mm256_setzero_pd();

  const __m256d one = _mm256_set1_pd(1.0);
  for (std::size_t j = 0; j < body; j += 4) {
    const __m256d x = _mm256_loadu_pd(y + j);
    const __m256d z = _mm256_loadu_pd(y + j + 1);
    const __m256d z2 = _mm256_mul_pd(z, z);
    __m256d xa = one;
    for (int a = 0; a <= kMaxLagPower; ++a) {
      acc[a][0] = _mm256_add_pd(acc[a][0], xa);
      acc[a][1] = _mm256_fmadd_pd(xa, z, acc[a][1]);
      acc[a][2] = _mm256_fmadd_pd(xa, z2, acc[a][2]);
      xa = _mm256_mul_pd(xa, x);
    }
  }
  for (int a = 0; a <= kMaxLagPower; ++a)
    for (int b = 0; b <= kMaxLeadPower; ++b) out.s[a][b] = hsum(acc[a][b]);

  // tail
  for (std::size_t j = body + 1; j < n; ++j) {
    const double x = y[j - 1], z = y[j];
    double xa = 1.0;
    for (int a = 0; a <= kMaxLagPower; ++a) {
      out.s[a][0] += xa;
      out.s[a][1] += xa * z;
      out.s[a][2] += xa * z * z;
      xa *= x;
    }
  }
  return out;
}

}  // namespace tmef::simd::detail
