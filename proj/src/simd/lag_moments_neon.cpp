#include <arm_neon.h>

#include "tmef/simd/lag_moments.hpp"

namespace tmef::simd::detail {

LagPowerSums lag_power_sums_neon(const double* y, std::size_t n) {
  LagPowerSums out;
  if (n < 2) return out;
  const std::size_t steps = n - 1;
  const std::size_t body = steps - steps % 2;

  float64x2_t acc[kMaxLagPower + 1][kMaxLeadPower + 1];
  for (auto& row : acc)
    for (auto& v : row) v = vdupq_n_f64(0.0);

  const float64x2_t one = vdupq_n_f64(1.0);
  for (std::size_t j = 0; j < body; j += 2) {
    const float64x2_t x = vld1q_f64(y + j);
    const float64x2_t z = vld1q_f64(y + j + 1);
    const float64x2_t z2 = vmulq_f64(z, z);
    float64x2_t xa = one;
    for (int a = 0; a <= kMaxLagPower; ++a) {
      acc[a][0] = vaddq_f64(acc[a][0], xa);
      acc[a][1] = vfmaq_f64(acc[a][1], xa, z);
      acc[a][2] = vfmaq_f64(acc[a][2], xa, z2);
      xa = vmulq_f64(xa, x);
    }
  }
  for (int a = 0; a <= kMaxLagPower; ++a)
    for (int b = 0; b <= kMaxLeadPower; ++b) out.s[a][b] = vaddvq_f64(acc[a][b]);

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
