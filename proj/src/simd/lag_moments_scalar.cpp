#include "tmef/simd/lag_moments.hpp"

namespace tmef::simd::detail {

LagPowerSums lag_power_sums_scalar(const double* y, std::size_t n) {
  LagPowerSums out;
  for (std::size_t j = 1; j < n; ++j) {
    const double x = y[j - 1];
    const double z = y[j];
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
