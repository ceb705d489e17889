#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace tmef::simd {

inline constexpr int kMaxLagPower = 4;   // power of y_{j-1}
inline constexpr int kMaxLeadPower = 2;  // power of y_j

/// S(a, b) = sum_{j=1}^{n-1} y[j-1]^a * y[j]^b for a <= 4, b <= 2.
struct LagPowerSums {
  std::array<std::array<double, kMaxLeadPower + 1>, kMaxLagPower + 1> s{};

  double operator()(int a, int b) const { return s[a][b]; }
};

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend backend);

/// Whether this build and this CPU can run `backend`.
bool backend_available(Backend backend);

/// Backend used by lag_power_sums: the widest available one, unless
/// overridden by force_backend or by TMEF_SIMD=scalar in the environment.
Backend active_backend();
void force_backend(Backend backend);
void reset_backend();

LagPowerSums lag_power_sums(std::span<const double> y);
LagPowerSums lag_power_sums(std::span<const double> y, Backend backend);

namespace detail {
LagPowerSums lag_power_sums_scalar(const double* y, std::size_t n);
LagPowerSums lag_power_sums_avx2(const double* y, std::size_t n);
LagPowerSums lag_power_sums_neon(const double* y, std::size_t n);
}  // namespace detail

}  // namespace tmef::simd
