#include "tmef/simd/lag_moments.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "tmef/error.hpp"

namespace tmef::simd {

namespace {

// -1: no override.
std::atomic<int> g_forced{-1};

bool cpu_has_avx2() {
#if defined(TMEF_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool env_forces_scalar() {
  const char* v = std::getenv("TMEF_SIMD");
  return v != nullptr && std::strcmp(v, "scalar") == 0;
}

Backend widest() {
  if (env_forces_scalar()) return Backend::Scalar;
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return cpu_has_avx2();
    case Backend::Neon:
#if defined(TMEF_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Backend>(forced);
  static const Backend detected = widest();
  return detected;
}

void force_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw Error(ErrorCode::Unsupported,
                "simd backend " + std::string(to_string(backend)) + " is not available here");
  }
  g_forced.store(static_cast<int>(backend), std::memory_order_relaxed);
}

void reset_backend() { g_forced.store(-1, std::memory_order_relaxed); }

LagPowerSums lag_power_sums(std::span<const double> y) { return lag_power_sums(y, active_backend()); }

LagPowerSums lag_power_sums(std::span<const double> y, Backend backend) {
  switch (backend) {
#if defined(TMEF_HAVE_AVX2_TU)
    case Backend::Avx2:
      if (cpu_has_avx2()) return detail::lag_power_sums_avx2(y.data(), y.size());
      break;
#endif
#if defined(TMEF_HAVE_NEON_TU)
    case Backend::Neon: return detail::lag_power_sums_neon(y.data(), y.size());
#endif
    default: break;
  }
  if (backend != Backend::Scalar) {
    throw Error(ErrorCode::Unsupported,
                "simd backend " + std::string(to_string(backend)) + " is not available here");
  }
  return detail::lag_power_sums_scalar(y.data(), y.size());
}

}  // namespace tmef::simd
