#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace tmef {

/// Kernel classes g_t(y) whose conditional expectations define the integral
/// transforms used to build martingale differences.
enum class KernelFamily {
  CfReal,   ///< (cos(ty), sin(ty)); characteristic function as a real pair
  Mgf,      ///< exp(ty)
  Pgf,      ///< t^y
  Laplace,  ///< exp(-ty)
  Moment,   ///< y^t, t a positive integer
};

std::string_view to_string(KernelFamily family);
std::optional<KernelFamily> parse_kernel_family(std::string_view name);

/// One kernel value. Real families use `re` only; CfReal stores
/// (cos, sin) in (re, im).
struct KernelValue {
  double re = 0.0;
  double im = 0.0;
};

/// Number of real components a single index contributes to a kernel vector.
constexpr int components_per_point(KernelFamily family) {
  return family == KernelFamily::CfReal ? 2 : 1;
}

/// The index where the kernel is constant (zero-variance martingale
/// difference): 1 for Pgf, 0 for every other family.
constexpr double degenerate_index(KernelFamily family) {
  return family == KernelFamily::Pgf ? 1.0 : 0.0;
}

/// True when `t` is an admissible evaluation index for `family`.
bool in_index_domain(KernelFamily family, double t);

/// Throws IndexOutOfDomain when `t` is not admissible.
void require_index(KernelFamily family, double t);

/// g_t(y). Throws IndexOutOfDomain for excluded indices and Overflow when
/// the value is not representable.
KernelValue eval(KernelFamily family, double t, double y);

/// g_t(y) for any real t, including the degenerate index. Used where a
/// closure index may land on the constant kernel.
KernelValue eval_unchecked(KernelFamily family, double t, double y);

/// Closure index v(t, s) with g_t * g_s = g_v. Defined for every family
/// except CfReal (Unsupported); see cf_product_indices for that case.
double mult_rule(KernelFamily family, double t, double s);

/// Which half of the real characteristic-function pair.
enum class CfPart { Cos, Sin };

/// weight * part(index * y)
struct CfTerm {
  CfPart part;
  double weight;
  double index;
};

/// Product-to-sum expansion of one product of CF kernel components.
using CfExpansion = std::array<CfTerm, 2>;

/// Expansion of part_a(t y) * part_b(s y) into terms evaluated at t - s and
/// t + s.
CfExpansion cf_product(CfPart a, double t, CfPart b, double s);

/// The three distinct products of the pair at (t, s).
struct CfProductIndices {
  CfExpansion cos_cos;
  CfExpansion sin_sin;
  CfExpansion sin_cos;  ///< sin(ty) cos(sy)
};

CfProductIndices cf_product_indices(double t, double s);

}  // namespace tmef
