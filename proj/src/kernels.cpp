#include "tmef/kernels.hpp"

#include <cmath>
#include <string>

#include "tmef/error.hpp"

namespace tmef {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::CfReal: return "cf";
    case KernelFamily::Mgf: return "mgf";
    case KernelFamily::Pgf: return "pgf";
    case KernelFamily::Laplace: return "laplace";
    case KernelFamily::Moment: return "moment";
  }
  return "unknown";
}

std::optional<KernelFamily> parse_kernel_family(std::string_view name) {
  if (name == "cf" || name == "cf-real") return KernelFamily::CfReal;
  if (name == "mgf") return KernelFamily::Mgf;
  if (name == "pgf") return KernelFamily::Pgf;
  if (name == "laplace") return KernelFamily::Laplace;
  if (name == "moment") return KernelFamily::Moment;
  return std::nullopt;
}

bool in_index_domain(KernelFamily family, double t) {
  if (!std::isfinite(t)) return false;
  switch (family) {
    case KernelFamily::CfReal:
    case KernelFamily::Mgf:
    case KernelFamily::Laplace:
      return t != 0.0;
    case KernelFamily::Pgf:
      return t > 0.0 && t != 1.0;
    case KernelFamily::Moment:
      return t >= 1.0 && std::floor(t) == t;
  }
  return false;
}

void require_index(KernelFamily family, double t) {
  if (!in_index_domain(family, t)) {
    throw Error(ErrorCode::IndexOutOfDomain,
                "index " + std::to_string(t) + " is not admissible for kernel " +
                    std::string(to_string(family)));
  }
}

KernelValue eval(KernelFamily family, double t, double y) {
  require_index(family, t);
  if (!std::isfinite(y)) throw Error(ErrorCode::InvalidInput, "observation is not finite");
  return eval_unchecked(family, t, y);
}

KernelValue eval_unchecked(KernelFamily family, double t, double y) {
  KernelValue out;
  switch (family) {
    case KernelFamily::CfReal:
      out.re = std::cos(t * y);
      out.im = std::sin(t * y);
      return out;
    case KernelFamily::Mgf:
      out.re = std::exp(t * y);
      break;
    case KernelFamily::Laplace:
      out.re = std::exp(-t * y);
      break;
    case KernelFamily::Pgf:
      if (y < 0.0) throw Error(ErrorCode::InvalidInput, "pgf kernel needs a nonnegative observation");
      out.re = std::pow(t, y);
      break;
    case KernelFamily::Moment:
      out.re = std::pow(y, t);
      break;
  }
  if (!std::isfinite(out.re)) {
    throw Error(ErrorCode::Overflow, "kernel value overflows at t=" + std::to_string(t) +
                                         ", y=" + std::to_string(y));
  }
  return out;
}

double mult_rule(KernelFamily family, double t, double s) {
  require_index(family, t);
  require_index(family, s);
  switch (family) {
    case KernelFamily::CfReal:
      throw Error(ErrorCode::Unsupported, "cf kernel products go through cf_product_indices");
    case KernelFamily::Mgf:
    case KernelFamily::Laplace:
    case KernelFamily::Moment:
      return t + s;
    case KernelFamily::Pgf: {
      const double v = t * s;
      // v == 1 is the constant kernel; still a member of the class.
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::NotClosed, "pgf product index leaves the class");
      }
      return v;
    }
  }
  throw Error(ErrorCode::Unsupported, "unknown kernel family");
}

CfExpansion cf_product(CfPart a, double t, CfPart b, double s) {
  if (a == CfPart::Cos && b == CfPart::Cos) {
    return {CfTerm{CfPart::Cos, 0.5, t - s}, CfTerm{CfPart::Cos, 0.5, t + s}};
  }
  if (a == CfPart::Sin && b == CfPart::Sin) {
    return {CfTerm{CfPart::Cos, 0.5, t - s}, CfTerm{CfPart::Cos, -0.5, t + s}};
  }
  if (a == CfPart::Sin) {  // sin(ty) cos(sy)
    return {CfTerm{CfPart::Sin, 0.5, t - s}, CfTerm{CfPart::Sin, 0.5, t + s}};
  }
  // cos(ty) sin(sy) = sin(sy) cos(ty)
  return {CfTerm{CfPart::Sin, 0.5, s - t}, CfTerm{CfPart::Sin, 0.5, s + t}};
}

CfProductIndices cf_product_indices(double t, double s) {
  if (t == 0.0 || s == 0.0) {
    throw Error(ErrorCode::IndexOutOfDomain, "cf product indices need nonzero t and s");
  }
  return {cf_product(CfPart::Cos, t, CfPart::Cos, s), cf_product(CfPart::Sin, t, CfPart::Sin, s),
          cf_product(CfPart::Sin, t, CfPart::Cos, s)};
}

}  // namespace tmef
