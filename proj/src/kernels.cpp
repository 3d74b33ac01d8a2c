#include "fdkp/kernels.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "fdkp/error.hpp"
#include "fdkp/log.hpp"

namespace fdkp {

namespace {

double tanh_over_r(double r) {
  r = std::abs(r);
  if (r < 1e-4) {
    const double r2 = r * r;
    return 1.0 - r2 / 3.0 + 2.0 * r2 * r2 / 15.0 - 17.0 * r2 * r2 * r2 / 315.0;
  }
  return std::tanh(r) / r;
}

double green_profile(double r) {
  const double s = 1.0 + r * r;
  return 1.0 / (s * s);
}

}  // namespace

KernelSpec::KernelSpec(KernelFamily family, std::string name, RadialSymbol profile)
    : family_(family), name_(std::move(name)), profile_(std::move(profile)) {}

KernelSpec KernelSpec::whitham_shallow() {
  return KernelSpec(KernelFamily::WhithamShallow, "whitham_shallow", tanh_over_r);
}

KernelSpec KernelSpec::green_exponential() {
  return KernelSpec(KernelFamily::GreenExponential, "green_exponential",
                    green_profile);
}

KernelSpec KernelSpec::custom(std::string name, RadialSymbol profile) {
  if (!profile) throw Error(ErrorCode::InvalidArgument, "custom kernel has no profile");
  const double at_origin = profile(0.0);
  if (std::abs(at_origin - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "custom kernel '" << name << "' violates normalization: beta_hat(0) = "
        << at_origin;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  return KernelSpec(KernelFamily::CustomRadial, std::move(name), std::move(profile));
}

double KernelSpec::radial(double r) const { return profile_(std::abs(r)); }

KernelFamily parse_kernel_family(const std::string& text) {
  if (text == "whitham_shallow") return KernelFamily::WhithamShallow;
  if (text == "green_exponential") return KernelFamily::GreenExponential;
  if (text == "custom") return KernelFamily::CustomRadial;
  throw Error(ErrorCode::InvalidConfig, "unknown kernel family '" + text + "'");
}

double beta_hat(const KernelSpec& kernel, double k, double l) {
  return kernel.radial(std::hypot(k, l));
}

double m_symbol(const KernelSpec& kernel, double k, double l) {
  const double b = beta_hat(kernel, k, l);
  if (!(b > 0.0)) {
    std::ostringstream msg;
    msg << "beta_hat(" << k << ", " << l << ") = " << b << " is not positive";
    throw Error(ErrorCode::NonPositiveSymbol, msg.str());
  }
  return 1.0 / b - 1.0;
}

double p_symbol(const KernelSpec& kernel, double k, double l) {
  const double b = beta_hat(kernel, k, l);
  if (!(b >= 0.0)) {
    std::ostringstream msg;
    msg << "beta_hat(" << k << ", " << l << ") = " << b << " is negative";
    throw Error(ErrorCode::NonPositiveSymbol, msg.str());
  }
  if (k == 0.0) return 0.0;
  const double ratio = l / k;
  return std::sqrt((1.0 + ratio * ratio) * b);
}

double nu_coefficient(const KernelSpec& kernel) {
  auto second_difference = [&](double h) {
    return (kernel.radial(h) - 2.0 * kernel.radial(0.0) + kernel.radial(-h)) / (h * h);
  };
  constexpr double h = 1e-3;
  const double coarse = second_difference(h);
  const double fine = second_difference(0.5 * h);
  const double curvature = (4.0 * fine - coarse) / 3.0;
  const double nu = -0.25 * curvature;
  if (!(nu > 0.0)) {
    log::warn("kernel '" + kernel.name() + "' has non-positive long-wave coefficient nu = " +
              std::to_string(nu));
  }
  return nu;
}

double omega(const DispersionQuery& query, const KernelSpec& kernel, double nu) {
  const double k = query.k;
  const double l = query.l;
  switch (query.mode) {
    case DispersionMode::Full:
      return std::sqrt((k * k + l * l) * beta_hat(kernel, k, l));
    case DispersionMode::KpLongWave:
      if (k == 0.0) {
        throw Error(ErrorCode::SingularLongWave,
                    "long-wave dispersion relation is singular at k = 0");
      }
      return k * (1.0 - nu * k * k + l * l / (2.0 * k * k));
  }
  return 0.0;
}

void check_kernel_positive(const KernelSpec& kernel, std::span<const double> kx,
                           std::span<const double> ky) {
  for (double l : ky) {
    for (double k : kx) {
      const double b = beta_hat(kernel, k, l);
      if (!(b > 0.0) || !std::isfinite(b)) {
        std::ostringstream msg;
        msg << "kernel '" << kernel.name() << "' symbol is not positive at (" << k << ", "
            << l << "): " << b;
        throw Error(ErrorCode::NonPositiveSymbol, msg.str());
      }
    }
  }
}

}  // namespace fdkp
