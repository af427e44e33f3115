#include "cvdc/resource_prep.hpp"

#include <cmath>
#include <stdexcept>

namespace cvdc {

void ResourceSpec::validate() const {
  if (n_modes < 2) throw std::invalid_argument("ResourceSpec: n_modes must be >= 2");
  if (!(squeezing >= 0.0) || !std::isfinite(squeezing)) {
    throw std::invalid_argument("ResourceSpec: squeezing must be a finite value >= 0");
  }
  if (static_cast<int>(taus.size()) != n_modes - 1) {
    throw std::invalid_argument("ResourceSpec: expected n_modes - 1 transmissivities");
  }
  for (double t : taus) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("ResourceSpec: tau outside [0, 1]");
  }
}

QuadratureSelection alternating_pattern(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("alternating_pattern: n_modes must be >= 1");
  QuadratureSelection pattern(n_modes);
  for (int m = 0; m < n_modes; ++m) {
    pattern[m] = (m % 2 == 0) ? Quadrature::Momentum : Quadrature::Position;
  }
  return pattern;
}

SymplecticTransform squeezing_layer(int n_modes, double r) {
  const auto pattern = alternating_pattern(n_modes);
  auto s = SymplecticTransform::identity(n_modes);
  for (int m = 0; m < n_modes; ++m) s = single_mode_squeezer(n_modes, m, r, pattern[m]) * s;
  return s;
}

SymplecticTransform preparation_chain(int n_modes, std::span<const double> taus) {
  if (static_cast<int>(taus.size()) != n_modes - 1) {
    throw std::invalid_argument("preparation_chain: expected n_modes - 1 transmissivities");
  }
  auto s = SymplecticTransform::identity(n_modes);
  for (int k = 0; k + 1 < n_modes; ++k) s = beam_splitter(n_modes, k, k + 1, taus[k]) * s;
  return s;
}

GaussianState prepare_resource(const ResourceSpec& spec) {
  spec.validate();
  const auto total = preparation_chain(spec.n_modes, spec.taus) * squeezing_layer(spec.n_modes, spec.squeezing);
  return apply_symplectic(vacuum(spec.n_modes), total);
}

Matrix three_mode_reference_cov(double r, double tau1, double tau2) {
  if (!(r >= 0.0)) throw std::invalid_argument("three_mode_reference_cov: r must be >= 0");
  if (!(tau1 >= 0.0 && tau1 <= 1.0 && tau2 >= 0.0 && tau2 <= 1.0)) {
    throw std::invalid_argument("three_mode_reference_cov: tau outside [0, 1]");
  }
  const double e2 = std::exp(2.0 * r);
  const double em2 = std::exp(-2.0 * r);
  const double e4m1 = std::expm1(4.0 * r);
  const double sh = std::sinh(2.0 * r);
  const double ch = std::cosh(2.0 * r);

  const double a = 0.5 * em2 * (e4m1 * tau1 + 1.0);
  const double b = 0.5 * (em2 * tau1 + e2 * (1.0 - tau1));
  const double c = 0.5 * (sh * (1.0 - 2.0 * tau1 * tau2) + ch);
  const double d = 0.5 * em2 * (e4m1 * tau1 * tau2 + 1.0);
  const double e = 0.5 * (sh * (1.0 - 2.0 * tau1 * (1.0 - tau2)) + ch);
  const double f = 0.5 * em2 * (1.0 + tau1 * e4m1 * (1.0 - tau2));
  const double rr = std::sqrt(tau1 * tau2 * (1.0 - tau1)) * sh;
  const double ss = tau1 * std::sqrt(tau2 * (1.0 - tau2)) * sh;
  const double tt = std::sqrt(tau1 * (1.0 - tau1) * (1.0 - tau2)) * sh;

  Matrix m(6, 6);
  // clang-format off
  m <<  a,   0,   rr,  0,   tt,  0,
        0,   b,   0,  -rr,  0,  -tt,
        rr,  0,   c,   0,  -ss,  0,
        0,  -rr,  0,   d,   0,   ss,
        tt,  0,  -ss,  0,   e,   0,
        0,  -tt,  0,   ss,  0,   f;
  // clang-format on
  return m;
}

}  // namespace cvdc
