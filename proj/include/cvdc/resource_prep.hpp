#pragma once

// Multimode resource states: N alternately squeezed vacua entangled by a
// chain of N-1 nearest-neighbour beam splitters B12(tau1), B23(tau2), ...

#include "cvdc/phase_space.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace cvdc {

/// Identifier of the calibrated phase conventions, written into serialized
/// output so results can be traced back to the convention that produced them.
inline constexpr std::string_view kConventionId =
    "bs=[[sqrt(t),sqrt(1-t)],[sqrt(1-t),-sqrt(t)]]x(q,p);squeeze=P,Q,P,...;chain=B12-first;"
    "hbar=1,vac=1/2";

struct ResourceSpec {
  int n_modes = 3;
  double squeezing = 0.0;
  std::vector<double> taus;

  /// Throws std::invalid_argument on n_modes < 2, negative squeezing, a tau
  /// count other than n_modes - 1, or any tau outside [0, 1].
  void validate() const;
};

/// Squeezed quadrature of each input mode: Momentum, Position, Momentum, ...
QuadratureSelection alternating_pattern(int n_modes);

/// Product of single-mode squeezers following alternating_pattern().
SymplecticTransform squeezing_layer(int n_modes, double r);

/// B_{(N-1)N}(tau_{N-1}) ... B_23(tau2) B_12(tau1): B12 acts first.
SymplecticTransform preparation_chain(int n_modes, std::span<const double> taus);

/// Pure N-mode resource state with zero displacement.
GaussianState prepare_resource(const ResourceSpec& spec);

/// Closed-form 6x6 covariance of the three-mode resource, assembled entry by
/// entry. Used to pin the beam-splitter and squeezing conventions.
Matrix three_mode_reference_cov(double r, double tau1, double tau2);

}  // namespace cvdc
