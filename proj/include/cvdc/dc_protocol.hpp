#pragma once

// Dense-coding pipeline: displacement encoding by N-1 senders, inverse-chain
// decoding and homodyne detection at the receiver, and the resulting linear
// Gaussian channel from messages to measurement outcomes.
//
// All information quantities are in nats.

#include "cvdc/phase_space.hpp"
#include "cvdc/resource_prep.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cvdc {

/// Which quadrature of which mode carries each real message component.
///
/// Component order is (alpha_1x, alpha_1y, alpha_2, ..., alpha_{N-1}):
/// sender 1 (mode 0) uses both quadratures, every further sender a single
/// quadrature, and the receiver (mode N-1) encodes nothing.
struct EncodingPlan {
  struct Component {
    int mode;
    Quadrature quadrature;
  };

  int n_modes = 3;
  double sigma_msg = 1.0;
  std::vector<Component> components;

  /// Sender m >= 1 displaces the quadrature that is anti-squeezed in its own
  /// input mode: momentum for odd m, position for even m.
  static EncodingPlan standard(int n_modes, double sigma_msg);

  void validate() const;
};

/// beta = M alpha + noise, noise ~ N(0, noise_cov), alpha ~ N(0, msg_cov).
struct LinearGaussianChannel {
  Matrix gain;
  Matrix noise_cov;
  Matrix msg_cov;

  void validate() const;
};

struct CapacityReport {
  int n_modes = 0;
  std::vector<double> taus;
  double nbar = 0.0;
  double squeezing = 0.0;
  double sigma_msg_sq = 0.0;
  double c_quantum = 0.0;
  double c_classical = 0.0;
  double delta = 0.0;
};

/// Product Gaussian (pi sigma^2)^{-N/2} exp(-sum alpha_i^2 / sigma^2).
double message_density(const EncodingPlan& plan, std::span<const double> alpha);

GaussianState encode(const GaussianState& state, const EncodingPlan& plan, std::span<const double> alpha);

/// Applies the inverse of preparation_chain(taus).
GaussianState decode_transform(const GaussianState& state, std::span<const double> taus);

/// Per decoded mode, the quadrature with the smaller variance. Ties resolve to
/// the squeezed quadrature of alternating_pattern().
QuadratureSelection min_variance_selection(const GaussianState& state);

LinearGaussianChannel build_channel(const ResourceSpec& spec, const EncodingPlan& plan,
                                    const QuadratureSelection& selection);

/// 1/2 ln det(I + noise^{-1} M msg M^T), evaluated as a difference of
/// Cholesky log-determinants.
double mutual_information(const LinearGaussianChannel& channel);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Sample average of ln p(beta|alpha) / p(beta). Deterministic for a seed.
MonteCarloEstimate mutual_information_mc(const LinearGaussianChannel& channel, std::size_t n_samples,
                                         std::uint64_t seed);

/// Total mean photon number of the sender modes,
/// (N-1) sinh^2 r + (N/2) sigma^2.
double photon_constraint(int n_modes, double r, double sigma_msg_sq);

struct OptimalParams {
  double squeezing = 0.0;
  double sigma_msg_sq = 0.0;
};

/// Squeezing from N = (N_modes-1) e^r sinh r and the message variance that
/// saturates the photon constraint.
OptimalParams optimal_params(int n_modes, double nbar);

/// Dense-coding capacity at the optimal (r, sigma^2) for the given energy.
CapacityReport capacity(int n_modes, std::span<const double> taus, double nbar);

/// Capacity evaluator for a fixed resource geometry. The channel gain does not
/// depend on r or sigma, so it is built once and reused across energies.
class CapacityEvaluator {
 public:
  CapacityEvaluator(int n_modes, std::span<const double> taus);

  int n_modes() const { return n_modes_; }
  const Matrix& gain() const { return gain_; }

  /// Channel at the optimal parameters for `nbar`.
  LinearGaussianChannel channel_at(double nbar) const;

  /// Equal to mutual_information(channel_at(nbar)). Noise and message
  /// covariances are multiples of the identity here, so the log-determinant
  /// reduces to 1/2 sum ln(1 + k lambda_i) over the eigenvalues of M M^T
  /// with k = e^{2r} sigma^2.
  double capacity(double nbar) const;

 private:
  int n_modes_;
  Matrix gain_;
  Vector gram_eigenvalues_;
};

}  // namespace cvdc
