#include "cvdc/dc_protocol.hpp"

#include "cvdc/advantage.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cvdc {

namespace {

double log_det_spd(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error(std::string(what) + ": matrix is not positive definite");
  }
  const Matrix& l = llt.matrixL();
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += 2.0 * std::log(l(i, i));
  return s;
}

void check_taus(int n_modes, std::span<const double> taus, const char* what) {
  if (n_modes < 2) throw std::invalid_argument(std::string(what) + ": n_modes must be >= 2");
  if (static_cast<int>(taus.size()) != n_modes - 1) {
    throw std::invalid_argument(std::string(what) + ": expected n_modes - 1 transmissivities");
  }
  for (double t : taus) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument(std::string(what) + ": tau outside [0, 1]");
  }
}

}  // namespace

EncodingPlan EncodingPlan::standard(int n_modes, double sigma_msg) {
  EncodingPlan plan;
  plan.n_modes = n_modes;
  plan.sigma_msg = sigma_msg;
  plan.components.push_back({0, Quadrature::Position});
  plan.components.push_back({0, Quadrature::Momentum});
  for (int m = 1; m + 1 < n_modes; ++m) {
    plan.components.push_back({m, (m % 2 == 1) ? Quadrature::Momentum : Quadrature::Position});
  }
  plan.validate();
  return plan;
}

void EncodingPlan::validate() const {
  if (n_modes < 2) throw std::invalid_argument("EncodingPlan: n_modes must be >= 2");
  if (!(sigma_msg > 0.0) || !std::isfinite(sigma_msg)) {
    throw std::invalid_argument("EncodingPlan: message standard deviation must be > 0");
  }
  if (static_cast<int>(components.size()) != n_modes) {
    throw std::invalid_argument("EncodingPlan: need exactly n_modes real message components");
  }
  std::vector<int> per_mode(n_modes, 0);
  for (const auto& c : components) {
    if (c.mode < 0 || c.mode >= n_modes - 1) {
      throw std::invalid_argument("EncodingPlan: only sender modes 0 .. n_modes-2 may encode");
    }
    ++per_mode[c.mode];
  }
  if (per_mode[0] != 2) throw std::invalid_argument("EncodingPlan: sender 1 must encode both quadratures");
  for (int m = 1; m < n_modes - 1; ++m) {
    if (per_mode[m] != 1) throw std::invalid_argument("EncodingPlan: each further sender encodes one quadrature");
  }
  if (components[0].quadrature == components[1].quadrature) {
    throw std::invalid_argument("EncodingPlan: sender 1 must use distinct quadratures");
  }
}

void LinearGaussianChannel::validate() const {
  const auto n_out = gain.rows();
  const auto n_in = gain.cols();
  if (noise_cov.rows() != n_out || noise_cov.cols() != n_out) {
    throw std::invalid_argument("LinearGaussianChannel: noise covariance does not match gain rows");
  }
  if (msg_cov.rows() != n_in || msg_cov.cols() != n_in) {
    throw std::invalid_argument("LinearGaussianChannel: message covariance does not match gain columns");
  }
  const double scale = std::max(1.0, noise_cov.cwiseAbs().maxCoeff());
  if ((noise_cov - noise_cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw std::invalid_argument("LinearGaussianChannel: noise covariance is not symmetric");
  }
  for (Eigen::Index i = 0; i < msg_cov.rows(); ++i) {
    if (msg_cov(i, i) < 0.0) throw std::invalid_argument("LinearGaussianChannel: negative message variance");
  }
}

double message_density(const EncodingPlan& plan, std::span<const double> alpha) {
  plan.validate();
  if (alpha.size() != plan.components.size()) {
    throw std::invalid_argument("message_density: alpha length must equal the number of components");
  }
  const double s2 = plan.sigma_msg * plan.sigma_msg;
  double q = 0.0;
  for (double a : alpha) q += a * a;
  const double n = static_cast<double>(alpha.size());
  return std::exp(-q / s2 - 0.5 * n * std::log(std::numbers::pi * s2));
}

GaussianState encode(const GaussianState& state, const EncodingPlan& plan, std::span<const double> alpha) {
  plan.validate();
  if (state.n_modes() != plan.n_modes) throw std::invalid_argument("encode: plan and state mode counts differ");
  if (alpha.size() != plan.components.size()) {
    throw std::invalid_argument("encode: alpha length must equal the number of components");
  }
  GaussianState out = state;
  for (std::size_t c = 0; c < alpha.size(); ++c) {
    const auto& comp = plan.components[c];
    const std::complex<double> amp =
        comp.quadrature == Quadrature::Position ? std::complex<double>(alpha[c], 0.0)
                                                : std::complex<double>(0.0, alpha[c]);
    out = displace(out, comp.mode, amp);
  }
  return out;
}

GaussianState decode_transform(const GaussianState& state, std::span<const double> taus) {
  if (static_cast<int>(taus.size()) != state.n_modes() - 1) {
    throw std::invalid_argument("decode_transform: expected n_modes - 1 transmissivities");
  }
  return apply_symplectic(state, preparation_chain(state.n_modes(), taus).inverse());
}

QuadratureSelection min_variance_selection(const GaussianState& state) {
  const auto fallback = alternating_pattern(state.n_modes());
  QuadratureSelection sel(state.n_modes());
  for (int m = 0; m < state.n_modes(); ++m) {
    const double vq = state.covariance()(2 * m, 2 * m);
    const double vp = state.covariance()(2 * m + 1, 2 * m + 1);
    if (std::abs(vq - vp) <= 1e-14 * std::max(vq, vp)) {
      sel[m] = fallback[m];
    } else {
      sel[m] = vq < vp ? Quadrature::Position : Quadrature::Momentum;
    }
  }
  return sel;
}

LinearGaussianChannel build_channel(const ResourceSpec& spec, const EncodingPlan& plan,
                                    const QuadratureSelection& selection) {
  spec.validate();
  plan.validate();
  if (plan.n_modes != spec.n_modes) throw std::invalid_argument("build_channel: plan and spec mode counts differ");

  const GaussianState resource = prepare_resource(spec);
  const int n_msg = static_cast<int>(plan.components.size());

  LinearGaussianChannel ch;
  ch.noise_cov = homodyne_moments(decode_transform(resource, spec.taus), selection).covariance;
  ch.gain.resize(static_cast<Eigen::Index>(selection.size()), n_msg);
  // The pipeline is affine in alpha with zero offset, so unit messages give
  // the Jacobian columns exactly.
  std::vector<double> unit(n_msg, 0.0);
  for (int c = 0; c < n_msg; ++c) {
    unit[c] = 1.0;
    const auto decoded = decode_transform(encode(resource, plan, unit), spec.taus);
    ch.gain.col(c) = homodyne_moments(decoded, selection).mean;
    unit[c] = 0.0;
  }
  ch.msg_cov = 0.5 * plan.sigma_msg * plan.sigma_msg * Matrix::Identity(n_msg, n_msg);
  ch.validate();
  return ch;
}

double mutual_information(const LinearGaussianChannel& channel) {
  channel.validate();
  const Matrix output_cov = channel.noise_cov + channel.gain * channel.msg_cov * channel.gain.transpose();
  const double v = 0.5 * (log_det_spd(output_cov, "mutual_information") -
                          log_det_spd(channel.noise_cov, "mutual_information"));
  return std::max(v, 0.0);
}

MonteCarloEstimate mutual_information_mc(const LinearGaussianChannel& channel, std::size_t n_samples,
                                         std::uint64_t seed) {
  channel.validate();
  if (n_samples < 2) throw std::invalid_argument("mutual_information_mc: need at least two samples");

  const Eigen::Index n_out = channel.gain.rows();
  const Eigen::Index n_in = channel.gain.cols();

  Eigen::LLT<Matrix> noise_llt(channel.noise_cov);
  if (noise_llt.info() != Eigen::Success) {
    throw std::domain_error("mutual_information_mc: noise covariance is not positive definite");
  }
  const Matrix output_cov = channel.noise_cov + channel.gain * channel.msg_cov * channel.gain.transpose();
  Eigen::LLT<Matrix> out_llt(output_cov);
  const Matrix noise_l = noise_llt.matrixL();
  const Matrix out_l = out_llt.matrixL();

  Eigen::SelfAdjointEigenSolver<Matrix> msg_eig(channel.msg_cov);
  const Matrix msg_root = msg_eig.eigenvectors() *
                          msg_eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  double log_det_ratio = 0.0;
  for (Eigen::Index i = 0; i < n_out; ++i) log_det_ratio += std::log(out_l(i, i)) - std::log(noise_l(i, i));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector u(n_in);
  Vector z(n_out);

  // Welford accumulation of ln p(beta|alpha) - ln p(beta).
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (Eigen::Index i = 0; i < n_in; ++i) u(i) = normal(rng);
    for (Eigen::Index i = 0; i < n_out; ++i) z(i) = normal(rng);
    const Vector alpha = msg_root * u;
    const Vector beta = channel.gain * alpha + noise_l * z;
    const Vector w = out_l.triangularView<Eigen::Lower>().solve(beta);
    const double sample = log_det_ratio - 0.5 * z.squaredNorm() + 0.5 * w.squaredNorm();
    const double delta = sample - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (sample - mean);
  }
  const double var = m2 / static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_samples))};
}

double photon_constraint(int n_modes, double r, double sigma_msg_sq) {
  if (n_modes < 2) throw std::invalid_argument("photon_constraint: n_modes must be >= 2");
  if (!(r >= 0.0) || !(sigma_msg_sq >= 0.0)) {
    throw std::invalid_argument("photon_constraint: r and sigma^2 must be >= 0");
  }
  const double sh = std::sinh(r);
  return (n_modes - 1) * sh * sh + 0.5 * n_modes * sigma_msg_sq;
}

OptimalParams optimal_params(int n_modes, double nbar) {
  if (n_modes < 2) throw std::invalid_argument("optimal_params: n_modes must be >= 2");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw std::invalid_argument("optimal_params: nbar must be >= 0");
  const double senders = n_modes - 1.0;
  OptimalParams p;
  p.squeezing = 0.5 * std::log1p(2.0 * nbar / senders);
  p.sigma_msg_sq = senders / n_modes * std::sinh(2.0 * p.squeezing);
  return p;
}

CapacityEvaluator::CapacityEvaluator(int n_modes, std::span<const double> taus) : n_modes_(n_modes) {
  check_taus(n_modes, taus, "CapacityEvaluator");
  // Same Jacobian build_channel() extracts by pushing unit messages through
  // encode/decode, read directly off the decoding matrix. The receiver
  // measures the squeezed quadrature of every decoded mode.
  const Matrix decode = preparation_chain(n_modes, taus).inverse().matrix();
  const auto plan = EncodingPlan::standard(n_modes, 1.0);
  const auto selection = alternating_pattern(n_modes);
  gain_.resize(n_modes, n_modes);
  for (int i = 0; i < n_modes; ++i) {
    const int row = 2 * i + (selection[i] == Quadrature::Momentum ? 1 : 0);
    for (int c = 0; c < n_modes; ++c) {
      const auto& comp = plan.components[c];
      const int col = 2 * comp.mode + (comp.quadrature == Quadrature::Momentum ? 1 : 0);
      gain_(i, c) = std::numbers::sqrt2 * decode(row, col);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gain_ * gain_.transpose(), Eigen::EigenvaluesOnly);
  gram_eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
}

LinearGaussianChannel CapacityEvaluator::channel_at(double nbar) const {
  const auto p = optimal_params(n_modes_, nbar);
  LinearGaussianChannel ch;
  ch.gain = gain_;
  // Decoding undoes the preparation chain exactly, so every measured
  // quadrature carries squeezed-vacuum noise.
  ch.noise_cov = 0.5 * std::exp(-2.0 * p.squeezing) * Matrix::Identity(n_modes_, n_modes_);
  ch.msg_cov = 0.5 * p.sigma_msg_sq * Matrix::Identity(n_modes_, n_modes_);
  return ch;
}

double CapacityEvaluator::capacity(double nbar) const {
  const auto p = optimal_params(n_modes_, nbar);
  const double k = std::exp(2.0 * p.squeezing) * p.sigma_msg_sq;
  double s = 0.0;
  for (Eigen::Index i = 0; i < gram_eigenvalues_.size(); ++i) s += std::log1p(k * gram_eigenvalues_(i));
  return 0.5 * s;
}

CapacityReport capacity(int n_modes, std::span<const double> taus, double nbar) {
  check_taus(n_modes, taus, "capacity");
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw std::invalid_argument("capacity: nbar must be >= 0");
  const CapacityEvaluator eval(n_modes, taus);
  const auto p = optimal_params(n_modes, nbar);
  CapacityReport rep;
  rep.n_modes = n_modes;
  rep.taus.assign(taus.begin(), taus.end());
  rep.nbar = nbar;
  rep.squeezing = p.squeezing;
  rep.sigma_msg_sq = p.sigma_msg_sq;
  rep.c_quantum = mutual_information(eval.channel_at(nbar));
  rep.c_classical = classical_capacity(n_modes - 1, nbar);
  rep.delta = rep.c_quantum - rep.c_classical;
  return rep;
}

}  // namespace cvdc
