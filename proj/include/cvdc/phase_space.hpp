#pragma once

// Gaussian phase-space algebra.
//
// Conventions: hbar = 1, vacuum quadrature variance 1/2, quadratures ordered
// (q1, p1, q2, p2, ..., qN, pN). Modes are indexed from zero.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace cvdc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Quadrature { Position, Momentum };

/// One quadrature choice per mode.
using QuadratureSelection = std::vector<Quadrature>;

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kSymplecticTolerance = 1e-10;
inline constexpr double kPhysicalityTolerance = 1e-10;

/// First and second moments of an N-mode Gaussian state.
///
/// The constructor enforces shape consistency and symmetry of the covariance.
/// It does not enforce the uncertainty principle so that unphysical inputs
/// can still be inspected with is_physical().
class GaussianState {
 public:
  GaussianState(Vector displacement, Matrix covariance);

  int n_modes() const { return static_cast<int>(displacement_.size() / 2); }
  const Vector& displacement() const { return displacement_; }
  const Matrix& covariance() const { return covariance_; }

 private:
  Vector displacement_;
  Matrix covariance_;
};

/// A 2N x 2N real matrix S with S J S^T = J.
class SymplecticTransform {
 public:
  /// Throws std::invalid_argument if the matrix is not square, has odd size,
  /// or violates S J S^T = J by more than kSymplecticTolerance entrywise.
  explicit SymplecticTransform(Matrix matrix);

  static SymplecticTransform identity(int n_modes);

  int n_modes() const { return static_cast<int>(matrix_.rows() / 2); }
  const Matrix& matrix() const { return matrix_; }

  /// Exact symplectic inverse, -J S^T J.
  SymplecticTransform inverse() const;

  /// Composition: (a * b) applies b first, then a.
  friend SymplecticTransform operator*(const SymplecticTransform& a, const SymplecticTransform& b);

 private:
  struct Unchecked {};
  SymplecticTransform(Matrix matrix, Unchecked) : matrix_(std::move(matrix)) {}

  Matrix matrix_;
};

Matrix symplectic_form(int n_modes);

GaussianState vacuum(int n_modes);

/// d -> S d, sigma -> S sigma S^T.
GaussianState apply_symplectic(const GaussianState& state, const SymplecticTransform& transform);

/// Squeezes `squeezed` on one mode: its variance scales by e^{-2r}, the
/// conjugate quadrature's by e^{+2r}. Negative r squeezes the conjugate.
SymplecticTransform single_mode_squeezer(int n_modes, int mode, double r, Quadrature squeezed);

/// Two-mode beam splitter with transmissivity tau acting identically on the
/// q and p blocks of modes i and j:
///
///   [ sqrt(tau)     sqrt(1-tau) ]
///   [ sqrt(1-tau)  -sqrt(tau)   ]
///
/// The matrix is its own inverse. This phase convention is the one under which
/// the alternately squeezed preparation chain reproduces the reference
/// three-mode covariance and the decoded displacement pattern exactly.
SymplecticTransform beam_splitter(int n_modes, int mode_i, int mode_j, double tau);

/// Displacement operator D(alpha) on one mode: q += sqrt(2) Re(alpha),
/// p += sqrt(2) Im(alpha). The covariance is unchanged.
GaussianState displace(const GaussianState& state, int mode, std::complex<double> alpha);

/// Reduced state on `kept_modes` (sorted, duplicates rejected).
GaussianState marginal(const GaussianState& state, std::span<const int> kept_modes);

struct HomodyneMoments {
  Vector mean;
  Matrix covariance;
};

/// Gaussian distribution of the outcomes when every mode is measured in the
/// selected quadrature.
HomodyneMoments homodyne_moments(const GaussianState& state, const QuadratureSelection& selection);

/// Normalized Wigner function
///   exp(-1/2 (x-d)^T sigma^{-1} (x-d)) / ((2 pi)^N sqrt(det sigma)).
/// Throws std::domain_error for a singular covariance.
double wigner(const GaussianState& state, const Vector& point);

/// Symplectic eigenvalues in ascending order. Requires a positive definite
/// covariance (throws std::domain_error otherwise).
Vector symplectic_eigenvalues(const Matrix& covariance);

struct PhysicalityReport {
  bool physical = false;
  double min_symplectic_eigenvalue = 0.0;
  std::string diagnostic;

  explicit operator bool() const { return physical; }
};

PhysicalityReport is_physical(const GaussianState& state);

}  // namespace cvdc
