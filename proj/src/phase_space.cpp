#include "cvdc/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cvdc {

namespace {

void check_mode(int n_modes, int mode, const char* what) {
  if (mode < 0 || mode >= n_modes) {
    std::ostringstream os;
    os << what << ": mode index " << mode << " out of range [0, " << n_modes << ")";
    throw std::out_of_range(os.str());
  }
}

void check_n_modes(int n_modes, const char* what) {
  if (n_modes < 1) {
    throw std::invalid_argument(std::string(what) + ": n_modes must be >= 1");
  }
}

}  // namespace

GaussianState::GaussianState(Vector displacement, Matrix covariance)
    : displacement_(std::move(displacement)), covariance_(std::move(covariance)) {
  const auto dim = displacement_.size();
  if (dim == 0 || dim % 2 != 0) {
    throw std::invalid_argument("GaussianState: displacement length must be a positive even number");
  }
  if (covariance_.rows() != dim || covariance_.cols() != dim) {
    throw std::invalid_argument("GaussianState: covariance must be 2N x 2N matching the displacement");
  }
  const double scale = std::max(1.0, covariance_.cwiseAbs().maxCoeff());
  if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw std::invalid_argument("GaussianState: covariance is not symmetric");
  }
}

SymplecticTransform::SymplecticTransform(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0 || matrix_.rows() % 2 != 0) {
    throw std::invalid_argument("SymplecticTransform: matrix must be square with even size");
  }
  const Matrix j = symplectic_form(n_modes());
  const double err = (matrix_ * j * matrix_.transpose() - j).cwiseAbs().maxCoeff();
  if (!(err <= kSymplecticTolerance)) {
    std::ostringstream os;
    os << "SymplecticTransform: |S J S^T - J| = " << err << " exceeds " << kSymplecticTolerance;
    throw std::invalid_argument(os.str());
  }
}

SymplecticTransform SymplecticTransform::identity(int n_modes) {
  check_n_modes(n_modes, "SymplecticTransform::identity");
  return SymplecticTransform(Matrix::Identity(2 * n_modes, 2 * n_modes), Unchecked{});
}

SymplecticTransform SymplecticTransform::inverse() const {
  const Matrix j = symplectic_form(n_modes());
  return SymplecticTransform(-j * matrix_.transpose() * j, Unchecked{});
}

SymplecticTransform operator*(const SymplecticTransform& a, const SymplecticTransform& b) {
  if (a.n_modes() != b.n_modes()) {
    throw std::invalid_argument("SymplecticTransform composition: mode count mismatch");
  }
  return SymplecticTransform(a.matrix_ * b.matrix_, SymplecticTransform::Unchecked{});
}

Matrix symplectic_form(int n_modes) {
  check_n_modes(n_modes, "symplectic_form");
  Matrix j = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    j(2 * k, 2 * k + 1) = 1.0;
    j(2 * k + 1, 2 * k) = -1.0;
  }
  return j;
}

GaussianState vacuum(int n_modes) {
  check_n_modes(n_modes, "vacuum");
  return GaussianState(Vector::Zero(2 * n_modes), 0.5 * Matrix::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState apply_symplectic(const GaussianState& state, const SymplecticTransform& transform) {
  if (state.n_modes() != transform.n_modes()) {
    throw std::invalid_argument("apply_symplectic: state and transform have different mode counts");
  }
  const Matrix& s = transform.matrix();
  Matrix cov = s * state.covariance() * s.transpose();
  // Re-symmetrize; the product is symmetric only up to rounding.
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianState(s * state.displacement(), std::move(cov));
}

SymplecticTransform single_mode_squeezer(int n_modes, int mode, double r, Quadrature squeezed) {
  check_n_modes(n_modes, "single_mode_squeezer");
  check_mode(n_modes, mode, "single_mode_squeezer");
  Matrix s = Matrix::Identity(2 * n_modes, 2 * n_modes);
  const double shrink = std::exp(-r);
  const double grow = std::exp(r);
  if (squeezed == Quadrature::Position) {
    s(2 * mode, 2 * mode) = shrink;
    s(2 * mode + 1, 2 * mode + 1) = grow;
  } else {
    s(2 * mode, 2 * mode) = grow;
    s(2 * mode + 1, 2 * mode + 1) = shrink;
  }
  return SymplecticTransform(std::move(s));
}

SymplecticTransform beam_splitter(int n_modes, int mode_i, int mode_j, double tau) {
  check_n_modes(n_modes, "beam_splitter");
  check_mode(n_modes, mode_i, "beam_splitter");
  check_mode(n_modes, mode_j, "beam_splitter");
  if (mode_i == mode_j) {
    throw std::invalid_argument("beam_splitter: modes must differ");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("beam_splitter: transmissivity must lie in [0, 1]");
  }
  const double t = std::sqrt(tau);
  const double rf = std::sqrt(1.0 - tau);
  Matrix s = Matrix::Identity(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < 2; ++k) {
    const int a = 2 * mode_i + k;
    const int b = 2 * mode_j + k;
    s(a, a) = t;
    s(a, b) = rf;
    s(b, a) = rf;
    s(b, b) = -t;
  }
  return SymplecticTransform(std::move(s));
}

GaussianState displace(const GaussianState& state, int mode, std::complex<double> alpha) {
  check_mode(state.n_modes(), mode, "displace");
  Vector d = state.displacement();
  d(2 * mode) += std::numbers::sqrt2 * alpha.real();
  d(2 * mode + 1) += std::numbers::sqrt2 * alpha.imag();
  return GaussianState(std::move(d), state.covariance());
}

GaussianState marginal(const GaussianState& state, std::span<const int> kept_modes) {
  if (kept_modes.empty()) {
    throw std::invalid_argument("marginal: kept mode set is empty");
  }
  std::vector<int> modes(kept_modes.begin(), kept_modes.end());
  std::sort(modes.begin(), modes.end());
  if (std::adjacent_find(modes.begin(), modes.end()) != modes.end()) {
    throw std::invalid_argument("marginal: duplicate mode index");
  }
  for (int m : modes) check_mode(state.n_modes(), m, "marginal");

  const auto k = static_cast<Eigen::Index>(modes.size());
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * modes.size());
  for (int m : modes) {
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }
  Vector d(2 * k);
  Matrix cov(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < 2 * k; ++a) {
    d(a) = state.displacement()(idx[a]);
    for (Eigen::Index b = 0; b < 2 * k; ++b) cov(a, b) = state.covariance()(idx[a], idx[b]);
  }
  return GaussianState(std::move(d), std::move(cov));
}

HomodyneMoments homodyne_moments(const GaussianState& state, const QuadratureSelection& selection) {
  const int n = state.n_modes();
  if (static_cast<int>(selection.size()) != n) {
    throw std::invalid_argument("homodyne_moments: selection must contain one quadrature per mode");
  }
  std::vector<Eigen::Index> idx(n);
  for (int m = 0; m < n; ++m) idx[m] = 2 * m + (selection[m] == Quadrature::Momentum ? 1 : 0);

  HomodyneMoments out{Vector(n), Matrix(n, n)};
  for (int a = 0; a < n; ++a) {
    out.mean(a) = state.displacement()(idx[a]);
    for (int b = 0; b < n; ++b) out.covariance(a, b) = state.covariance()(idx[a], idx[b]);
  }
  return out;
}

double wigner(const GaussianState& state, const Vector& point) {
  const auto dim = state.displacement().size();
  if (point.size() != dim) {
    throw std::invalid_argument("wigner: point has wrong dimension");
  }
  Eigen::LLT<Matrix> llt(state.covariance());
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("wigner: covariance is singular or not positive definite");
  }
  const Matrix& l = llt.matrixL();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) log_det += 2.0 * std::log(l(i, i));
  if (!std::isfinite(log_det) || log_det < std::log(std::numeric_limits<double>::min())) {
    throw std::domain_error("wigner: covariance is singular");
  }
  const Vector diff = point - state.displacement();
  const Vector y = llt.matrixL().solve(diff);
  const double n = static_cast<double>(state.n_modes());
  return std::exp(-0.5 * y.squaredNorm() - n * std::log(2.0 * std::numbers::pi) - 0.5 * log_det);
}

Vector symplectic_eigenvalues(const Matrix& covariance) {
  const auto dim = covariance.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw std::domain_error("symplectic_eigenvalues: covariance is not positive definite");
  }
  // K = sigma^{1/2} J sigma^{1/2} is antisymmetric with eigenvalues +-i nu_k,
  // so K^T K has eigenvalues nu_k^2, each twice.
  const Matrix root = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
                      eig.eigenvectors().transpose();
  const Matrix k = root * symplectic_form(static_cast<int>(dim / 2)) * root;
  Eigen::SelfAdjointEigenSolver<Matrix> sq(k.transpose() * k, Eigen::EigenvaluesOnly);
  const Vector nu2 = sq.eigenvalues();
  Vector nu(dim / 2);
  for (Eigen::Index i = 0; i < dim / 2; ++i) {
    nu(i) = std::sqrt(std::max(0.0, 0.5 * (nu2(2 * i) + nu2(2 * i + 1))));
  }
  return nu;
}

PhysicalityReport is_physical(const GaussianState& state) {
  PhysicalityReport report;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(state.covariance(), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    report.physical = false;
    report.min_symplectic_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    report.diagnostic = "covariance is not positive definite";
    return report;
  }
  const Vector nu = symplectic_eigenvalues(state.covariance());
  report.min_symplectic_eigenvalue = nu.minCoeff();
  report.physical = report.min_symplectic_eigenvalue >= 0.5 - kPhysicalityTolerance;
  std::ostringstream os;
  os.precision(15);
  os << "min symplectic eigenvalue " << report.min_symplectic_eigenvalue
     << (report.physical ? " >= " : " < ") << "1/2";
  report.diagnostic = os.str();
  return report;
}

}  // namespace cvdc
