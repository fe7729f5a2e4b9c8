#include "spinbath/quantum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spinbath {

namespace {

const Eigen::Matrix2cd kSigmaX = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
const Eigen::Matrix2cd kSigmaY =
    (Eigen::Matrix2cd() << 0, std::complex<double>(0, -1),
     std::complex<double>(0, 1), 0).finished();
const Eigen::Matrix2cd kSigmaZ = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();

// Eigenvalues of a 2x2 Hermitian matrix, closed form.
std::pair<double, double> hermitian_eigenvalues(const Eigen::Matrix2cd& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
  return {mean - r, mean + r};
}

}  // namespace

Rotation::Rotation(const Eigen::Vector3d& axis, double angle_rad)
    : axis(axis), angle_rad(angle_rad) {
  if (!std::isfinite(angle_rad) || !axis.allFinite()) {
    throw InputError("rotation axis/angle must be finite");
  }
  if (std::abs(axis.norm() - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "rotation axis must be unit norm, got |n| = " << axis.norm();
    throw InputError(os.str());
  }
}

Rotation Rotation::about_x(double angle_rad) {
  return Rotation(Eigen::Vector3d::UnitX(), angle_rad);
}
Rotation Rotation::about_y(double angle_rad) {
  return Rotation(Eigen::Vector3d::UnitY(), angle_rad);
}
Rotation Rotation::about_z(double angle_rad) {
  return Rotation(Eigen::Vector3d::UnitZ(), angle_rad);
}

Eigen::Matrix2cd Rotation::unitary() const {
  const Eigen::Matrix2cd n_dot_sigma =
      axis.x() * kSigmaX + axis.y() * kSigmaY + axis.z() * kSigmaZ;
  const double half = 0.5 * angle_rad;
  return std::cos(half) * Eigen::Matrix2cd::Identity() -
         std::complex<double>(0, 1) * std::sin(half) * n_dot_sigma;
}

DensityMatrix DensityMatrix::from_matrix(const Eigen::Matrix2cd& m,
                                         double psd_tol) {
  if (!m.allFinite()) throw InvalidStateError("density matrix has non-finite entries");
  if (std::abs(m(0, 1) - std::conj(m(1, 0))) > kHermitianTol ||
      std::abs(m(0, 0).imag()) > kHermitianTol ||
      std::abs(m(1, 1).imag()) > kHermitianTol) {
    throw InvalidStateError("density matrix is not Hermitian within 1e-12");
  }
  const double tr = m(0, 0).real() + m(1, 1).real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " differs from 1 beyond 1e-12";
    throw InvalidStateError(os.str());
  }
  Eigen::Matrix2cd h = 0.5 * (m + m.adjoint());
  const auto [lo, hi] = hermitian_eigenvalues(h);
  if (lo < -psd_tol || hi > 1.0 + psd_tol) {
    std::ostringstream os;
    os << "density matrix eigenvalues [" << lo << ", " << hi
       << "] violate positivity beyond tolerance " << psd_tol;
    throw InvalidStateError(os.str());
  }
  if (lo < 0.0) {
    // Negativity within tolerance: project onto the PSD cone and renormalise.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
    ev /= ev.sum();
    h = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  }
  return DensityMatrix(h);
}

DensityMatrix DensityMatrix::ground() {
  return DensityMatrix((Eigen::Matrix2cd() << 1, 0, 0, 0).finished());
}

DensityMatrix DensityMatrix::excited() {
  return DensityMatrix((Eigen::Matrix2cd() << 0, 0, 0, 1).finished());
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(0.5 * Eigen::Matrix2cd::Identity());
}

DensityMatrix density_from_bloch(const BlochVector& v) {
  const double n2 = v.x * v.x + v.y * v.y + v.z * v.z;
  if (!std::isfinite(n2) || n2 > 1.0 + kBlochNormTol) {
    std::ostringstream os;
    os << "Bloch vector norm " << std::sqrt(n2) << " exceeds 1";
    throw InvalidStateError(os.str());
  }
  Eigen::Matrix2cd m;
  m << 0.5 * (1.0 + v.z), 0.5 * std::complex<double>(v.x, -v.y),
      0.5 * std::complex<double>(v.x, v.y), 0.5 * (1.0 - v.z);
  // Norm within tolerance but above 1 would give a tiny negative eigenvalue.
  return DensityMatrix::from_matrix(m, kBlochNormTol);
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
  const Eigen::Matrix2cd& m = rho.matrix();
  return BlochVector{2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(),
                     m(0, 0).real() - m(1, 1).real()};
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const Eigen::Matrix2cd d = rho1.matrix() - rho2.matrix();
  const auto [lo, hi] = hermitian_eigenvalues(d);
  return 0.5 * (std::abs(lo) + std::abs(hi));
}

DensityMatrix apply_rotation(const DensityMatrix& rho, const Rotation& r) {
  const Eigen::Matrix2cd u = r.unitary();
  return DensityMatrix::from_matrix(u * rho.matrix() * u.adjoint());
}

double population_p0(const DensityMatrix& rho) {
  return rho.matrix()(0, 0).real();
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

}  // namespace spinbath
