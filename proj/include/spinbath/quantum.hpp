#pragma once

#include <Eigen/Dense>
#include <complex>

#include "spinbath/errors.hpp"

namespace spinbath {

// Exact two-level state algebra. Conventions used throughout:
//   - rotation R_n(theta) = exp(-i theta (n.sigma)/2), right-handed on the
//     Bloch sphere;
//   - |0> is the north pole (z = +1), P0 = rho_00;
//   - global phases are irrelevant, all comparisons happen at the
//     density-matrix level.

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-12;
// Ensemble averages may pick up slightly larger eigenvalue noise; anything
// below -1e-9 is an error, not something to repair.
inline constexpr double kEnsemblePsdTol = 1e-9;
inline constexpr double kBlochNormTol = 1e-9;

struct BlochVector {
  double x = 0, y = 0, z = 0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// Rotation by `angle_rad` about the unit axis `axis`.
struct Rotation {
  Eigen::Vector3d axis;
  double angle_rad;

  Rotation(const Eigen::Vector3d& axis, double angle_rad);

  static Rotation about_x(double angle_rad);
  static Rotation about_y(double angle_rad);
  static Rotation about_z(double angle_rad);

  // exp(-i angle (axis.sigma)/2)
  Eigen::Matrix2cd unitary() const;
};

// 2x2 Hermitian, unit-trace, positive-semidefinite matrix.
class DensityMatrix {
 public:
  // Validates Hermiticity and trace at 1e-12. Eigenvalues below -psd_tol
  // raise InvalidStateError; negativity within tolerance is clipped.
  static DensityMatrix from_matrix(const Eigen::Matrix2cd& m,
                                   double psd_tol = kPsdTol);

  static DensityMatrix ground();           // |0><0|
  static DensityMatrix excited();          // |1><1|
  static DensityMatrix maximally_mixed();  // I/2

  const Eigen::Matrix2cd& matrix() const { return m_; }

 private:
  explicit DensityMatrix(const Eigen::Matrix2cd& m) : m_(m) {}
  Eigen::Matrix2cd m_;
};

// rho = (I + x sx + y sy + z sz)/2. Norm > 1 + 1e-9 is an invalid state.
DensityMatrix density_from_bloch(const BlochVector& v);

// Exact inverse of density_from_bloch.
BlochVector bloch_from_density(const DensityMatrix& rho);

// Half the trace norm of rho1 - rho2; for qubits this is half the Euclidean
// distance between the Bloch vectors. Always in [0, 1].
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

// rho -> U rho U^dagger.
DensityMatrix apply_rotation(const DensityMatrix& rho, const Rotation& r);

// P0 = tr(|0><0| rho) = rho_00.
double population_p0(const DensityMatrix& rho);

// tr(rho^2); 1 for pure states, 1/2 for the maximally mixed state.
double purity(const DensityMatrix& rho);

}  // namespace spinbath
