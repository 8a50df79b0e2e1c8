#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swapsim/angle.hpp"

namespace swapsim {

inline constexpr double kUnitNormTolerance = 1e-9;

/// A projective measurement direction on the Bloch sphere. Held unit-norm;
/// spherical and Cartesian forms are kept in sync on construction.
class MeasurementDirection {
 public:
  MeasurementDirection() = default;  // +z

  static MeasurementDirection from_spherical(double theta, double phi) {
    if (!(theta >= -kUnitNormTolerance && theta <= kPi + kUnitNormTolerance)) {
      throw std::domain_error("polar angle must lie in [0, pi]");
    }
    theta = std::clamp(theta, 0.0, kPi);
    phi = mod_two_pi(phi);
    MeasurementDirection d;
    d.theta_ = theta;
    d.phi_ = phi;
    d.x_ = std::sin(theta) * std::cos(phi);
    d.y_ = std::sin(theta) * std::sin(phi);
    d.z_ = std::cos(theta);
    d.renormalize();
    return d;
  }

  static MeasurementDirection from_cartesian(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (std::abs(norm - 1.0) > kUnitNormTolerance) {
      throw std::domain_error("direction must be a unit vector");
    }
    MeasurementDirection d;
    d.x_ = x / norm;
    d.y_ = y / norm;
    d.z_ = z / norm;
    d.theta_ = std::acos(std::clamp(d.z_, -1.0, 1.0));
    d.phi_ = mod_two_pi(std::atan2(d.y_, d.x_));
    return d;
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

  double dot(const MeasurementDirection& o) const {
    return x_ * o.x_ + y_ * o.y_ + z_ * o.z_;
  }

 private:
  void renormalize() {
    const double norm = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
    x_ /= norm;
    y_ /= norm;
    z_ /= norm;
  }

  double theta_ = 0.0;
  double phi_ = 0.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 1.0;
};

/// Correlation E(x, y) = -x.y of local projective measurements on a shared
/// singlet pair; the agreement probability is (1 - x.y) / 2.
inline double singlet_correlation(const MeasurementDirection& x,
                                  const MeasurementDirection& y) {
  const auto check = [](const MeasurementDirection& d) {
    const double n2 = d.x() * d.x() + d.y() * d.y() + d.z() * d.z();
    if (std::abs(n2 - 1.0) > 2.0 * kUnitNormTolerance) {
      throw std::domain_error("singlet_correlation requires unit vectors");
    }
  };
  check(x);
  check(y);
  return -x.dot(y);
}

/// Agreement probability for equatorial directions:
/// (1 - cos(phiA - phiB)) / 2 = sin((phiA - phiB)/2)^2.
inline double equatorial_agreement(Angle phi_alice, Angle phi_bob) {
  const double s = std::sin(0.5 * (phi_alice.radians() - phi_bob.radians()));
  return s * s;
}

}  // namespace swapsim
