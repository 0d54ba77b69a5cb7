#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace tpi {

/// Speed of light in vacuum, m/s (exact).
inline constexpr double speed_of_light = 299'792'458.0;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Far-field acceptance thresholds. Both comparisons are inclusive.
struct FarFieldThresholds {
  /// Minimum of |r - R_n| / d over emitters n.
  double min_distance_ratio = 100.0;
  /// Minimum d / lambda.
  double min_separation_ratio = 10.0;
};

/// Two independent two-level emitters with a shared transition frequency.
///
/// Decay constants are amplitude decay rates: an excited population falls as
/// exp(-2 gamma t).
class EmitterPair {
 public:
  EmitterPair(Vec3 position_a, Vec3 position_b, double wavelength, double gamma_a, double gamma_b,
              FarFieldThresholds thresholds = {});

  /// Emitters at (-d/2, 0, 0) and (+d/2, 0, 0), origin at their midpoint.
  static EmitterPair on_x_axis(double separation, double wavelength, double gamma_a, double gamma_b,
                               FarFieldThresholds thresholds = {});

  const Vec3& position_a() const { return position_a_; }
  const Vec3& position_b() const { return position_b_; }
  double separation() const { return separation_; }
  double wavelength() const { return wavelength_; }
  double wavenumber() const { return 2.0 * std::numbers::pi / wavelength_; }
  double omega() const { return speed_of_light * wavenumber(); }
  double gamma_a() const { return gamma_a_; }
  double gamma_b() const { return gamma_b_; }
  bool equal_decay() const { return gamma_a_ == gamma_b_; }
  const FarFieldThresholds& thresholds() const { return thresholds_; }

  /// Unit vector from emitter A to emitter B.
  Vec3 axis() const;

 private:
  Vec3 position_a_;
  Vec3 position_b_;
  double separation_;
  double wavelength_;
  double gamma_a_;
  double gamma_b_;
  FarFieldThresholds thresholds_;
};

/// A far-field detector with its derived phase and propagation delay.
struct DetectorSetting {
  Vec3 position;
  Vec3 unit_direction;
  /// Angle between the detector direction and the emitters' bisector plane.
  double angle_xi = 0.0;
  double phase_phi = 0.0;
  double transit_time = 0.0;
};

/// Builds a detector, enforcing the far-field condition.
DetectorSetting make_detector(const EmitterPair& pair, const Vec3& position);

/// Detector at `distance` from the origin in the x-y plane, at angle `xi`
/// from the bisector plane.
DetectorSetting make_detector_at(const EmitterPair& pair, double distance, double xi);

/// Angle xi of a direction relative to the bisector plane of the pair.
double angle_from_bisector(const EmitterPair& pair, const Vec3& detector_position);

/// phi = d k sin(xi). Throws ConfigError if the detector is not in the far field.
double optical_phase(const EmitterPair& pair, const Vec3& detector_position);

/// The same phase from the plane-wave exponents, k (r_hat . R_B - r_hat . R_A).
/// No far-field validation.
double optical_phase_from_exponents(const EmitterPair& pair, const Vec3& detector_position);

/// |r| / c. Throws DomainError for a zero-length position.
double transit_time(const Vec3& detector_position);

struct FarFieldEntry {
  double ratio = 0.0;  ///< min_n |r - R_n| / d
  bool pass = false;
};

struct FarFieldReport {
  double separation_ratio = 0.0;  ///< d / lambda
  bool separation_pass = false;
  std::vector<FarFieldEntry> detectors;

  bool all_pass() const;
};

FarFieldReport far_field_check(const EmitterPair& pair, std::span<const Vec3> detector_positions);

}  // namespace tpi
