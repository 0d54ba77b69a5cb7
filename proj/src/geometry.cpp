#include "tpi/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "tpi/errors.hpp"

namespace tpi {

namespace {

Vec3 normalized(const Vec3& v) { return (1.0 / v.norm()) * v; }

double distance_ratio(const EmitterPair& pair, const Vec3& r) {
  const double nearest = std::min((r - pair.position_a()).norm(), (r - pair.position_b()).norm());
  return nearest / pair.separation();
}

}  // namespace

EmitterPair::EmitterPair(Vec3 position_a, Vec3 position_b, double wavelength, double gamma_a,
                         double gamma_b, FarFieldThresholds thresholds)
    : position_a_(position_a),
      position_b_(position_b),
      separation_((position_b - position_a).norm()),
      wavelength_(wavelength),
      gamma_a_(gamma_a),
      gamma_b_(gamma_b),
      thresholds_(thresholds) {
  if (!(wavelength_ > 0.0) || !std::isfinite(wavelength_)) {
    throw ConfigError("geometry.wavelength", "wavelength must be positive and finite");
  }
  if (!(gamma_a_ > 0.0) || !std::isfinite(gamma_a_)) {
    throw ConfigError("geometry.gamma_a", "gamma_a must be positive and finite");
  }
  if (!(gamma_b_ > 0.0) || !std::isfinite(gamma_b_)) {
    throw ConfigError("geometry.gamma_b", "gamma_b must be positive and finite");
  }
  if (!(separation_ > 0.0)) {
    throw ConfigError("geometry.separation", "emitters must be at distinct positions");
  }
  const double ratio = separation_ / wavelength_;
  if (ratio < thresholds_.min_separation_ratio) {
    std::ostringstream msg;
    msg << "far-field ratio d/lambda = " << ratio << " is below the required "
        << thresholds_.min_separation_ratio;
    throw ConfigError("geometry.separation", msg.str());
  }
}

EmitterPair EmitterPair::on_x_axis(double separation, double wavelength, double gamma_a,
                                   double gamma_b, FarFieldThresholds thresholds) {
  return EmitterPair({-0.5 * separation, 0.0, 0.0}, {0.5 * separation, 0.0, 0.0}, wavelength,
                     gamma_a, gamma_b, thresholds);
}

Vec3 EmitterPair::axis() const { return (1.0 / separation_) * (position_b_ - position_a_); }

double angle_from_bisector(const EmitterPair& pair, const Vec3& detector_position) {
  const double norm = detector_position.norm();
  if (!(norm > 0.0)) {
    throw DomainError("detector position must be non-zero");
  }
  const double s = std::clamp(detector_position.dot(pair.axis()) / norm, -1.0, 1.0);
  return std::asin(s);
}

double optical_phase(const EmitterPair& pair, const Vec3& detector_position) {
  const double ratio = distance_ratio(pair, detector_position);
  if (ratio < pair.thresholds().min_distance_ratio) {
    std::ostringstream msg;
    msg << "far-field ratio min|r - R|/d = " << ratio << " is below the required "
        << pair.thresholds().min_distance_ratio;
    throw ConfigError("geometry.detectors", msg.str());
  }
  const double xi = angle_from_bisector(pair, detector_position);
  return pair.separation() * pair.wavenumber() * std::sin(xi);
}

double optical_phase_from_exponents(const EmitterPair& pair, const Vec3& detector_position) {
  const Vec3 r_hat = normalized(detector_position);
  return pair.wavenumber() * (r_hat.dot(pair.position_b()) - r_hat.dot(pair.position_a()));
}

double transit_time(const Vec3& detector_position) {
  const double norm = detector_position.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("transit time needs a non-zero, finite detector distance");
  }
  return norm / speed_of_light;
}

DetectorSetting make_detector(const EmitterPair& pair, const Vec3& position) {
  DetectorSetting d;
  d.position = position;
  d.transit_time = transit_time(position);
  d.unit_direction = normalized(position);
  d.angle_xi = angle_from_bisector(pair, position);
  d.phase_phi = optical_phase(pair, position);
  return d;
}

DetectorSetting make_detector_at(const EmitterPair& pair, double distance, double xi) {
  if (!(distance > 0.0)) {
    throw DomainError("detector distance must be positive");
  }
  const Vec3 u = pair.axis();
  // In-plane direction orthogonal to the emitter axis, y when the axis is x.
  Vec3 w = Vec3{0.0, 1.0, 0.0} - u.y * u;
  if (w.norm() < 1e-9) {
    w = Vec3{0.0, 0.0, 1.0} - u.z * u;
  }
  w = normalized(w);
  const Vec3 direction = std::sin(xi) * u + std::cos(xi) * w;
  return make_detector(pair, distance * direction);
}

bool FarFieldReport::all_pass() const {
  return separation_pass &&
         std::all_of(detectors.begin(), detectors.end(), [](const auto& e) { return e.pass; });
}

FarFieldReport far_field_check(const EmitterPair& pair, std::span<const Vec3> detector_positions) {
  FarFieldReport report;
  report.separation_ratio = pair.separation() / pair.wavelength();
  report.separation_pass = report.separation_ratio >= pair.thresholds().min_separation_ratio;
  for (const auto& r : detector_positions) {
    const double ratio = distance_ratio(pair, r);
    report.detectors.push_back({ratio, ratio >= pair.thresholds().min_distance_ratio});
  }
  return report;
}

}  // namespace tpi
