#include "nlipair/phase_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nlipair {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double sqrt2 = 1.41421356237309504880;

// Band interval with enough context to evaluate the profile anywhere inside
// it (and at its edges, which the fill regions copy).
struct BandInterval {
  double lo, hi;
  BandKind kind;
  int channel;
  double center, a, sign;  // unused for the pump band
};

double band_value(const BandInterval& b, double f) {
  switch (b.kind) {
    case BandKind::pump:
      return pi / 2.0;
    case BandKind::signal:
      return b.sign * (-u_series(f - b.center, b.a)) + pi / 2.0;
    case BandKind::idler:
      return b.sign * (+u_series(f - b.center, b.a)) + pi / 2.0;
    default:
      throw std::logic_error("band_value on a fill tag");
  }
}

std::vector<BandInterval> collect_bands(const FrequencyAxis& axis, const PumpSpec& pump,
                                        const std::vector<ChannelSpec>& channels) {
  validate(pump);
  if (channels.empty())
    throw std::invalid_argument("phase profile needs at least one channel");

  std::vector<BandInterval> bands;
  const double pump_hw = 3.0 * pump.sigma_thz;
  bands.push_back({pump.center_thz - pump_hw, pump.center_thz + pump_hw,
                   BandKind::pump, -1, pump.center_thz, 0.0, 1.0});

  for (int k = 0; k < static_cast<int>(channels.size()); ++k) {
    const ChannelSpec& ch = channels[k];
    if (!(ch.a_signal_thz > 0.0) || !(ch.a_idler_thz > 0.0))
      throw std::invalid_argument("channel bandwidth parameter a must be positive");
    if (!(ch.band_half_width_thz > 0.0))
      throw std::invalid_argument("channel band half width must be positive");
    const double sum = ch.signal_center_thz + ch.idler_center_thz;
    if (std::abs(sum - 2.0 * pump.center_thz) > 1e-6)
      throw std::invalid_argument(
          "channel centers violate energy conservation: signal + idler = " +
          std::to_string(sum) + " THz, expected " + std::to_string(2.0 * pump.center_thz));
    const double s = ch.reversed ? -1.0 : 1.0;
    bands.push_back({ch.signal_center_thz - ch.band_half_width_thz,
                     ch.signal_center_thz + ch.band_half_width_thz, BandKind::signal, k,
                     ch.signal_center_thz, ch.a_signal_thz, s});
    bands.push_back({ch.idler_center_thz - ch.band_half_width_thz,
                     ch.idler_center_thz + ch.band_half_width_thz, BandKind::idler, k,
                     ch.idler_center_thz, ch.a_idler_thz, s});
  }

  for (const BandInterval& b : bands)
    if (b.lo < axis.front() || b.hi > axis.back())
      throw std::invalid_argument("band [" + std::to_string(b.lo) + ", " +
                                  std::to_string(b.hi) + "] THz extends outside the axis");

  std::sort(bands.begin(), bands.end(),
            [](const BandInterval& x, const BandInterval& y) { return x.lo < y.lo; });
  // Touching bands are fine (shared edges agree to a u-saturation residual);
  // the slack absorbs rounding when edges are computed as center +- width.
  for (std::size_t j = 1; j < bands.size(); ++j)
    if (bands[j].lo < bands[j - 1].hi - 1e-9)
      throw std::invalid_argument("bands overlap near " + std::to_string(bands[j].lo) +
                                  " THz");
  return bands;
}

}  // namespace

double u_series(double x, double a) {
  if (!(a > 0.0))
    throw std::invalid_argument("u_series needs a > 0, got " + std::to_string(a));
  const double t = x / a;
  const double t2 = t * t;
  // 9th-order odd series inside the arctangent; coefficients chosen so that
  // cos(u) matches exp(-x^2/a^2) through O(x^9).
  const double arg =
      t * (sqrt2 +
           t2 * (1.0 / sqrt2 +
                 t2 * (5.0 / (12.0 * sqrt2) +
                       t2 * (1.0 / (8.0 * sqrt2) + t2 * (79.0 / (2880.0 * sqrt2))))));
  return std::atan(arg);
}

PhaseProfile::PhaseProfile(FrequencyAxis axis, std::vector<double> phase_rad,
                           std::vector<BandTag> tags)
    : axis_(axis), phase_(std::move(phase_rad)), tags_(std::move(tags)) {
  if (static_cast<int>(phase_.size()) != axis_.size())
    throw std::invalid_argument("phase sample count does not match the axis");
  if (tags_.empty()) tags_.resize(phase_.size());
  if (tags_.size() != phase_.size())
    throw std::invalid_argument("band tag count does not match the axis");
}

double PhaseProfile::phase_at(double frequency_thz) const {
  if (!axis_.contains(frequency_thz))
    throw std::invalid_argument("phase evaluation at " + std::to_string(frequency_thz) +
                                " THz is outside the profile axis");
  if (axis_.size() == 1) return phase_[0];
  const double x = (frequency_thz - axis_.start()) / axis_.step();
  int j = static_cast<int>(std::floor(x));
  if (j < 0) j = 0;
  if (j >= axis_.size() - 1) j = axis_.size() - 2;
  const double t = x - j;
  return phase_[j] + t * (phase_[j + 1] - phase_[j]);
}

double default_band_half_width(const PumpSpec& pump,
                               const std::vector<ChannelSpec>& channels) {
  validate(pump);
  double hw = 3.0 * pump.sigma_thz;
  std::vector<double> centers;
  centers.reserve(channels.size());
  for (const ChannelSpec& ch : channels) centers.push_back(ch.signal_center_thz);
  std::sort(centers.begin(), centers.end());
  for (std::size_t j = 1; j < centers.size(); ++j)
    hw = std::min(hw, (centers[j] - centers[j - 1]) / 2.0);
  return hw;
}

PhaseProfile build_phase_profile(const FrequencyAxis& axis, const PumpSpec& pump,
                                 const std::vector<ChannelSpec>& channels) {
  const std::vector<BandInterval> bands = collect_bands(axis, pump, channels);

  std::vector<double> phase(axis.size());
  std::vector<BandTag> tags(axis.size());
  for (int i = 0; i < axis.size(); ++i) {
    const double f = axis[i];
    const BandInterval* in = nullptr;
    for (const BandInterval& b : bands)
      if (f >= b.lo && f <= b.hi) {
        in = &b;
        break;
      }
    if (in != nullptr) {
      phase[i] = band_value(*in, f);
      tags[i] = {in->kind, in->channel};
      continue;
    }
    // Gap sample: hold the value of the nearest signal/idler band edge. The
    // pump band never donates its edge, so gaps adjoining it step by pi/2.
    double best_d = std::numeric_limits<double>::infinity();
    double best_v = 0.0;
    for (const BandInterval& b : bands) {
      if (b.kind == BandKind::pump) continue;
      for (double edge : {b.lo, b.hi}) {
        const double d = std::abs(f - edge);
        if (d < best_d) {
          best_d = d;
          best_v = band_value(b, edge);
        }
      }
    }
    phase[i] = best_v;
    tags[i] = {BandKind::fill, -1};
  }
  return PhaseProfile(axis, std::move(phase), std::move(tags));
}

PhaseProfile dispersion_compensation(const PhaseProfile& profile, const MediumSpec& medium,
                                     const PumpSpec& pump) {
  validate(medium);
  validate(pump);
  std::vector<double> phase = profile.samples();
  const double pump_shift =
      medium.gamma_per_w_km / 1000.0 * pump.peak_power_w * medium.length_m;
  for (int i = 0; i < profile.size(); ++i) {
    phase[i] -= medium.length_m * dispersive_wavevector(profile.axis()[i], medium);
    if (profile.tag(i).kind == BandKind::pump) phase[i] += pump_shift;
  }
  return PhaseProfile(profile.axis(), std::move(phase), profile.tags());
}

double delta_phi(const PhaseProfile& profile, double omega_s_thz, double omega_i_thz) {
  return 2.0 * profile.phase_at((omega_s_thz + omega_i_thz) / 2.0) -
         profile.phase_at(omega_s_thz) - profile.phase_at(omega_i_thz);
}

}  // namespace nlipair
