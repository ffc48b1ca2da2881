#pragma once

#include <cstdint>
#include <vector>

#include "nlipair/units.hpp"

namespace nlipair {

// Odd 9th-order arctan series whose cosine tracks a Gaussian of width a:
// cos(u(x,a)) ~ exp(-x^2/a^2), exact to ~5e-4 for |x| <= a. u is odd in x and
// saturates at +-pi/2, which is what lets a band of finite width carry it.
double u_series(double x, double a);

// One signal/idler band pair writing the +-u(.,a) + pi/2 ramps. The reversed
// flag flips the sign of u in both bands; alternate islands of a multi-channel
// design use it so adjacent band edges meet without a jump.
struct ChannelSpec {
  double signal_center_thz = 0.0;
  double idler_center_thz = 0.0;
  double a_signal_thz = 0.0;
  double a_idler_thz = 0.0;
  double band_half_width_thz = 0.0;
  bool reversed = false;
};

enum class BandKind : std::uint8_t { fill, pump, signal, idler };

struct BandTag {
  BandKind kind = BandKind::fill;
  int channel = -1;  // index into the channel list for signal/idler, else -1
};

// Sampled spectral phase. Between samples the profile is evaluated by linear
// interpolation; evaluation outside the axis is an error.
class PhaseProfile {
 public:
  PhaseProfile(FrequencyAxis axis, std::vector<double> phase_rad,
               std::vector<BandTag> tags);

  const FrequencyAxis& axis() const { return axis_; }
  int size() const { return axis_.size(); }
  double operator[](int i) const { return phase_[i]; }
  const std::vector<double>& samples() const { return phase_; }
  const BandTag& tag(int i) const { return tags_[i]; }
  const std::vector<BandTag>& tags() const { return tags_; }

  double phase_at(double frequency_thz) const;

  std::vector<double>& mutable_samples() { return phase_; }

 private:
  FrequencyAxis axis_;
  std::vector<double> phase_;
  std::vector<BandTag> tags_;
};

// Half width min(3*sigma_p, half the smallest gap to a neighbouring island),
// the widest band that saturates u while keeping islands disjoint.
double default_band_half_width(const PumpSpec& pump,
                               const std::vector<ChannelSpec>& channels);

// Piecewise profile: pi/2 across the pump band (half width 3*sigma_p),
// -+u ramps across the channel bands, and every remaining sample holds the
// value of the nearest signal/idler band edge so gaps stay flat.
PhaseProfile build_phase_profile(const FrequencyAxis& axis, const PumpSpec& pump,
                                 const std::vector<ChannelSpec>& channels);

// Adds -L*k_disp(omega) to every sample, cancelling the dispersive part of
// Delta_k*L + Delta_phi; the remaining constant -2*gamma*P_p*L is absorbed by
// raising the pump band by +gamma*P_p*L (a pump-band offset of c enters
// Delta_phi as +2c). Without a pump band the constant has nowhere to go and is
// left in place.
PhaseProfile dispersion_compensation(const PhaseProfile& profile,
                                     const MediumSpec& medium, const PumpSpec& pump);

// Delta_phi = 2*phi((ws+wi)/2) - phi(ws) - phi(wi). Invariant under the gauge
// phi -> phi + alpha + beta*omega.
double delta_phi(const PhaseProfile& profile, double omega_s_thz, double omega_i_thz);

}  // namespace nlipair
