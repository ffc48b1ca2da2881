#pragma once

#include <cstddef>

namespace nlipair {

// Internal unit conventions, used everywhere unless a name says otherwise:
//   frequency        THz (ordinary frequency, not angular)
//   wavelength       nm (vacuum)
//   fiber length     m
//   beta2/beta3/beta4 ps^2/km, ps^3/km, ps^4/km (defined w.r.t. angular frequency)
//   gamma            1/(W km)
//   wavevector       1/m
// Angular 2*pi factors appear only inside the dispersion evaluation.
inline constexpr double speed_of_light_nm_thz = 299792.458;
inline constexpr double two_pi = 6.283185307179586476925286766559;

double wavelength_to_frequency(double wavelength_nm);
double frequency_to_wavelength(double frequency_thz);

// Uniform frequency grid. sample(i) is always evaluated as start + i*step so
// repeated calls are bit-identical and there is no accumulated drift.
class FrequencyAxis {
 public:
  FrequencyAxis(double start_thz, double step_thz, int count);

  // Symmetric axis with an odd sample count; the middle sample reproduces
  // center_thz exactly (to the bit).
  static FrequencyAxis centered(double center_thz, double half_width_thz, int count);

  double operator[](int i) const { return start_ + i * step_; }
  double sample(int i) const { return start_ + i * step_; }
  int size() const { return count_; }
  double start() const { return start_; }
  double step() const { return step_; }
  double front() const { return start_; }
  double back() const { return start_ + (count_ - 1) * step_; }

  bool contains(double frequency_thz) const;
  int nearest_index(double frequency_thz) const;

 private:
  double start_;
  double step_;
  int count_;
};

struct PumpSpec {
  double center_thz = 0.0;       // omega_p0
  double sigma_thz = 0.0;        // Gaussian envelope parameter of F_SP
  double peak_power_w = 0.0;     // P_p, enters the 2*gamma*P_p phase-matching term
  double average_power_mw = 0.0; // metadata only
  double rep_rate_mhz = 0.0;     // metadata only
};

struct MediumSpec {
  double length_m = 0.0;
  double gamma_per_w_km = 0.0;
  double reference_thz = 0.0;    // Taylor expansion point of the propagation constant
  double beta2_ps2_km = 0.0;
  double beta3_ps3_km = 0.0;
  double beta4_ps4_km = 0.0;
};

void validate(const PumpSpec& pump);
void validate(const MediumSpec& medium);

// Dispersive part of the propagation constant in 1/m, Taylor form about the
// medium reference: (beta2/2) w^2 + (beta3/6) w^3 + (beta4/24) w^4 with
// w = 2*pi*(nu - reference) in rad/ps. This is the one place ordinary THz
// frequencies meet the angular-frequency beta coefficients.
double dispersive_wavevector(double frequency_thz, const MediumSpec& medium);

}  // namespace nlipair
