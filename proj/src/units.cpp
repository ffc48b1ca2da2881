#include "nlipair/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlipair {

double wavelength_to_frequency(double wavelength_nm) {
  if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm))
    throw std::invalid_argument("wavelength must be finite and positive, got " +
                                std::to_string(wavelength_nm));
  return speed_of_light_nm_thz / wavelength_nm;
}

double frequency_to_wavelength(double frequency_thz) {
  if (!(frequency_thz > 0.0) || !std::isfinite(frequency_thz))
    throw std::invalid_argument("frequency must be finite and positive, got " +
                                std::to_string(frequency_thz));
  return speed_of_light_nm_thz / frequency_thz;
}

FrequencyAxis::FrequencyAxis(double start_thz, double step_thz, int count)
    : start_(start_thz), step_(step_thz), count_(count) {
  if (count <= 0) throw std::invalid_argument("axis count must be positive");
  if (!std::isfinite(start_thz) || !std::isfinite(step_thz))
    throw std::invalid_argument("axis start/step must be finite");
  if (count > 1 && step_thz == 0.0)
    throw std::invalid_argument("axis step must be nonzero for count > 1");
}

FrequencyAxis FrequencyAxis::centered(double center_thz, double half_width_thz, int count) {
  if (count < 3 || count % 2 == 0)
    throw std::invalid_argument("centered axis needs an odd count >= 3, got " +
                                std::to_string(count));
  if (!(half_width_thz > 0.0))
    throw std::invalid_argument("centered axis needs a positive half width");
  const int mid = (count - 1) / 2;
  const double step = half_width_thz / mid;
  double start = center_thz - half_width_thz;
  // One rounding nudge is normally enough to make the middle sample land on
  // center_thz exactly under start + i*step evaluation.
  for (int pass = 0; pass < 4 && start + mid * step != center_thz; ++pass)
    start += center_thz - (start + mid * step);
  if (start + mid * step != center_thz)
    throw std::invalid_argument("centered axis could not reproduce its center exactly");
  return FrequencyAxis(start, step, count);
}

bool FrequencyAxis::contains(double frequency_thz) const {
  const double lo = step_ >= 0.0 ? front() : back();
  const double hi = step_ >= 0.0 ? back() : front();
  return frequency_thz >= lo && frequency_thz <= hi;
}

int FrequencyAxis::nearest_index(double frequency_thz) const {
  if (count_ == 1) return 0;
  const double x = (frequency_thz - start_) / step_;
  int i = static_cast<int>(std::lround(x));
  if (i < 0) i = 0;
  if (i >= count_) i = count_ - 1;
  return i;
}

void validate(const PumpSpec& pump) {
  if (!(pump.center_thz > 0.0)) throw std::invalid_argument("pump center must be positive");
  if (!(pump.sigma_thz > 0.0)) throw std::invalid_argument("pump sigma must be positive");
  if (pump.peak_power_w < 0.0) throw std::invalid_argument("pump peak power must be >= 0");
}

void validate(const MediumSpec& medium) {
  if (!(medium.length_m > 0.0)) throw std::invalid_argument("medium length must be positive");
  if (medium.gamma_per_w_km < 0.0) throw std::invalid_argument("gamma must be >= 0");
  if (!(medium.reference_thz > 0.0))
    throw std::invalid_argument("medium reference frequency must be positive");
}

double dispersive_wavevector(double frequency_thz, const MediumSpec& medium) {
  const double w = two_pi * (frequency_thz - medium.reference_thz);  // rad/ps
  const double per_km = w * w * (medium.beta2_ps2_km / 2.0 +
                                 w * (medium.beta3_ps3_km / 6.0 +
                                      w * (medium.beta4_ps4_km / 24.0)));
  return per_km / 1000.0;
}

}  // namespace nlipair
