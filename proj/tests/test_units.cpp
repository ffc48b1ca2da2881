#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "nlipair/units.hpp"

using namespace nlipair;

TEST_CASE("wavelength/frequency conversion round-trips and uses vacuum c") {
  for (double lam : {1530.0, 1544.53, 1550.0, 1554.13, 1565.0}) {
    const double nu = wavelength_to_frequency(lam);
    CHECK(nu * lam == doctest::Approx(speed_of_light_nm_thz).epsilon(1e-15));
    CHECK(frequency_to_wavelength(nu) == doctest::Approx(lam).epsilon(1e-15));
  }
  // Higher frequency means shorter wavelength.
  CHECK(wavelength_to_frequency(1544.53) > wavelength_to_frequency(1554.13));
}

TEST_CASE("conversions reject nonpositive and non-finite input") {
  CHECK_THROWS_AS(wavelength_to_frequency(0.0), std::invalid_argument);
  CHECK_THROWS_AS(wavelength_to_frequency(-1e3), std::invalid_argument);
  CHECK_THROWS_AS(wavelength_to_frequency(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(frequency_to_wavelength(0.0), std::invalid_argument);
  CHECK_THROWS_AS(frequency_to_wavelength(-193.5), std::invalid_argument);
}

TEST_CASE("centered axis hits its center exactly and is symmetric") {
  const FrequencyAxis axis = FrequencyAxis::centered(193.5, 0.252, 201);
  CHECK(axis.size() == 201);
  CHECK(axis[100] == 193.5);  // exact, not approximate
  CHECK(axis.step() == doctest::Approx(0.00252).epsilon(1e-12));
  for (int k = 1; k <= 100; ++k)
    CHECK(axis[100 + k] + axis[100 - k] ==
          doctest::Approx(2.0 * 193.5).epsilon(1e-14));  // mirror pairs
  CHECK(axis.front() == doctest::Approx(193.248).epsilon(1e-12));
  CHECK(axis.back() == doctest::Approx(193.752).epsilon(1e-12));
}

TEST_CASE("axis sampling is drift-free and index helpers behave") {
  const FrequencyAxis axis(192.9, 0.002, 301);
  for (int i : {0, 1, 150, 299, 300}) CHECK(axis[i] == 192.9 + i * 0.002);
  CHECK(axis.contains(axis.front()));
  CHECK(axis.contains(axis.back()));
  CHECK(!axis.contains(axis.front() - 1e-9));
  CHECK(!axis.contains(axis.back() + 1e-9));
  for (int i : {0, 17, 300}) CHECK(axis.nearest_index(axis[i]) == i);
  CHECK(axis.nearest_index(axis[5] + 0.4 * axis.step()) == 5);
  CHECK(axis.nearest_index(axis[5] + 0.6 * axis.step()) == 6);
  CHECK(axis.nearest_index(axis.front() - 1.0) == 0);
  CHECK(axis.nearest_index(axis.back() + 1.0) == 300);
}

TEST_CASE("axis constructors reject malformed shapes") {
  CHECK_THROWS_AS(FrequencyAxis(193.5, 0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyAxis(193.5, 0.0, 5), std::invalid_argument);
  CHECK_NOTHROW(FrequencyAxis(193.5, 0.0, 1));  // single sample needs no step
  CHECK_THROWS_AS(FrequencyAxis::centered(193.5, 0.1, 4), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyAxis::centered(193.5, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyAxis::centered(193.5, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyAxis::centered(193.5, -0.1, 5), std::invalid_argument);
}

TEST_CASE("pump and medium validation") {
  PumpSpec pump{193.5, 0.042, 0.5, 1.25, 26.6};
  CHECK_NOTHROW(validate(pump));
  PumpSpec bad = pump;
  bad.sigma_thz = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = pump;
  bad.center_thz = -1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = pump;
  bad.peak_power_w = -0.1;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  MediumSpec medium{30.0, 2.0, 193.5, 0.005, 0.0, 0.0};
  CHECK_NOTHROW(validate(medium));
  MediumSpec badm = medium;
  badm.length_m = 0.0;
  CHECK_THROWS_AS(validate(badm), std::invalid_argument);
  badm = medium;
  badm.gamma_per_w_km = -1.0;
  CHECK_THROWS_AS(validate(badm), std::invalid_argument);
  badm = medium;
  badm.reference_thz = 0.0;
  CHECK_THROWS_AS(validate(badm), std::invalid_argument);
}

TEST_CASE("dispersive wavevector matches its Taylor form") {
  MediumSpec medium{1.0, 0.0, 193.5, 0.0, 0.0, 0.0};
  // No dispersion terms: identically zero.
  for (double nu : {190.0, 193.5, 197.0})
    CHECK(dispersive_wavevector(nu, medium) == 0.0);

  // beta2-only anchor: detuning chosen so w = 2*pi*(nu - ref) = 1 rad/ps gives
  // k = beta2/2 per km = 5e-4 per m for beta2 = 1 ps^2/km.
  medium.beta2_ps2_km = 1.0;
  const double nu1 = 193.5 + 1.0 / two_pi;
  CHECK(dispersive_wavevector(nu1, medium) == doctest::Approx(5e-4).epsilon(1e-12));

  // Full Taylor polynomial evaluated independently.
  medium.beta2_ps2_km = 0.005;
  medium.beta3_ps3_km = 0.08;
  medium.beta4_ps4_km = -4e-4;
  for (double nu : {192.2, 193.1, 194.9}) {
    const double w = two_pi * (nu - medium.reference_thz);
    const double expect = (medium.beta2_ps2_km / 2.0 * w * w +
                           medium.beta3_ps3_km / 6.0 * w * w * w +
                           medium.beta4_ps4_km / 24.0 * w * w * w * w) /
                          1000.0;
    CHECK(dispersive_wavevector(nu, medium) == doctest::Approx(expect).epsilon(1e-12));
  }
  // Even/odd symmetry: the beta2/beta4 terms are even in the detuning, beta3 odd.
  medium.beta3_ps3_km = 0.0;
  CHECK(dispersive_wavevector(193.5 + 0.7, medium) ==
        doctest::Approx(dispersive_wavevector(193.5 - 0.7, medium)).epsilon(1e-12));
}
