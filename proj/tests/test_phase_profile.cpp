#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nlipair/nli_model.hpp"
#include "nlipair/phase_profile.hpp"

using namespace nlipair;

namespace {

constexpr double kPi = 3.14159265358979323846;

PumpSpec test_pump() { return PumpSpec{193.5, 0.042, 0.5, 1.25, 26.6}; }

ChannelSpec test_channel(double a = 0.042, double half_width = 0.126) {
  ChannelSpec ch;
  ch.signal_center_thz = 192.9;
  ch.idler_center_thz = 194.1;
  ch.a_signal_thz = a;
  ch.a_idler_thz = a;
  ch.band_half_width_thz = half_width;
  return ch;
}

}  // namespace

TEST_CASE("u is odd, bounded by pi/2, and increasing") {
  const double a = 0.042;
  double prev = -10.0;
  for (int k = -400; k <= 400; ++k) {
    const double x = k * 0.001;
    const double u = u_series(x, a);
    CHECK(std::abs(u) < kPi / 2.0);
    CHECK(u_series(-x, a) == -u);  // exact: odd polynomial inside an odd atan
    CHECK(u > prev);
    prev = u;
  }
  CHECK(u_series(0.0, a) == 0.0);
}

TEST_CASE("cos(u) tracks the Gaussian within its stated bands") {
  for (double a : {0.021, 0.042, 0.71, 1.0}) {
    double worst_in = 0.0, worst_out = 0.0;
    for (int k = -1500; k <= 1500; ++k) {
      const double x = 1.5 * a * k / 1500.0;
      const double err = std::abs(std::cos(u_series(x, a)) - std::exp(-x * x / (a * a)));
      if (std::abs(x) <= a) worst_in = std::max(worst_in, err);
      worst_out = std::max(worst_out, err);
    }
    CHECK(worst_in < 1e-3);
    CHECK(worst_out < 6e-3);
  }
  // The mismatch depends only on x/a, so the worst case is scale-free.
  CHECK(std::cos(u_series(0.042, 0.042)) ==
        doctest::Approx(std::cos(u_series(1.0, 1.0))).epsilon(1e-12));
  CHECK(std::cos(u_series(0.042, 0.042)) == doctest::Approx(0.368374).epsilon(1e-5));
}

TEST_CASE("u rejects a nonpositive width parameter") {
  CHECK_THROWS_AS(u_series(0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(u_series(0.1, -0.042), std::invalid_argument);
}

TEST_CASE("default band half width: pump-limited alone, spacing-limited in a comb") {
  const PumpSpec pump = test_pump();
  std::vector<ChannelSpec> one{test_channel()};
  CHECK(default_band_half_width(pump, one) == doctest::Approx(0.126).epsilon(1e-12));

  std::vector<ChannelSpec> comb;
  for (double off : {0.6, 0.4, 0.2}) {
    ChannelSpec ch = test_channel();
    ch.signal_center_thz = 193.5 - off;
    ch.idler_center_thz = 193.5 + off;
    comb.push_back(ch);
  }
  CHECK(default_band_half_width(pump, comb) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("profile writes pi/2 on the pump band and -+u ramps on the channels") {
  const PumpSpec pump = test_pump();
  const std::vector<ChannelSpec> channels{test_channel()};
  const FrequencyAxis axis = FrequencyAxis::centered(193.5, 0.9, 1441);
  const PhaseProfile profile = build_phase_profile(axis, pump, channels);
  REQUIRE(profile.size() == axis.size());

  int pump_n = 0, signal_n = 0, idler_n = 0, fill_n = 0;
  for (int i = 0; i < profile.size(); ++i) {
    const double f = axis[i];
    switch (profile.tag(i).kind) {
      case BandKind::pump:
        ++pump_n;
        CHECK(profile[i] == kPi / 2.0);
        CHECK(f >= 193.374 - 1e-12);
        CHECK(f <= 193.626 + 1e-12);
        break;
      case BandKind::signal:
        ++signal_n;
        CHECK(profile.tag(i).channel == 0);
        CHECK(profile[i] ==
              doctest::Approx(-u_series(f - 192.9, 0.042) + kPi / 2.0).epsilon(1e-12));
        break;
      case BandKind::idler:
        ++idler_n;
        CHECK(profile[i] ==
              doctest::Approx(+u_series(f - 194.1, 0.042) + kPi / 2.0).epsilon(1e-12));
        break;
      case BandKind::fill:
        ++fill_n;
        break;
    }
  }
  CHECK(pump_n > 0);
  CHECK(signal_n > 0);
  CHECK(idler_n > 0);
  CHECK(fill_n > 0);

  // Every gap sample holds the value of the nearest channel band edge, so the
  // stretch between the signal band and the pump band is flat at the signal
  // band's upper-edge value.
  const double held = -u_series(0.126, 0.042) + kPi / 2.0;
  const double probe = 193.2;  // between signal band hi (193.026) and pump lo (193.374)
  CHECK(profile.phase_at(probe) == doctest::Approx(held).epsilon(1e-12));
}

TEST_CASE("reversing a channel mirrors its bands about pi/2") {
  const PumpSpec pump = test_pump();
  const FrequencyAxis axis = FrequencyAxis::centered(193.5, 0.9, 1441);
  std::vector<ChannelSpec> fwd{test_channel()};
  std::vector<ChannelSpec> rev{test_channel()};
  rev[0].reversed = true;
  const PhaseProfile pf = build_phase_profile(axis, pump, fwd);
  const PhaseProfile pr = build_phase_profile(axis, pump, rev);
  for (int i = 0; i < pf.size(); ++i)
    if (pf.tag(i).kind == BandKind::signal || pf.tag(i).kind == BandKind::idler)
      CHECK(pf[i] + pr[i] == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("profile construction rejects inconsistent layouts") {
  const PumpSpec pump = test_pump();
  const FrequencyAxis axis = FrequencyAxis::centered(193.5, 0.9, 1441);

  CHECK_THROWS_AS(build_phase_profile(axis, pump, {}), std::invalid_argument);

  ChannelSpec off_energy = test_channel();
  off_energy.idler_center_thz = 194.2;  // signal + idler != 2 * pump center
  CHECK_THROWS_AS(build_phase_profile(axis, pump, {off_energy}), std::invalid_argument);

  ChannelSpec outside = test_channel();
  outside.signal_center_thz = 192.5;
  outside.idler_center_thz = 194.5;  // idler band would end at 194.626 > axis end
  CHECK_THROWS_AS(build_phase_profile(axis, pump, {outside}), std::invalid_argument);

  // Two channels with the same centers overlap.
  CHECK_THROWS_AS(build_phase_profile(axis, pump, {test_channel(), test_channel()}),
                  std::invalid_argument);

  ChannelSpec bad_a = test_channel();
  bad_a.a_signal_thz = 0.0;
  CHECK_THROWS_AS(build_phase_profile(axis, pump, {bad_a}), std::invalid_argument);

  ChannelSpec bad_width = test_channel();
  bad_width.band_half_width_thz = -0.1;
  CHECK_THROWS_AS(build_phase_profile(axis, pump, {bad_width}), std::invalid_argument);
}

TEST_CASE("touching bands are accepted and join without a jump") {
  // Three channels on a 0.2 THz comb with 0.1 THz half widths: adjacent bands
  // share edges exactly. Everything but the pump-band boundary must be
  // continuous at the u-saturation level.
  const PumpSpec pump = test_pump();
  std::vector<ChannelSpec> comb;
  for (int k = 0; k < 3; ++k) {
    ChannelSpec ch = test_channel(0.042, 0.1);
    ch.signal_center_thz = 192.9 - 0.2 * k;
    ch.idler_center_thz = 194.1 + 0.2 * k;
    ch.reversed = (k % 2 == 1);
    comb.push_back(ch);
  }
  const FrequencyAxis axis = FrequencyAxis::centered(193.5, 1.2, 9601);  // 0.25 GHz step
  const PhaseProfile profile = build_phase_profile(axis, pump, comb);

  double worst = 0.0;
  for (int i = 0; i + 1 < profile.size(); ++i) {
    if (profile.tag(i).kind == BandKind::pump ||
        profile.tag(i + 1).kind == BandKind::pump)
      continue;  // the pump band sits pi/2 above its surroundings by design
    worst = std::max(worst, std::abs(profile[i + 1] - profile[i]));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("profile evaluation interpolates and rejects out-of-range queries") {
  const FrequencyAxis axis(193.0, 0.5, 3);
  PhaseProfile profile(axis, {0.0, 1.0, 0.5}, {});
  CHECK(profile.phase_at(193.0) == 0.0);
  CHECK(profile.phase_at(193.25) == doctest::Approx(0.5));
  CHECK(profile.phase_at(193.75) == doctest::Approx(0.75));
  CHECK(profile.phase_at(194.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(profile.phase_at(192.999), std::invalid_argument);
  CHECK_THROWS_AS(profile.phase_at(194.001), std::invalid_argument);
  CHECK_THROWS_AS(PhaseProfile(axis, {0.0, 1.0}, {}), std::invalid_argument);
}

TEST_CASE("the curvature functional is blind to constant and linear phase") {
  const FrequencyAxis axis = FrequencyAxis::centered(193.5, 0.9, 601);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<double> samples(axis.size());
  for (double& v : samples) v = dist(rng);
  const PhaseProfile base(axis, samples, {});

  std::vector<double> gauged = samples;
  const double alpha = 0.83, beta = 1.7;
  for (int i = 0; i < axis.size(); ++i) gauged[i] += alpha + beta * (axis[i] - 193.5);
  const PhaseProfile shifted(axis, gauged, {});

  std::uniform_real_distribution<double> fs(193.1, 193.4), fi(193.6, 193.9);
  for (int trial = 0; trial < 50; ++trial) {
    const double ws = fs(rng), wi = fi(rng);
    CHECK(delta_phi(base, ws, wi) ==
          doctest::Approx(delta_phi(shifted, ws, wi)).epsilon(1e-9));
  }
}

TEST_CASE("compensation is the identity for a dispersionless dark medium") {
  const PumpSpec pump = test_pump();
  const FrequencyAxis axis = FrequencyAxis::centered(193.5, 0.9, 1441);
  const PhaseProfile profile = build_phase_profile(axis, pump, {test_channel()});
  MediumSpec medium{30.0, 2.0, 193.5, 0.0, 0.0, 0.0};

  PumpSpec dark = pump;
  dark.peak_power_w = 0.0;
  const PhaseProfile same = dispersion_compensation(profile, medium, dark);
  for (int i = 0; i < profile.size(); ++i) CHECK(same[i] == profile[i]);

  // With pump power the only change is the pump band rising by gamma*P*L.
  const PhaseProfile lifted = dispersion_compensation(profile, medium, pump);
  const double shift = 2.0 / 1000.0 * 0.5 * 30.0;
  for (int i = 0; i < profile.size(); ++i) {
    if (profile.tag(i).kind == BandKind::pump)
      CHECK(lifted[i] == doctest::Approx(profile[i] + shift).epsilon(1e-12));
    else
      CHECK(lifted[i] == profile[i]);
  }
}

TEST_CASE("compensation cancels a quadratic-dispersion mismatch to 1e-9 rad") {
  const PumpSpec pump{193.5, 0.042, 1.0, 0.0, 0.0};
  const MediumSpec medium{30.0, 2.0, 193.5, 0.005, 0.0, 0.0};
  // Fine sampling: the identity holds up to linear interpolation of the
  // quadratic compensation term, which shrinks with the profile step squared.
  const FrequencyAxis axis = FrequencyAxis::centered(193.5, 0.9, 14401);
  const PhaseProfile design = build_phase_profile(axis, pump, {test_channel()});
  const PhaseProfile comp = dispersion_compensation(design, medium, pump);

  const FrequencyAxis sax = FrequencyAxis::centered(192.9, 0.252, 41);
  const FrequencyAxis iax = FrequencyAxis::centered(194.1, 0.252, 41);
  double worst = 0.0;
  int counted = 0;
  for (int i = 0; i < sax.size(); ++i)
    for (int j = 0; j < iax.size(); ++j) {
      const double mid = (sax[i] + iax[j]) / 2.0;
      // Stay clear of the pump band edges: the pump lift applies only to
      // midpoints whose interpolation anchors both sit inside the band.
      if (mid < 193.379 || mid > 193.621) continue;
      const double dkl = wavevector_mismatch(sax[i], iax[j], medium, pump) * 30.0;
      const double residual =
          dkl + delta_phi(comp, sax[i], iax[j]) - delta_phi(design, sax[i], iax[j]);
      worst = std::max(worst, std::abs(residual));
      ++counted;
    }
  CHECK(counted > 1000);
  CHECK(worst < 1e-9);
}
