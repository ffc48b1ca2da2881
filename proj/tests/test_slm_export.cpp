#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "nlipair/phase_profile.hpp"
#include "nlipair/slm_export.hpp"
#include "nlipair/units.hpp"

using namespace nlipair;

namespace {

PumpSpec test_pump() { return PumpSpec{193.5, 0.042, 0.5, 1.25, 26.6}; }

ChannelSpec test_channel() {
  ChannelSpec ch;
  ch.signal_center_thz = 192.9;
  ch.idler_center_thz = 194.1;
  ch.a_signal_thz = 0.042;
  ch.a_idler_thz = 0.042;
  ch.band_half_width_thz = 0.126;
  return ch;
}

PhaseProfile design_profile() {
  return build_phase_profile(FrequencyAxis::centered(193.5, 0.9, 1441), test_pump(),
                             {test_channel()});
}

SLMCalibration panel() {
  SLMCalibration calib;
  calib.columns = 1920;
  calib.rows = 1080;
  calib.wavelength_at_column0_nm = 1560.0;
  calib.nm_per_column = -0.0125;
  return calib;
}

// Constant-phase profile carrying no programmed bands, so any panel span works.
PhaseProfile flat_profile(double phase) {
  const FrequencyAxis axis = FrequencyAxis::centered(193.5, 0.2, 5);
  return PhaseProfile(axis, std::vector<double>(5, phase),
                      std::vector<BandTag>(5));
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_bytes(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  REQUIRE(static_cast<bool>(out));
}

double circular_gap(double a, double b) {
  double d = std::abs(a - b);
  return std::min(d, two_pi - d);
}

template <typename Ex, typename Fn>
void check_throws_mentioning(Fn&& fn, const std::string& needle) {
  try {
    fn();
    FAIL_CHECK("expected an exception mentioning '" << needle << "'");
  } catch (const Ex& err) {
    CHECK(std::string(err.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("the design maps onto the panel one row at a time") {
  const PhaseProfile profile = design_profile();
  const SLMCalibration calib = panel();
  const GrayPattern pat = phase_to_pattern(profile, calib);

  CHECK(pat.columns == 1920);
  CHECK(pat.rows == 1080);
  REQUIRE(pat.pixels.size() == 1920u * 1080u);

  for (int r = 1; r < pat.rows; ++r)
    for (int c = 0; c < pat.columns; ++c)
      REQUIRE(pat.pixels[static_cast<std::size_t>(r) * 1920 + c] == pat.pixels[c]);

  // Columns that land inside the pump band carry pi/2, i.e. a quarter of the
  // 2 pi full scale: gray level 64. Keep a one-column margin off the edges.
  int checked = 0;
  for (int c = 0; c < pat.columns; ++c) {
    const double lam = 1560.0 - 0.0125 * c;
    const double nu = wavelength_to_frequency(lam);
    if (nu > 193.5 - 0.126 + 0.002 && nu < 193.5 + 0.126 - 0.002) {
      CHECK(pat.pixels[c] == 64);
      ++checked;
    }
  }
  CHECK(checked > 100);

  // Decoding the first row recovers the programmed phase to half a gray level.
  const std::vector<double> decoded = pattern_to_phase(pat, calib);
  REQUIRE(static_cast<int>(decoded.size()) == pat.columns);
  const FrequencyAxis& axis = profile.axis();
  for (int c = 0; c < pat.columns; ++c) {
    const double nu = wavelength_to_frequency(1560.0 - 0.0125 * c);
    if (nu < axis.front() || nu > axis.back()) continue;
    const double phi = profile.phase_at(nu);
    const double wrapped = phi - two_pi * std::floor(phi / two_pi);
    CHECK(circular_gap(decoded[c], wrapped) <= two_pi / 256.0 / 2.0 + 1e-9);
  }
}

TEST_CASE("gray levels encode wrapped phase with known anchors") {
  SLMCalibration calib = panel();
  calib.columns = 8;
  calib.rows = 2;

  CHECK(phase_to_pattern(flat_profile(two_pi / 4.0), calib).pixels[0] == 64);

  const GrayPattern shifted = phase_to_pattern(flat_profile(two_pi + 0.1), calib);
  const GrayPattern plain = phase_to_pattern(flat_profile(0.1), calib);
  CHECK(shifted.pixels[0] == plain.pixels[0]);

  // -0.1 rad wraps to just below full scale.
  CHECK(phase_to_pattern(flat_profile(-0.1), calib).pixels[0] == 252);
}

TEST_CASE("quantization rounds ties to even and wraps the top level") {
  SLMCalibration calib = panel();
  calib.columns = 4;
  calib.rows = 1;
  calib.phase_full_scale = 256.0;  // one radian per gray level

  CHECK(phase_to_pattern(flat_profile(2.5), calib).pixels[0] == 2);
  CHECK(phase_to_pattern(flat_profile(3.5), calib).pixels[0] == 4);
  CHECK(phase_to_pattern(flat_profile(4.5), calib).pixels[0] == 4);
  // 255.75 rounds to level 256, which is the same physical phase as level 0.
  CHECK(phase_to_pattern(flat_profile(255.75), calib).pixels[0] == 0);
}

TEST_CASE("PGM files round-trip byte for byte") {
  const GrayPattern pat = phase_to_pattern(design_profile(), panel());
  const std::string path = "slm_roundtrip.pgm";
  export_pgm(pat, path);

  const std::string raw = read_bytes(path);
  const std::string header = "P5\n1920 1080\n255\n";
  REQUIRE(raw.size() == header.size() + pat.pixels.size());
  CHECK(raw.compare(0, header.size(), header) == 0);

  const GrayPattern back = import_pgm(path);
  CHECK(back.columns == pat.columns);
  CHECK(back.rows == pat.rows);
  CHECK(back.pixels == pat.pixels);
}

TEST_CASE("the reader accepts comments and flexible whitespace") {
  const std::string path = "slm_comments.pgm";
  std::string data = "P5 # phase panel\n# generated for a test\n 4\t2 \n255\n";
  data += std::string(8, '\x40');
  write_bytes(path, data);
  const GrayPattern pat = import_pgm(path);
  CHECK(pat.columns == 4);
  CHECK(pat.rows == 2);
  CHECK(pat.pixels == std::vector<std::uint8_t>(8, 0x40));
}

TEST_CASE("the reader rejects malformed files") {
  const std::string path = "slm_bad.pgm";

  write_bytes(path, "P6\n4 2\n255\n" + std::string(24, 'x'));
  check_throws_mentioning<std::runtime_error>([&] { import_pgm(path); },
                                              "not a binary PGM");

  write_bytes(path, "P5\n4 2\n254\n" + std::string(8, 'x'));
  check_throws_mentioning<std::runtime_error>([&] { import_pgm(path); },
                                              "unsupported maxval");

  write_bytes(path, "P5\n4 2\n255\n" + std::string(7, 'x'));
  check_throws_mentioning<std::runtime_error>([&] { import_pgm(path); },
                                              "truncated");

  write_bytes(path, "P5\n4 2\n255\n" + std::string(9, 'x'));
  check_throws_mentioning<std::runtime_error>([&] { import_pgm(path); },
                                              "trailing bytes");

  write_bytes(path, "P5\n0 2\n255\n");
  check_throws_mentioning<std::runtime_error>([&] { import_pgm(path); },
                                              "must be positive");

  write_bytes(path, "P5\n4x 2\n255\n" + std::string(8, 'x'));
  check_throws_mentioning<std::runtime_error>([&] { import_pgm(path); },
                                              "non-numeric");

  write_bytes(path, "P5\n4 2\n255");
  check_throws_mentioning<std::runtime_error>([&] { import_pgm(path); },
                                              "missing separator");

  CHECK_THROWS_AS(import_pgm("no_such_file.pgm"), std::runtime_error);
}

TEST_CASE("panel calibration is validated before use") {
  const PhaseProfile profile = design_profile();

  SLMCalibration calib = panel();
  calib.columns = 0;
  CHECK_THROWS_AS(phase_to_pattern(profile, calib), std::invalid_argument);

  calib = panel();
  calib.nm_per_column = 0.0;
  CHECK_THROWS_AS(phase_to_pattern(profile, calib), std::invalid_argument);

  calib = panel();
  calib.phase_full_scale = 0.0;
  CHECK_THROWS_AS(phase_to_pattern(profile, calib), std::invalid_argument);

  calib = panel();
  calib.wavelength_at_column0_nm = 10.0;  // slope walks the span negative
  CHECK_THROWS_AS(phase_to_pattern(profile, calib), std::invalid_argument);

  // A panel parked far from the programmed bands cannot display them.
  calib = panel();
  calib.wavelength_at_column0_nm = 1500.0;
  check_throws_mentioning<std::invalid_argument>(
      [&] { phase_to_pattern(profile, calib); }, "outside the panel");

  GrayPattern ragged;
  ragged.columns = 4;
  ragged.rows = 2;
  ragged.pixels.assign(7, 0);
  check_throws_mentioning<std::invalid_argument>(
      [&] { pattern_to_phase(ragged, panel()); }, "malformed");
  check_throws_mentioning<std::invalid_argument>(
      [&] { export_pgm(ragged, "never_written.pgm"); }, "malformed");
}
