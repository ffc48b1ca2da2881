#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlipair/phase_profile.hpp"
#include "nlipair/units.hpp"

namespace nlipair {

// Geometry and dispersion mapping of the phase panel: column c sits at
// wavelength_at_column0_nm + c * nm_per_column (the slope is negative when
// wavelength decreases across the panel). Gray level 256 would correspond to
// phase_full_scale radians, so level g encodes g / 256 * phase_full_scale.
struct SLMCalibration {
  int columns = 0;
  int rows = 0;
  double wavelength_at_column0_nm = 0.0;
  double nm_per_column = 0.0;
  double phase_full_scale = two_pi;
};

// 8-bit pattern, row-major, rows x columns.
struct GrayPattern {
  int columns = 0;
  int rows = 0;
  std::vector<std::uint8_t> pixels;
};

// Samples the profile at each column's wavelength (nearest axis end held
// outside the axis), wraps into [0, phase_full_scale), rounds to the nearest
// of 256 levels (level 256 wraps to 0), and replicates the row down the
// panel. Throws if any programmed band falls outside the panel's span.
GrayPattern phase_to_pattern(const PhaseProfile& profile, const SLMCalibration& calib);

// Per-column phase encoded by the pattern's first row.
std::vector<double> pattern_to_phase(const GrayPattern& pattern,
                                     const SLMCalibration& calib);

// Binary PGM (P5, maxval 255). The header is exactly
// "P5\n<columns> <rows>\n255\n" followed by the pixel bytes.
void export_pgm(const GrayPattern& pattern, const std::string& path);

// Strict reader for the files export_pgm writes, tolerant of the format's
// whitespace and '#' comments. Requires maxval 255 and an exact payload.
GrayPattern import_pgm(const std::string& path);

}  // namespace nlipair
