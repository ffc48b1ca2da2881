#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlipair/measurement_sim.hpp"
#include "nlipair/nli_model.hpp"
#include "nlipair/phase_profile.hpp"
#include "nlipair/slm_export.hpp"
#include "nlipair/spectral_analysis.hpp"
#include "nlipair/units.hpp"

namespace nlipair {

// Raised for malformed or inconsistent configuration input, as opposed to a
// failure while computing. Derives from invalid_argument so library-level
// precondition throws and configuration mistakes can be handled together.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// One run of the engine: source parameters, the computation grid, the
// programmed channels, and the optional measurement / export blocks.
struct RunConfig {
  PumpSpec pump;
  MediumSpec medium;

  double grid_signal_center_thz = 0.0;
  double grid_idler_center_thz = 0.0;
  double grid_half_width_thz = 0.0;
  int grid_count = 0;

  std::vector<ChannelSpec> channels;

  double eta = 1.0;   // interferometer transmission between the two stages
  double gain = 0.1;  // per-stage parametric gain G
  std::uint64_t seed = 1;
  bool simplified_model = true;  // drop phase matching (short-medium limit)
  bool compensate = false;       // subtract the medium dispersion from the profile

  // Width of the dual bandpass (centered on channel 0) applied by the
  // analysis outputs; 0 means no filtering.
  double analysis_window_thz = 0.0;

  std::optional<ScanConfig> scan;
  std::optional<HbtConfig> hbt;
  std::optional<SLMCalibration> slm;
};

// Parses the flat `key = value` format (one pair per line, '#' comments,
// dotted section names, channels as channel.<index>.<field>). Unknown keys,
// duplicates, type mismatches, and missing required fields all raise
// ConfigError naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Computation grids: symmetric odd-count axes around the configured centers.
FrequencyAxis signal_axis(const RunConfig& cfg);
FrequencyAxis idler_axis(const RunConfig& cfg);

// Axis for the programmable phase: spans the grids, every channel band, and
// the pump band, with a step fine enough to resolve the narrowest feature
// (min of sigma_p and all ramp widths, divided by 16).
FrequencyAxis profile_axis(const RunConfig& cfg);

// Builds the programmed phase (plus dispersion compensation when configured).
PhaseProfile design_profile(const RunConfig& cfg);

Model model_of(const RunConfig& cfg);

// Dual bandpass of width analysis_window_thz around the first channel's
// centers; disengaged (no windows) when the width is 0.
BandFilter analysis_filter(const RunConfig& cfg);

}  // namespace nlipair
