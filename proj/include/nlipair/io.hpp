#pragma once

#include <map>
#include <string>
#include <vector>

#include "nlipair/measurement_sim.hpp"
#include "nlipair/nli_model.hpp"
#include "nlipair/phase_profile.hpp"
#include "nlipair/spectral_analysis.hpp"

// Plain-text output formats. All numbers are written with snprintf in the "C"
// locale, so a given run produces byte-identical files on every platform.

namespace nlipair {

// "frequency_THz,phase_rad" rows, full double precision (%.17g round-trips).
void write_profile_csv(const PhaseProfile& profile, const std::string& path);

struct ProfileSamples {
  std::vector<double> frequency_thz;
  std::vector<double> phase_rad;
};
ProfileSamples read_profile_csv(const std::string& path);

// Sidecar naming each programmed band interval as flat `key = value` lines:
// pump.lo_thz / pump.hi_thz and channel.<k>.<signal|idler>.<lo|hi>_thz.
void write_band_map(const PhaseProfile& profile, const std::string& path);
std::map<std::string, double> read_band_map(const std::string& path);

// "signal_THz,idler_THz,re,im,abs2", idler fastest (row-major).
void write_jsf_csv(const JSF& jsf, const std::string& path);
// Rebuilds the JSF, inferring both uniform axes from the coordinate columns.
JSF read_jsf_csv(const std::string& path);

// "signal_nm,idler_nm,true_coincidence,accidental", idler fastest.
void write_scan_csv(const ScanResult& result, const std::string& path);

struct AnalysisEtaRow {
  double eta = 0.0;
  double g2 = 0.0;
  double heralding = 0.0;
};

struct AnalysisReport {
  double schmidt_number_full = 0.0;      // whole grid
  double schmidt_number_windowed = 0.0;  // under the analysis filter
  double pearson_full = 0.0;
  double pearson_windowed = 0.0;
  double total_weight = 0.0;
  bool windowed = false;  // whether a filter was engaged (else *_windowed == *_full)
  std::vector<AnalysisEtaRow> eta_rows;
  ChannelDecomposition channels;
};

void write_analysis_report(const AnalysisReport& report, const std::string& path);

}  // namespace nlipair
