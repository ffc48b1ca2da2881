#include "nlipair/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nlipair {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  if (value.empty() || value[0] == '-')
    throw ConfigError(key + ": expected a nonnegative integer, got '" + value + "'");
  const char* begin = value.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw ConfigError(key + ": expected a nonnegative integer, got '" + value + "'");
  return static_cast<std::uint64_t>(v);
}

int to_int(const std::string& key, const std::string& value) {
  const std::uint64_t v = to_u64(key, value);
  if (v > 1000000000ULL) throw ConfigError(key + ": value out of range");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

struct PartialChannel {
  ChannelSpec spec;
  bool has_band_half_width = false;
};

struct Assembler {
  RunConfig cfg;
  std::set<std::string> seen;
  std::map<int, PartialChannel> channels;
  bool scan_present = false, hbt_present = false, slm_present = false;
  ScanConfig scan;
  HbtConfig hbt{0.0, 1.0, 0};
  SLMCalibration slm;

  bool has(const std::string& key) const { return seen.count(key) != 0; }

  void require(const std::string& key) const {
    if (!has(key)) throw ConfigError("missing required key: " + key);
  }

  void set(const std::string& key, const std::string& value) {
    if (!seen.insert(key).second) throw ConfigError("duplicate key: " + key);

    if (key.rfind("channel.", 0) == 0) {
      set_channel(key, value);
      return;
    }
    if (key.rfind("scan.", 0) == 0) scan_present = true;
    if (key.rfind("hbt.", 0) == 0) hbt_present = true;
    if (key.rfind("slm.", 0) == 0) slm_present = true;

    if (key == "pump.center_thz") cfg.pump.center_thz = to_double(key, value);
    else if (key == "pump.sigma_thz") cfg.pump.sigma_thz = to_double(key, value);
    else if (key == "pump.peak_power_w") cfg.pump.peak_power_w = to_double(key, value);
    else if (key == "pump.average_power_mw") cfg.pump.average_power_mw = to_double(key, value);
    else if (key == "pump.repetition_rate_mhz") cfg.pump.rep_rate_mhz = to_double(key, value);
    else if (key == "medium.length_m") cfg.medium.length_m = to_double(key, value);
    else if (key == "medium.gamma_per_w_km") cfg.medium.gamma_per_w_km = to_double(key, value);
    else if (key == "medium.reference_thz") cfg.medium.reference_thz = to_double(key, value);
    else if (key == "medium.beta2_ps2_km") cfg.medium.beta2_ps2_km = to_double(key, value);
    else if (key == "medium.beta3_ps3_km") cfg.medium.beta3_ps3_km = to_double(key, value);
    else if (key == "medium.beta4_ps4_km") cfg.medium.beta4_ps4_km = to_double(key, value);
    else if (key == "grid.signal_center_thz") cfg.grid_signal_center_thz = to_double(key, value);
    else if (key == "grid.idler_center_thz") cfg.grid_idler_center_thz = to_double(key, value);
    else if (key == "grid.half_width_thz") cfg.grid_half_width_thz = to_double(key, value);
    else if (key == "grid.count") cfg.grid_count = to_int(key, value);
    else if (key == "eta") cfg.eta = to_double(key, value);
    else if (key == "gain") cfg.gain = to_double(key, value);
    else if (key == "seed") cfg.seed = to_u64(key, value);
    else if (key == "model.simplified") cfg.simplified_model = to_bool(key, value);
    else if (key == "model.compensate") cfg.compensate = to_bool(key, value);
    else if (key == "analysis.window_thz") cfg.analysis_window_thz = to_double(key, value);
    else if (key == "scan.signal_start_nm") scan.signal_start_nm = to_double(key, value);
    else if (key == "scan.signal_stop_nm") scan.signal_stop_nm = to_double(key, value);
    else if (key == "scan.idler_start_nm") scan.idler_start_nm = to_double(key, value);
    else if (key == "scan.idler_stop_nm") scan.idler_stop_nm = to_double(key, value);
    else if (key == "scan.step_nm") scan.step_nm = to_double(key, value);
    else if (key == "scan.filter_width_nm") scan.filter_width_nm = to_double(key, value);
    else if (key == "scan.pulses_per_point") scan.pulses_per_point = to_double(key, value);
    else if (key == "hbt.mean_photons") hbt.mean_photons = to_double(key, value);
    else if (key == "hbt.detector_efficiency") hbt.detector_efficiency = to_double(key, value);
    else if (key == "hbt.pulses") hbt.pulses = to_u64(key, value);
    else if (key == "slm.columns") slm.columns = to_int(key, value);
    else if (key == "slm.rows") slm.rows = to_int(key, value);
    else if (key == "slm.wavelength_at_column_0_nm") slm.wavelength_at_column0_nm = to_double(key, value);
    else if (key == "slm.nm_per_column") slm.nm_per_column = to_double(key, value);
    else if (key == "slm.phase_full_scale") slm.phase_full_scale = to_double(key, value);
    else throw ConfigError("unknown configuration key: " + key);
  }

  void set_channel(const std::string& key, const std::string& value) {
    // channel.<index>.<field>
    const std::size_t second = key.find('.', 8);
    if (second == std::string::npos || second == 8)
      throw ConfigError("malformed channel key: " + key);
    const std::string index_text = key.substr(8, second - 8);
    for (char ch : index_text)
      if (!std::isdigit(static_cast<unsigned char>(ch)))
        throw ConfigError("malformed channel index in key: " + key);
    const int index = to_int(key, index_text);
    const std::string field = key.substr(second + 1);

    PartialChannel& ch = channels[index];
    if (field == "signal_center_thz") ch.spec.signal_center_thz = to_double(key, value);
    else if (field == "idler_center_thz") ch.spec.idler_center_thz = to_double(key, value);
    else if (field == "a_signal_thz") ch.spec.a_signal_thz = to_double(key, value);
    else if (field == "a_idler_thz") ch.spec.a_idler_thz = to_double(key, value);
    else if (field == "band_half_width_thz") {
      ch.spec.band_half_width_thz = to_double(key, value);
      ch.has_band_half_width = true;
    } else if (field == "reversed") ch.spec.reversed = to_bool(key, value);
    else throw ConfigError("unknown channel field in key: " + key);
  }

  RunConfig finish() {
    require("pump.center_thz");
    require("pump.sigma_thz");
    require("grid.signal_center_thz");
    require("grid.idler_center_thz");
    require("grid.half_width_thz");
    require("grid.count");

    if (!(cfg.pump.center_thz > 0.0) || !(cfg.pump.sigma_thz > 0.0))
      throw ConfigError("pump center and sigma must be positive");
    if (!(cfg.grid_signal_center_thz > 0.0) || !(cfg.grid_idler_center_thz > 0.0) ||
        !(cfg.grid_half_width_thz > 0.0))
      throw ConfigError("grid centers and half width must be positive");
    if (cfg.grid_count < 3 || cfg.grid_count % 2 == 0)
      throw ConfigError("grid.count must be an odd integer >= 3");
    if (!(cfg.eta >= 0.0 && cfg.eta <= 1.0))
      throw ConfigError("eta must lie in [0, 1]");
    if (!(cfg.gain > 0.0)) throw ConfigError("gain must be positive");
    if (cfg.analysis_window_thz < 0.0)
      throw ConfigError("analysis.window_thz must be nonnegative");
    if (cfg.medium.length_m < 0.0) throw ConfigError("medium.length_m must be nonnegative");
    if (cfg.medium.reference_thz == 0.0) cfg.medium.reference_thz = cfg.pump.center_thz;

    if (channels.empty()) throw ConfigError("no channels configured");
    int expected = 0;
    bool any_default_width = false;
    for (const auto& [index, partial] : channels) {
      if (index != expected)
        throw ConfigError("channel indices must be contiguous from 0; missing channel." +
                          std::to_string(expected));
      ++expected;
      const std::string prefix = "channel." + std::to_string(index) + ".";
      for (const char* field :
           {"signal_center_thz", "idler_center_thz", "a_signal_thz", "a_idler_thz"})
        require(prefix + field);
      cfg.channels.push_back(partial.spec);
      if (!partial.has_band_half_width) any_default_width = true;
    }
    if (any_default_width) {
      const double width = default_band_half_width(cfg.pump, cfg.channels);
      for (std::size_t k = 0; k < cfg.channels.size(); ++k)
        if (!channels[static_cast<int>(k)].has_band_half_width)
          cfg.channels[k].band_half_width_thz = width;
    }

    if (scan_present) {
      for (const char* field :
           {"scan.signal_start_nm", "scan.signal_stop_nm", "scan.idler_start_nm",
            "scan.idler_stop_nm", "scan.step_nm", "scan.filter_width_nm",
            "scan.pulses_per_point"})
        require(field);
      cfg.scan = scan;
    }
    if (hbt_present) {
      require("hbt.mean_photons");
      require("hbt.pulses");
      cfg.hbt = hbt;
    }
    if (slm_present) {
      for (const char* field : {"slm.columns", "slm.rows",
                                "slm.wavelength_at_column_0_nm", "slm.nm_per_column"})
        require(field);
      cfg.slm = slm;
    }

    try {
      validate(cfg.pump);
      validate(cfg.medium);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(err.what());
    }
    return std::move(cfg);
  }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  Assembler assembler;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(number) + ": empty key");
    try {
      assembler.set(key, value);
    } catch (const ConfigError& err) {
      throw ConfigError("line " + std::to_string(number) + ": " + err.what());
    }
  }
  return assembler.finish();
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

FrequencyAxis signal_axis(const RunConfig& cfg) {
  return FrequencyAxis::centered(cfg.grid_signal_center_thz, cfg.grid_half_width_thz,
                                 cfg.grid_count);
}

FrequencyAxis idler_axis(const RunConfig& cfg) {
  return FrequencyAxis::centered(cfg.grid_idler_center_thz, cfg.grid_half_width_thz,
                                 cfg.grid_count);
}

FrequencyAxis profile_axis(const RunConfig& cfg) {
  double lo = std::min(cfg.grid_signal_center_thz - cfg.grid_half_width_thz,
                       cfg.pump.center_thz - 3.0 * cfg.pump.sigma_thz);
  double hi = std::max(cfg.grid_idler_center_thz + cfg.grid_half_width_thz,
                       cfg.pump.center_thz + 3.0 * cfg.pump.sigma_thz);
  double finest = cfg.pump.sigma_thz;
  for (const ChannelSpec& ch : cfg.channels) {
    lo = std::min(lo, ch.signal_center_thz - ch.band_half_width_thz);
    hi = std::max(hi, ch.idler_center_thz + ch.band_half_width_thz);
    finest = std::min({finest, ch.a_signal_thz, ch.a_idler_thz});
  }
  const double step = finest / 16.0;
  lo -= 2.0 * step;
  hi += 2.0 * step;
  const int half_count = static_cast<int>(std::ceil((hi - lo) / 2.0 / step));
  return FrequencyAxis::centered(0.5 * (lo + hi), half_count * step, 2 * half_count + 1);
}

PhaseProfile design_profile(const RunConfig& cfg) {
  PhaseProfile profile = build_phase_profile(profile_axis(cfg), cfg.pump, cfg.channels);
  if (cfg.compensate)
    profile = dispersion_compensation(profile, cfg.medium, cfg.pump);
  return profile;
}

Model model_of(const RunConfig& cfg) {
  return cfg.simplified_model ? Model::simplified : Model::full;
}

BandFilter analysis_filter(const RunConfig& cfg) {
  BandFilter filter;
  if (cfg.analysis_window_thz > 0.0) {
    const double half = cfg.analysis_window_thz / 2.0;
    const ChannelSpec& ch = cfg.channels.front();
    filter.signal = Window{ch.signal_center_thz - half, ch.signal_center_thz + half};
    filter.idler = Window{ch.idler_center_thz - half, ch.idler_center_thz + half};
  }
  return filter;
}

}  // namespace nlipair
