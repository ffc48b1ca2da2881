#include "nlipair/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlipair {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

double parse_field(const std::string& text, const std::string& path, int line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::runtime_error(path + " line " + std::to_string(line) +
                             ": expected a number, got '" + text + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Lines of `path`, with trailing '\r' stripped so CRLF inputs parse too.
std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(slurp(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

void write_profile_csv(const PhaseProfile& profile, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "frequency_THz,phase_rad\n";
  char buf[80];
  for (int i = 0; i < profile.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", profile.axis()[i], profile[i]);
    out << buf;
  }
  finish_out(out, path);
}

ProfileSamples read_profile_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0] != "frequency_THz,phase_rad")
    throw std::runtime_error(path + ": missing profile header");
  ProfileSamples samples;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::vector<std::string> fields = split_csv(lines[n]);
    if (fields.size() != 2)
      throw std::runtime_error(path + " line " + std::to_string(n + 1) +
                               ": expected 2 fields");
    samples.frequency_thz.push_back(parse_field(fields[0], path, static_cast<int>(n + 1)));
    samples.phase_rad.push_back(parse_field(fields[1], path, static_cast<int>(n + 1)));
  }
  if (samples.frequency_thz.empty())
    throw std::runtime_error(path + ": no profile samples");
  return samples;
}

void write_band_map(const PhaseProfile& profile, const std::string& path) {
  std::ofstream out = open_out(path);
  char buf[120];
  int i = 0;
  while (i < profile.size()) {
    const BandTag tag = profile.tag(i);
    if (tag.kind == BandKind::fill) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < profile.size() && profile.tag(j + 1).kind == tag.kind &&
           profile.tag(j + 1).channel == tag.channel)
      ++j;
    std::string name;
    if (tag.kind == BandKind::pump)
      name = "pump";
    else
      name = "channel." + std::to_string(tag.channel) +
             (tag.kind == BandKind::signal ? ".signal" : ".idler");
    std::snprintf(buf, sizeof buf, "%s.lo_thz = %.17g\n%s.hi_thz = %.17g\n",
                  name.c_str(), profile.axis()[i], name.c_str(), profile.axis()[j]);
    out << buf;
    i = j + 1;
  }
  finish_out(out, path);
}

std::map<std::string, double> read_band_map(const std::string& path) {
  std::map<std::string, double> bands;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string line = lines[n];
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream token(line);
    std::string key, eq, value;
    if (!(token >> key)) continue;
    if (!(token >> eq >> value) || eq != "=" || (token >> eq))
      throw std::runtime_error(path + " line " + std::to_string(n + 1) +
                               ": expected key = value");
    bands[key] = parse_field(value, path, static_cast<int>(n + 1));
  }
  return bands;
}

void write_jsf_csv(const JSF& jsf, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "signal_THz,idler_THz,re,im,abs2\n";
  char buf[160];
  for (int i = 0; i < jsf.signal_axis.size(); ++i)
    for (int j = 0; j < jsf.idler_axis.size(); ++j) {
      const std::complex<double> amp = jsf.amplitude(i, j);
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n",
                    jsf.signal_axis[i], jsf.idler_axis[j], amp.real(), amp.imag(),
                    std::norm(amp));
      out << buf;
    }
  finish_out(out, path);
}

namespace {

FrequencyAxis infer_axis(const std::vector<double>& values, const std::string& path,
                         const char* which) {
  const int count = static_cast<int>(values.size());
  if (count < 2)
    throw std::runtime_error(path + ": need at least 2 " + which + " samples");
  const double step = (values.back() - values.front()) / (count - 1);
  if (!(step > 0.0))
    throw std::runtime_error(path + ": " + which + " axis is not ascending");
  for (int k = 0; k < count; ++k)
    if (std::abs(values[k] - (values.front() + k * step)) >
        1e-9 * std::max(1.0, std::abs(values[k])))
      throw std::runtime_error(path + ": " + which + " axis is not uniform");
  return FrequencyAxis(values.front(), step, count);
}

}  // namespace

JSF read_jsf_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0] != "signal_THz,idler_THz,re,im,abs2")
    throw std::runtime_error(path + ": missing header");

  std::vector<double> s, i_, re, im;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::vector<std::string> fields = split_csv(lines[n]);
    if (fields.size() != 5)
      throw std::runtime_error(path + " line " + std::to_string(n + 1) +
                               ": expected 5 fields");
    const int line = static_cast<int>(n + 1);
    s.push_back(parse_field(fields[0], path, line));
    i_.push_back(parse_field(fields[1], path, line));
    re.push_back(parse_field(fields[2], path, line));
    im.push_back(parse_field(fields[3], path, line));
  }
  if (s.empty()) throw std::runtime_error(path + ": no samples");

  // Idler runs fastest: the first block shares one signal value.
  std::vector<double> idler_values;
  for (std::size_t k = 0; k < s.size() && s[k] == s[0]; ++k)
    idler_values.push_back(i_[k]);
  const std::size_t ni = idler_values.size();
  if (ni == 0 || s.size() % ni != 0)
    throw std::runtime_error(path + ": inconsistent row blocks");
  std::vector<double> signal_values;
  for (std::size_t k = 0; k < s.size(); k += ni) signal_values.push_back(s[k]);

  JSF jsf{infer_axis(signal_values, path, "signal"),
          infer_axis(idler_values, path, "idler"),
          Eigen::MatrixXcd(signal_values.size(), ni)};
  for (std::size_t k = 0; k < s.size(); ++k)
    jsf.amplitude(static_cast<Eigen::Index>(k / ni),
                  static_cast<Eigen::Index>(k % ni)) = {re[k], im[k]};
  return jsf;
}

void write_scan_csv(const ScanResult& result, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "signal_nm,idler_nm,true_coincidence,accidental\n";
  char buf[120];
  for (std::size_t a = 0; a < result.signal_nm.size(); ++a)
    for (std::size_t b = 0; b < result.idler_nm.size(); ++b) {
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", result.signal_nm[a],
                    result.idler_nm[b],
                    result.true_counts(static_cast<Eigen::Index>(a),
                                       static_cast<Eigen::Index>(b)),
                    result.accidental_counts(static_cast<Eigen::Index>(a),
                                             static_cast<Eigen::Index>(b)));
      out << buf;
    }
  finish_out(out, path);
}

void write_analysis_report(const AnalysisReport& report, const std::string& path) {
  std::ofstream out = open_out(path);
  char buf[200];
  // One line per snprintf: the whole header block does not fit in buf once
  // every value carries 12 significant digits.
  auto line = [&](const char* key, double value) {
    std::snprintf(buf, sizeof buf, "%s = %.12g\n", key, value);
    out << buf;
  };
  line("schmidt_number_full", report.schmidt_number_full);
  line("schmidt_number_windowed", report.schmidt_number_windowed);
  line("pearson_r_full", report.pearson_full);
  line("pearson_r_windowed", report.pearson_windowed);
  line("total_weight", report.total_weight);
  out << "window_applied = " << (report.windowed ? "true" : "false") << "\n";

  out << "\n# eta  g2_signal  heralding\n";
  for (const AnalysisEtaRow& row : report.eta_rows) {
    std::snprintf(buf, sizeof buf, "%.12g  %.12g  %.12g\n", row.eta, row.g2,
                  row.heralding);
    out << buf;
  }

  out << "\n# channel  peak_signal_THz  peak_idler_THz  schmidt_number  "
         "weight_re  weight_im  weight_abs  support_weight\n";
  for (const IslandReport& island : report.channels.islands) {
    std::snprintf(buf, sizeof buf,
                  "%d  %.12g  %.12g  %.12g  %.12g  %.12g  %.12g  %.12g\n",
                  island.channel, island.peak_signal_thz, island.peak_idler_thz,
                  island.schmidt_number, island.weight.real(), island.weight.imag(),
                  std::abs(island.weight), island.support_weight);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "off_support_weight = %.12g\n",
                report.channels.off_support_weight);
  out << buf;
  finish_out(out, path);
}

}  // namespace nlipair
