#include "nlipair/slm_export.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlipair {

namespace {

void validate(const SLMCalibration& calib) {
  if (calib.columns <= 0 || calib.rows <= 0)
    throw std::invalid_argument("panel must have positive dimensions");
  if (calib.nm_per_column == 0.0)
    throw std::invalid_argument("panel wavelength slope must be nonzero");
  if (!(calib.phase_full_scale > 0.0))
    throw std::invalid_argument("phase full scale must be positive");
  const double lam_first = calib.wavelength_at_column0_nm;
  const double lam_last =
      calib.wavelength_at_column0_nm + (calib.columns - 1) * calib.nm_per_column;
  if (!(lam_first > 0.0) || !(lam_last > 0.0))
    throw std::invalid_argument("panel wavelength span must stay positive");
}

}  // namespace

GrayPattern phase_to_pattern(const PhaseProfile& profile, const SLMCalibration& calib) {
  validate(calib);

  const double lam_first = calib.wavelength_at_column0_nm;
  const double lam_last =
      calib.wavelength_at_column0_nm + (calib.columns - 1) * calib.nm_per_column;
  const double nu_lo = wavelength_to_frequency(std::max(lam_first, lam_last));
  const double nu_hi = wavelength_to_frequency(std::min(lam_first, lam_last));

  // Everything the profile actually programs (pump and channel bands) must be
  // addressable by some column; the flat fill in between may hang over.
  const FrequencyAxis& axis = profile.axis();
  for (int i = 0; i < profile.size(); ++i) {
    if (profile.tag(i).kind == BandKind::fill) continue;
    if (axis[i] < nu_lo || axis[i] > nu_hi)
      throw std::invalid_argument(
          "programmed band falls outside the panel's wavelength span");
  }

  GrayPattern out;
  out.columns = calib.columns;
  out.rows = calib.rows;
  out.pixels.resize(static_cast<std::size_t>(calib.columns) * calib.rows);

  for (int c = 0; c < calib.columns; ++c) {
    const double lam = calib.wavelength_at_column0_nm + c * calib.nm_per_column;
    const double nu = wavelength_to_frequency(lam);
    double phi;
    if (nu < axis.front())
      phi = profile[0];
    else if (nu > axis.back())
      phi = profile[profile.size() - 1];
    else
      phi = profile.phase_at(nu);
    double wrapped = phi - calib.phase_full_scale *
                               std::floor(phi / calib.phase_full_scale);
    // nearbyint: round half to even, so quantization ties carry no bias
    const long level =
        static_cast<long>(std::nearbyint(wrapped / calib.phase_full_scale * 256.0));
    out.pixels[static_cast<std::size_t>(c)] =
        static_cast<std::uint8_t>(level & 0xFF);  // level 256 wraps to 0
  }
  for (int r = 1; r < calib.rows; ++r)
    std::copy(out.pixels.begin(), out.pixels.begin() + calib.columns,
              out.pixels.begin() + static_cast<std::size_t>(r) * calib.columns);
  return out;
}

std::vector<double> pattern_to_phase(const GrayPattern& pattern,
                                     const SLMCalibration& calib) {
  if (!(calib.phase_full_scale > 0.0))
    throw std::invalid_argument("phase full scale must be positive");
  if (pattern.columns <= 0 || pattern.rows <= 0 ||
      pattern.pixels.size() !=
          static_cast<std::size_t>(pattern.columns) * pattern.rows)
    throw std::invalid_argument("malformed pattern");
  std::vector<double> phase(pattern.columns);
  for (int c = 0; c < pattern.columns; ++c)
    phase[c] = pattern.pixels[static_cast<std::size_t>(c)] / 256.0 *
               calib.phase_full_scale;
  return phase;
}

void export_pgm(const GrayPattern& pattern, const std::string& path) {
  if (pattern.columns <= 0 || pattern.rows <= 0 ||
      pattern.pixels.size() !=
          static_cast<std::size_t>(pattern.columns) * pattern.rows)
    throw std::invalid_argument("malformed pattern");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "P5\n" << pattern.columns << ' ' << pattern.rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(pattern.pixels.data()),
            static_cast<std::streamsize>(pattern.pixels.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

namespace {

class PgmScanner {
 public:
  explicit PgmScanner(const std::string& data) : data_(data) {}

  std::string token() {
    skip();
    if (pos_ >= data_.size()) throw std::runtime_error("truncated header");
    std::size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_])))
      ++pos_;
    return data_.substr(start, pos_ - start);
  }

  // The single whitespace byte that separates maxval from the pixel payload.
  void consume_one_space() {
    if (pos_ >= data_.size() ||
        !std::isspace(static_cast<unsigned char>(data_[pos_])))
      throw std::runtime_error("missing separator before pixel data");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

 private:
  void skip() {
    while (pos_ < data_.size()) {
      const char ch = data_[pos_];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else if (ch == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& data_;
  std::size_t pos_ = 0;
};

int parse_dim(const std::string& tok, const char* what) {
  if (tok.empty()) throw std::runtime_error(std::string("empty ") + what);
  long v = 0;
  for (char ch : tok) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw std::runtime_error(std::string("non-numeric ") + what + ": " + tok);
    v = v * 10 + (ch - '0');
    if (v > 100000000L) throw std::runtime_error(std::string(what) + " out of range");
  }
  if (v == 0) throw std::runtime_error(std::string(what) + " must be positive");
  return static_cast<int>(v);
}

}  // namespace

GrayPattern import_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();

  PgmScanner scan(data);
  if (scan.token() != "P5") throw std::runtime_error(path + ": not a binary PGM");
  const int columns = parse_dim(scan.token(), "width");
  const int rows = parse_dim(scan.token(), "height");
  if (scan.token() != "255")
    throw std::runtime_error(path + ": unsupported maxval (need 255)");
  scan.consume_one_space();

  const std::size_t need = static_cast<std::size_t>(columns) * rows;
  const std::size_t have = data.size() - scan.pos();
  if (have < need) throw std::runtime_error(path + ": pixel data truncated");
  if (have > need) throw std::runtime_error(path + ": trailing bytes after pixel data");

  GrayPattern out;
  out.columns = columns;
  out.rows = rows;
  out.pixels.assign(data.begin() + static_cast<std::ptrdiff_t>(scan.pos()), data.end());
  return out;
}

}  // namespace nlipair
