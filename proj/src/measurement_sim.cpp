#include "nlipair/measurement_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nlipair/units.hpp"

namespace nlipair {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
  // 53-bit mantissa, offset by half an ulp: range (0, 1) exclusive.
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
  g.next();
  return g.next();
}

namespace {

// Multiplicative Knuth walk; exact for small means, O(mean) uniforms.
std::uint64_t poisson_knuth(SplitMix64& rng, double mean) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.uniform01();
  } while (p > limit);
  return k - 1;
}

}  // namespace

std::uint64_t poisson_draw(SplitMix64& rng, double mean) {
  if (!std::isfinite(mean) || mean < 0.0)
    throw std::invalid_argument("poisson mean must be finite and nonnegative");
  std::uint64_t total = 0;
  while (mean > 30.0) {
    total += poisson_knuth(rng, 30.0);
    mean -= 30.0;
  }
  return total + poisson_knuth(rng, mean);
}

std::uint64_t thermal_draw(SplitMix64& rng, double mean) {
  if (!std::isfinite(mean) || mean < 0.0)
    throw std::invalid_argument("thermal mean must be finite and nonnegative");
  if (mean == 0.0) return 0;
  const double u = rng.uniform01();
  // CDF(n) = 1 - (mean/(1+mean))^(n+1); both logs are negative.
  return static_cast<std::uint64_t>(std::log(u) / std::log(mean / (1.0 + mean)));
}

namespace {

int scan_axis_points(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("scan step must be positive");
  if (stop < start) throw std::invalid_argument("scan stop is below scan start");
  return static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
}

void check_coverage(const FrequencyAxis& axis, double start_nm, double stop_nm,
                    double width_nm, const char* which) {
  // Axis samples are ascending in frequency, so descending in wavelength.
  const double lam_min = frequency_to_wavelength(axis.back());
  const double lam_max = frequency_to_wavelength(axis.front());
  if (start_nm - width_nm / 2 < lam_min || stop_nm + width_nm / 2 > lam_max)
    throw std::invalid_argument(std::string(which) +
                                " scan passband extends outside the modeled grid");
}

}  // namespace

ScanResult joint_spectral_scan(const JSF& single_piece, const JSF& nli, double eta,
                               double gain, const ScanConfig& cfg,
                               std::uint64_t seed, bool noiseless) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("scan needs eta in [0, 1]");
  if (!(gain > 0.0)) throw std::invalid_argument("scan needs positive gain");
  if (!(cfg.filter_width_nm > 0.0))
    throw std::invalid_argument("scan filter width must be positive");
  if (!(cfg.pulses_per_point > 0.0) || !std::isfinite(cfg.pulses_per_point))
    throw std::invalid_argument("scan dwell (pulses per point) must be positive");
  if (single_piece.signal_axis.size() != nli.signal_axis.size() ||
      single_piece.idler_axis.size() != nli.idler_axis.size())
    throw std::invalid_argument("scan: model grids do not match");

  const int n_s = scan_axis_points(cfg.signal_start_nm, cfg.signal_stop_nm, cfg.step_nm);
  const int n_i = scan_axis_points(cfg.idler_start_nm, cfg.idler_stop_nm, cfg.step_nm);
  check_coverage(nli.signal_axis, cfg.signal_start_nm, cfg.signal_stop_nm,
                 cfg.filter_width_nm, "signal");
  check_coverage(nli.idler_axis, cfg.idler_start_nm, cfg.idler_stop_nm,
                 cfg.filter_width_nm, "idler");

  ScanResult out;
  out.signal_nm.resize(n_s);
  out.idler_nm.resize(n_i);
  for (int a = 0; a < n_s; ++a) out.signal_nm[a] = cfg.signal_start_nm + a * cfg.step_nm;
  for (int b = 0; b < n_i; ++b) out.idler_nm[b] = cfg.idler_start_nm + b * cfg.step_nm;

  const FrequencyAxis& sax = nli.signal_axis;
  const FrequencyAxis& iax = nli.idler_axis;
  const double ds = std::abs(sax.step());
  const double di = std::abs(iax.step());
  const double g2w = gain * gain;

  // Per-sample wavelengths once; membership is half-open, [c - w/2, c + w/2).
  std::vector<double> lam_s(sax.size()), lam_i(iax.size());
  for (int i = 0; i < sax.size(); ++i) lam_s[i] = frequency_to_wavelength(sax[i]);
  for (int j = 0; j < iax.size(); ++j) lam_i[j] = frequency_to_wavelength(iax[j]);
  auto members = [&](const std::vector<double>& lam, double center, double width) {
    std::vector<int> idx;
    for (int k = 0; k < static_cast<int>(lam.size()); ++k)
      if (lam[k] >= center - width / 2 && lam[k] < center + width / 2) idx.push_back(k);
    return idx;
  };
  std::vector<std::vector<int>> sig_members(n_s), idl_members(n_i);
  for (int a = 0; a < n_s; ++a)
    sig_members[a] = members(lam_s, out.signal_nm[a], cfg.filter_width_nm);
  for (int b = 0; b < n_i; ++b)
    idl_members[b] = members(lam_i, out.idler_nm[b], cfg.filter_width_nm);

  // Marginal densities feeding the singles: pairs plus the unheralded
  // single-stage background that the interferometer no longer cancels.
  Eigen::VectorXd row_rate(sax.size()), col_rate(iax.size());
  for (int i = 0; i < sax.size(); ++i) {
    double pair = 0.0, bg = 0.0;
    for (int j = 0; j < iax.size(); ++j) {
      pair += std::norm(nli.amplitude(i, j));
      bg += std::norm(single_piece.amplitude(i, j));
    }
    row_rate(i) = (4.0 * eta * eta * g2w * pair + eta * (1.0 - eta) * g2w * bg) * di;
  }
  for (int j = 0; j < iax.size(); ++j) {
    double pair = 0.0, bg = 0.0;
    for (int i = 0; i < sax.size(); ++i) {
      pair += std::norm(nli.amplitude(i, j));
      bg += std::norm(single_piece.amplitude(i, j));
    }
    col_rate(j) = (4.0 * eta * eta * g2w * pair + eta * (1.0 - eta) * g2w * bg) * ds;
  }

  std::vector<double> singles_s(n_s, 0.0), singles_i(n_i, 0.0);
  for (int a = 0; a < n_s; ++a)
    for (int i : sig_members[a]) singles_s[a] += row_rate(i) * ds;
  for (int b = 0; b < n_i; ++b)
    for (int j : idl_members[b]) singles_i[b] += col_rate(j) * di;

  out.true_counts.resize(n_s, n_i);
  out.accidental_counts.resize(n_s, n_i);
  const double pulses = cfg.pulses_per_point;
  for (int a = 0; a < n_s; ++a) {
    for (int b = 0; b < n_i; ++b) {
      double pair = 0.0;
      for (int i : sig_members[a])
        for (int j : idl_members[b]) pair += std::norm(nli.amplitude(i, j));
      const double true_mean = pulses * 4.0 * eta * eta * g2w * pair * ds * di;
      const double acc_mean = pulses * singles_s[a] * singles_i[b];
      if (noiseless) {
        out.true_counts(a, b) = true_mean;
        out.accidental_counts(a, b) = acc_mean;
      } else {
        const std::uint64_t idx = static_cast<std::uint64_t>(a) * n_i + b;
        SplitMix64 rt(derive_seed(seed, 2 * idx));
        SplitMix64 ra(derive_seed(seed, 2 * idx + 1));
        out.true_counts(a, b) = static_cast<double>(poisson_draw(rt, true_mean));
        out.accidental_counts(a, b) = static_cast<double>(poisson_draw(ra, acc_mean));
      }
    }
  }
  return out;
}

HbtResult hbt_g2_sim(const JSF& single_piece, const JSF& nli, double eta,
                     const HbtConfig& cfg, std::uint64_t seed,
                     const BandFilter& filter) {
  if (!std::isfinite(cfg.mean_photons) || !(cfg.mean_photons > 0.0))
    throw std::invalid_argument("hbt mean photon number must be positive");
  if (cfg.mean_photons >= 1.0)
    throw std::invalid_argument(
        "gain too high: the thermal-mode picture needs a mean photon number "
        "below 1 per pulse, got " + std::to_string(cfg.mean_photons));
  if (!(cfg.detector_efficiency > 0.0 && cfg.detector_efficiency <= 1.0))
    throw std::invalid_argument("hbt detector efficiency must lie in (0, 1]");
  if (cfg.pulses < 2)
    throw std::invalid_argument("hbt needs at least two pulses");

  const Eigen::MatrixXcd gamma = reduced_signal_state(single_piece, nli, eta, filter);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gamma, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const double emax = ev(ev.size() - 1);
  if (!(emax > 0.0))
    throw std::invalid_argument("hbt: filtered state carries no weight");

  std::vector<double> mode_means;
  double total = 0.0;
  for (Eigen::Index m = ev.size() - 1; m >= 0; --m) {
    if (ev(m) < 1e-12 * emax) break;
    mode_means.push_back(ev(m));
    total += ev(m);
  }
  for (double& mu : mode_means) mu *= cfg.mean_photons / total;

  SplitMix64 rng(derive_seed(seed, 0));
  double same = 0.0, adjacent = 0.0, sum_a = 0.0, sum_b = 0.0;
  // Batch means of the ratio estimate its statistical error without a second
  // pass; cross-batch adjacent terms are simply left out of the batches.
  const std::uint64_t batches =
      std::min<std::uint64_t>(100, std::max<std::uint64_t>(2, cfg.pulses / 100));
  const std::uint64_t batch_len = cfg.pulses / batches;
  std::vector<double> batch_same(batches, 0.0), batch_adjacent(batches, 0.0);
  std::uint64_t prev_b = 0;
  for (std::uint64_t p = 0; p < cfg.pulses; ++p) {
    std::uint64_t n_a = 0, n_b = 0;
    for (double mu : mode_means) {
      const std::uint64_t n = thermal_draw(rng, mu);
      for (std::uint64_t q = 0; q < n; ++q) {
        if (rng.uniform01() >= cfg.detector_efficiency) continue;
        if (rng.uniform01() < 0.5)
          ++n_a;
        else
          ++n_b;
      }
    }
    sum_a += static_cast<double>(n_a);
    sum_b += static_cast<double>(n_b);
    const double product = static_cast<double>(n_a) * static_cast<double>(n_b);
    same += product;
    const std::uint64_t batch = std::min(p / batch_len, batches - 1);
    batch_same[batch] += product;
    if (p > 0) {
      const double cross = static_cast<double>(n_a) * static_cast<double>(prev_b);
      adjacent += cross;
      if (p % batch_len != 0 || batch == batches - 1)
        batch_adjacent[batch] += cross;
    }
    prev_b = n_b;
  }

  HbtResult out;
  out.same_pulse_mean = same / static_cast<double>(cfg.pulses);
  out.adjacent_pulse_mean = adjacent / static_cast<double>(cfg.pulses - 1);
  if (!(out.adjacent_pulse_mean > 0.0))
    throw std::runtime_error("hbt: no adjacent-pulse products; raise the flux or dwell");
  out.g2 = out.same_pulse_mean / out.adjacent_pulse_mean;

  std::vector<double> batch_g2;
  for (std::uint64_t b = 0; b < batches; ++b)
    if (batch_adjacent[b] > 0.0) batch_g2.push_back(batch_same[b] / batch_adjacent[b]);
  if (batch_g2.size() >= 2) {
    double mean = 0.0;
    for (double v : batch_g2) mean += v;
    mean /= static_cast<double>(batch_g2.size());
    double var = 0.0;
    for (double v : batch_g2) var += (v - mean) * (v - mean);
    var /= static_cast<double>(batch_g2.size() - 1);
    out.g2_std_error = std::sqrt(var / static_cast<double>(batch_g2.size()));
  }

  out.mean_rate_a = sum_a / static_cast<double>(cfg.pulses);
  out.mean_rate_b = sum_b / static_cast<double>(cfg.pulses);
  out.modes = static_cast<int>(mode_means.size());
  return out;
}

}  // namespace nlipair
