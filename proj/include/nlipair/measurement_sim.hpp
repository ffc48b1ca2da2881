#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "nlipair/spectral_analysis.hpp"

namespace nlipair {

// Deterministic 64-bit generator (splitmix64). Chosen over the standard
// <random> engines/distributions because the distribution algorithms there
// are implementation-defined: the same seed must reproduce the same counts on
// every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in the open interval (0, 1); never returns exactly 0 or 1.
  double uniform01();

 private:
  std::uint64_t state_;
};

// Decorrelated per-stream seed so independent draws (one per scan point) can
// be made in any order, or in parallel, with identical results.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Exact Poisson sampler (multiplicative Knuth walk, split into chunks of mean
// <= 30 to avoid exp() underflow; Poisson additivity makes the split exact).
std::uint64_t poisson_draw(SplitMix64& rng, double mean);

// Bose-Einstein (single-mode thermal) sampler by CDF inversion:
// P(n) = mean^n / (1 + mean)^(n + 1).
std::uint64_t thermal_draw(SplitMix64& rng, double mean);

// Two-axis coincidence scan over a pair of tunable bandpass filters, mimicking
// a dual monochromator measurement of the source.
struct ScanConfig {
  double signal_start_nm = 0.0;
  double signal_stop_nm = 0.0;
  double idler_start_nm = 0.0;
  double idler_stop_nm = 0.0;
  double step_nm = 0.0;          // filter center spacing, both axes
  double filter_width_nm = 0.0;  // full passband width
  double pulses_per_point = 0.0; // dwell, in pump pulses
};

struct ScanResult {
  std::vector<double> signal_nm;  // filter centers
  std::vector<double> idler_nm;
  // (signal index, idler index); Poisson counts, or exact means if noiseless.
  Eigen::MatrixXd true_counts;
  Eigen::MatrixXd accidental_counts;
};

// Simulates the scan on top of the two model spectra. True coincidences come
// from the pair term 4 eta^2 G^2 |F_NLI|^2 integrated over both passbands;
// accidentals are the singles product singles_s * singles_i / pulses, with the
// singles fed by both the pair term and the unheralded single-stage background
// eta(1-eta) G^2 |F_SP|^2. Passband membership is half-open in wavelength,
// [center - w/2, center + w/2), so adjacent step-matched filters tile exactly.
ScanResult joint_spectral_scan(const JSF& single_piece, const JSF& nli, double eta,
                               double gain, const ScanConfig& cfg,
                               std::uint64_t seed, bool noiseless = false);

// Beam-split intensity autocorrelation of the filtered signal arm.
struct HbtConfig {
  double mean_photons = 0.0;        // total signal-arm mean photon number per pulse
  double detector_efficiency = 1.0; // applied per photon before the splitter
  std::uint64_t pulses = 0;
};

struct HbtResult {
  double g2 = 0.0;              // same-pulse / adjacent-pulse product ratio
  double g2_std_error = 0.0;    // batch-means estimate of the ratio's 1-sigma error
  double same_pulse_mean = 0.0; // <n_A n_B>
  double adjacent_pulse_mean = 0.0;
  double mean_rate_a = 0.0;     // detected photons per pulse, arm A
  double mean_rate_b = 0.0;
  int modes = 0;                // thermal modes retained from the reduced state
};

// Monte Carlo HBT run: diagonalizes the signal-arm reduced state, draws an
// independent thermal photon number per eigenmode per pulse (mode means scaled
// to cfg.mean_photons total), thins by the detector efficiency, routes each
// surviving photon through a balanced splitter, and forms photon-number
// products. Using number products (not click coincidences) keeps the estimator
// unbiased at any flux; same-pulse over adjacent-pulse products converges to
// the state's g2 = 1 + sum lambda^2 / (sum lambda)^2.
HbtResult hbt_g2_sim(const JSF& single_piece, const JSF& nli, double eta,
                     const HbtConfig& cfg, std::uint64_t seed,
                     const BandFilter& filter = {});

}  // namespace nlipair
