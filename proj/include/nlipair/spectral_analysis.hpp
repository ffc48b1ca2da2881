#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "nlipair/nli_model.hpp"

namespace nlipair {

// Closed frequency interval, THz.
struct Window {
  double lo_thz = 0.0;
  double hi_thz = 0.0;
};

// Optional rectangular spectral windows on the two grid axes; samples outside
// are zeroed before the analysis.
struct BandFilter {
  std::optional<Window> signal;
  std::optional<Window> idler;
};

// Schmidt data of a JSF under rectangle-rule quadrature. lambdas are the
// normalized squared singular values (sum 1); modes are orthonormal under
// sum f_m(w) conj(f_n(w)) dw = delta_mn. The idler modes absorb the SVD
// conjugation, so with U = signal_modes, V = idler_modes the amplitude is the
// plain product amplitude(i,j) = sum_n sqrt(lambda_n * total_weight) U(i,n) V(j,n).
struct SchmidtResult {
  std::vector<double> lambdas;
  double schmidt_number = 0.0;
  double total_weight = 0.0;
  Eigen::MatrixXcd signal_modes;  // column n = mode n on the signal axis
  Eigen::MatrixXcd idler_modes;
};

SchmidtResult schmidt_decompose(const JSF& jsf, bool keep_modes = true);

// Copy of the JSF with samples outside the windows zeroed (axes unchanged).
JSF apply_band_filter(const JSF& jsf, const BandFilter& filter);

// Unnormalized signal-side reduced state of the lossy two-stage source,
// Gamma_s = eta(1-eta) rho_SP + 4 eta^2 rho_NLI, where rho_X is the signal
// partial trace of F_X under rectangle-rule quadrature (windows applied
// first). Hermitian PSD; its eigenvalues are the thermal mode weights of the
// signal arm.
Eigen::MatrixXcd reduced_signal_state(const JSF& single_piece, const JSF& nli,
                                      double eta, const BandFilter& filter = {});

// Signal-arm normalized second-order correlation of the lossy two-stage state:
// g2 = 1 + tr(Gamma_s^2)/tr(Gamma_s)^2. At eta = 1 this reduces to 1 + 1/K of
// the windowed F_NLI.
double g2_signal(const JSF& single_piece, const JSF& nli, double eta,
                 const BandFilter& filter = {});

// pair / (pair + signal_only); undefined (throws) when both weights vanish.
double heralding_efficiency(const TwoPhotonStateWeights& weights);

// Pearson correlation of (omega_s, omega_i) under the density |amplitude|^2.
double pearson_correlation(const JSF& jsf, const BandFilter& filter = {});

struct IslandReport {
  int channel = -1;
  double peak_signal_thz = 0.0;
  double peak_idler_thz = 0.0;
  double schmidt_number = 0.0;
  std::complex<double> weight;  // r_k, sum |r_k|^2 = 1 over the supports
  double support_weight = 0.0;  // integral of |F|^2 over this island's support
};

struct ChannelDecomposition {
  std::vector<IslandReport> islands;
  double support_weight = 0.0;    // sum over islands
  double off_support_weight = 0.0;  // JSF mass outside every channel support
};

// Cuts the JSF into per-channel support rectangles (signal/idler centers +-
// band half width). Island weights r_k are normalized over the union of the
// supports, so sum |r_k|^2 = 1 exactly; mass outside the supports is reported
// separately.
ChannelDecomposition decompose_channels(const JSF& jsf,
                                        const std::vector<ChannelSpec>& channels);

}  // namespace nlipair
