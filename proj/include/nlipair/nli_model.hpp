#pragma once

#include <Eigen/Dense>
#include <complex>

#include "nlipair/phase_profile.hpp"
#include "nlipair/units.hpp"

namespace nlipair {

enum class Model { simplified, full };

// Joint spectral function on a rectangular grid; amplitude(i, j) belongs to
// (signal_axis[i], idler_axis[j]). Arbitrary units, peak-normalized at the
// single-piece stage.
struct JSF {
  FrequencyAxis signal_axis;
  FrequencyAxis idler_axis;
  Eigen::MatrixXcd amplitude;
};

struct InterferenceMap {
  FrequencyAxis signal_axis;
  FrequencyAxis idler_axis;
  Eigen::MatrixXcd value;
};

// Relative weights of the four lowest-order outcomes after both photons of a
// stage-one pair pass a transmission-eta path and the second stage adds its
// coherent copy: pair amplitude doubles, singles keep the stage-one spectrum.
struct TwoPhotonStateWeights {
  double vacuum = 0.0;
  double signal_only = 0.0;
  double idler_only = 0.0;
  double pair = 0.0;
};

// Delta_k = 2 k((ws+wi)/2) - k(ws) - k(wi) - 2 gamma P_p, in 1/m. Only the
// beta2..beta4 Taylor terms survive the second difference.
double wavevector_mismatch(double omega_s_thz, double omega_i_thz,
                           const MediumSpec& medium, const PumpSpec& pump);

// Single-pass pair amplitude. Simplified: the pump energy envelope
// exp(-(ws+wi-2wp0)^2 / (4 sigma_p^2)). Full: times sinc(dkL/2) e^{i dkL/2}.
// Normalized so max |F_SP| = 1 on the grid.
JSF single_piece_jsf(const FrequencyAxis& signal_axis, const FrequencyAxis& idler_axis,
                     const PumpSpec& pump, const MediumSpec& medium,
                     Model model = Model::simplified, int threads = 1);

// Two-stage interference factor. Simplified: cos(dphi/2). Full:
// cos((dkL + dphi)/2) e^{i dphi/2}. |I| <= 1 either way.
InterferenceMap interference_map(const FrequencyAxis& signal_axis,
                                 const FrequencyAxis& idler_axis,
                                 const PhaseProfile& profile, const MediumSpec& medium,
                                 const PumpSpec& pump, Model model = Model::simplified,
                                 int threads = 1);

// F_NLI = F_SP * I, entrywise on identical axes.
JSF nli_jsf(const JSF& single_piece, const InterferenceMap& interference);

// Rectangle-rule integral of |amplitude|^2 over the grid.
double squared_norm(const JSF& jsf);

// vacuum : signal_only : idler_only : pair =
// (1-eta)^2 G^2 Nsp : eta(1-eta) G^2 Nsp : eta(1-eta) G^2 Nsp : 4 eta^2 G^2 Nnli
// with Nx the squared norms above. signal_only and idler_only are one value
// computed once, so their equality is exact.
TwoPhotonStateWeights lossy_state_weights(const JSF& single_piece, const JSF& nli,
                                          double eta, double gain);

}  // namespace nlipair
