#include "nlipair/nli_model.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace nlipair {

namespace {

using cd = std::complex<double>;
const cd I_unit(0.0, 1.0);

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Rows are independent; split [0, rows) into contiguous chunks. Each worker
// writes its own rows only, so the result is bit-identical for any thread count.
template <typename Fn>
void for_each_row(int rows, int threads, Fn&& fn) {
  if (threads <= 1 || rows < 2 * threads) {
    for (int i = 0; i < rows; ++i) fn(i);
    return;
  }
  const int n = std::min(threads, rows);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int t = 0; t < n; ++t) {
    const int lo = static_cast<int>(static_cast<long long>(rows) * t / n);
    const int hi = static_cast<int>(static_cast<long long>(rows) * (t + 1) / n);
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

void require_same_axes(const FrequencyAxis& a, const FrequencyAxis& b, const char* what) {
  if (a.start() != b.start() || a.step() != b.step() || a.size() != b.size())
    throw std::invalid_argument(std::string(what) + ": axes do not match");
}

}  // namespace

double wavevector_mismatch(double omega_s_thz, double omega_i_thz,
                           const MediumSpec& medium, const PumpSpec& pump) {
  const double mid = (omega_s_thz + omega_i_thz) / 2.0;
  const double linear = 2.0 * dispersive_wavevector(mid, medium) -
                        dispersive_wavevector(omega_s_thz, medium) -
                        dispersive_wavevector(omega_i_thz, medium);
  const double nonlinear = 2.0 * medium.gamma_per_w_km / 1000.0 * pump.peak_power_w;
  return linear - nonlinear;
}

JSF single_piece_jsf(const FrequencyAxis& signal_axis, const FrequencyAxis& idler_axis,
                     const PumpSpec& pump, const MediumSpec& medium, Model model,
                     int threads) {
  validate(pump);
  if (model == Model::full) validate(medium);
  const int ns = signal_axis.size();
  const int ni = idler_axis.size();
  Eigen::MatrixXcd amp(ns, ni);
  const double inv4s2 = 1.0 / (4.0 * pump.sigma_thz * pump.sigma_thz);
  const double two_wp = 2.0 * pump.center_thz;

  for_each_row(ns, threads, [&](int i) {
    const double ws = signal_axis[i];
    for (int j = 0; j < ni; ++j) {
      const double wi = idler_axis[j];
      const double d = ws + wi - two_wp;
      const double envelope = std::exp(-d * d * inv4s2);
      if (model == Model::simplified) {
        amp(i, j) = envelope;
      } else {
        const double dkl = wavevector_mismatch(ws, wi, medium, pump) * medium.length_m;
        amp(i, j) = envelope * sinc(dkl / 2.0) * std::exp(I_unit * (dkl / 2.0));
      }
    }
  });

  const double peak = amp.cwiseAbs().maxCoeff();
  if (peak > 0.0) amp /= peak;
  return JSF{signal_axis, idler_axis, std::move(amp)};
}

InterferenceMap interference_map(const FrequencyAxis& signal_axis,
                                 const FrequencyAxis& idler_axis,
                                 const PhaseProfile& profile, const MediumSpec& medium,
                                 const PumpSpec& pump, Model model, int threads) {
  if (model == Model::full) validate(medium);
  // The profile has to cover both grid axes; midpoints then land inside by
  // convexity. Checking up front gives one clear error instead of a per-sample
  // throw from a worker thread.
  const double lo = std::min(signal_axis.front(), idler_axis.front());
  const double hi = std::max(signal_axis.back(), idler_axis.back());
  if (lo < profile.axis().front() || hi > profile.axis().back())
    throw std::invalid_argument("phase profile does not cover the JSF grid");

  const int ns = signal_axis.size();
  const int ni = idler_axis.size();
  Eigen::MatrixXcd val(ns, ni);

  for_each_row(ns, threads, [&](int i) {
    const double ws = signal_axis[i];
    const double phi_s = profile.phase_at(ws);
    for (int j = 0; j < ni; ++j) {
      const double wi = idler_axis[j];
      const double dphi = 2.0 * profile.phase_at((ws + wi) / 2.0) - phi_s -
                          profile.phase_at(wi);
      if (model == Model::simplified) {
        val(i, j) = std::cos(dphi / 2.0);
      } else {
        const double dkl = wavevector_mismatch(ws, wi, medium, pump) * medium.length_m;
        val(i, j) = std::cos((dkl + dphi) / 2.0) * std::exp(I_unit * (dphi / 2.0));
      }
    }
  });
  return InterferenceMap{signal_axis, idler_axis, std::move(val)};
}

JSF nli_jsf(const JSF& single_piece, const InterferenceMap& interference) {
  require_same_axes(single_piece.signal_axis, interference.signal_axis, "nli_jsf signal");
  require_same_axes(single_piece.idler_axis, interference.idler_axis, "nli_jsf idler");
  if (single_piece.amplitude.rows() != interference.value.rows() ||
      single_piece.amplitude.cols() != interference.value.cols())
    throw std::invalid_argument("nli_jsf: matrix shapes do not match");
  return JSF{single_piece.signal_axis, single_piece.idler_axis,
             single_piece.amplitude.cwiseProduct(interference.value)};
}

double squared_norm(const JSF& jsf) {
  return jsf.amplitude.squaredNorm() * std::abs(jsf.signal_axis.step()) *
         std::abs(jsf.idler_axis.step());
}

TwoPhotonStateWeights lossy_state_weights(const JSF& single_piece, const JSF& nli,
                                          double eta, double gain) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("eta must lie in [0, 1], got " + std::to_string(eta));
  if (!(gain > 0.0)) throw std::invalid_argument("gain must be positive");
  require_same_axes(single_piece.signal_axis, nli.signal_axis, "lossy_state_weights signal");
  require_same_axes(single_piece.idler_axis, nli.idler_axis, "lossy_state_weights idler");

  const double g2 = gain * gain;
  const double nsp = squared_norm(single_piece);
  const double nnli = squared_norm(nli);
  TwoPhotonStateWeights w;
  w.vacuum = (1.0 - eta) * (1.0 - eta) * g2 * nsp;
  const double one_photon = eta * (1.0 - eta) * g2 * nsp;
  w.signal_only = one_photon;
  w.idler_only = one_photon;
  w.pair = 4.0 * eta * eta * g2 * nnli;
  return w;
}

}  // namespace nlipair
