#include "nlipair/spectral_analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlipair {

namespace {

constexpr double kSingularCutoff = 1e-12;  // relative to the largest singular value

Eigen::MatrixXcd weighted(const JSF& jsf) {
  const double w = std::sqrt(std::abs(jsf.signal_axis.step()) *
                             std::abs(jsf.idler_axis.step()));
  return jsf.amplitude * w;
}

void apply_filter(Eigen::MatrixXcd& m, const FrequencyAxis& signal_axis,
                  const FrequencyAxis& idler_axis, const BandFilter& filter) {
  if (filter.signal) {
    if (filter.signal->lo_thz > filter.signal->hi_thz)
      throw std::invalid_argument("signal window is empty");
    for (int i = 0; i < signal_axis.size(); ++i) {
      const double f = signal_axis[i];
      if (f < filter.signal->lo_thz || f > filter.signal->hi_thz) m.row(i).setZero();
    }
  }
  if (filter.idler) {
    if (filter.idler->lo_thz > filter.idler->hi_thz)
      throw std::invalid_argument("idler window is empty");
    for (int j = 0; j < idler_axis.size(); ++j) {
      const double f = idler_axis[j];
      if (f < filter.idler->lo_thz || f > filter.idler->hi_thz) m.col(j).setZero();
    }
  }
}

SchmidtResult schmidt_of_matrix(const Eigen::MatrixXcd& weighted_amp, bool keep_modes) {
  if (weighted_amp.size() == 0 || weighted_amp.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("schmidt_decompose on an all-zero amplitude");
  unsigned opts = keep_modes ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted_amp, opts);
  const Eigen::VectorXd& sv = svd.singularValues();

  SchmidtResult out;
  const double cutoff = kSingularCutoff * sv(0);
  double total = 0.0;
  int kept = 0;
  for (int n = 0; n < sv.size(); ++n) {
    if (sv(n) < cutoff) break;
    total += sv(n) * sv(n);
    ++kept;
  }
  out.total_weight = total;
  out.lambdas.reserve(kept);
  double inv_k = 0.0;
  for (int n = 0; n < kept; ++n) {
    const double lam = sv(n) * sv(n) / total;
    out.lambdas.push_back(lam);
    inv_k += lam * lam;
  }
  out.schmidt_number = 1.0 / inv_k;
  if (keep_modes) {
    out.signal_modes = svd.matrixU().leftCols(kept);
    out.idler_modes = svd.matrixV().leftCols(kept).conjugate();
  }
  return out;
}

}  // namespace

JSF apply_band_filter(const JSF& jsf, const BandFilter& filter) {
  JSF out = jsf;
  apply_filter(out.amplitude, out.signal_axis, out.idler_axis, filter);
  return out;
}

SchmidtResult schmidt_decompose(const JSF& jsf, bool keep_modes) {
  SchmidtResult out = schmidt_of_matrix(weighted(jsf), keep_modes);
  if (keep_modes) {
    // Rescale so the modes are orthonormal under the grid quadrature rather
    // than the plain dot product.
    out.signal_modes /= std::sqrt(std::abs(jsf.signal_axis.step()));
    out.idler_modes /= std::sqrt(std::abs(jsf.idler_axis.step()));
  }
  return out;
}

Eigen::MatrixXcd reduced_signal_state(const JSF& single_piece, const JSF& nli,
                                      double eta, const BandFilter& filter) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("reduced signal state needs eta in (0, 1], got " +
                                std::to_string(eta));
  if (single_piece.signal_axis.size() != nli.signal_axis.size() ||
      single_piece.idler_axis.size() != nli.idler_axis.size())
    throw std::invalid_argument("reduced signal state: grids do not match");

  Eigen::MatrixXcd a = weighted(single_piece);
  Eigen::MatrixXcd b = weighted(nli);
  apply_filter(a, single_piece.signal_axis, single_piece.idler_axis, filter);
  apply_filter(b, nli.signal_axis, nli.idler_axis, filter);

  return eta * (1.0 - eta) * (a * a.adjoint()) + 4.0 * eta * eta * (b * b.adjoint());
}

double g2_signal(const JSF& single_piece, const JSF& nli, double eta,
                 const BandFilter& filter) {
  const Eigen::MatrixXcd gamma = reduced_signal_state(single_piece, nli, eta, filter);
  const double tr = gamma.trace().real();
  if (!(tr > 0.0))
    throw std::invalid_argument("g2_signal: filtered state carries no weight");
  // Gamma is Hermitian PSD, so tr(Gamma^2) is its squared Frobenius norm.
  const double tr2 = gamma.squaredNorm();
  return 1.0 + tr2 / (tr * tr);
}

double heralding_efficiency(const TwoPhotonStateWeights& weights) {
  const double denom = weights.pair + weights.signal_only;
  if (!(denom > 0.0))
    throw std::invalid_argument("heralding efficiency undefined: no signal weight");
  return weights.pair / denom;
}

double pearson_correlation(const JSF& jsf, const BandFilter& filter) {
  Eigen::MatrixXcd amp = jsf.amplitude;
  apply_filter(amp, jsf.signal_axis, jsf.idler_axis, filter);

  double norm = 0.0, ms = 0.0, mi = 0.0;
  const int ns = jsf.signal_axis.size();
  const int ni = jsf.idler_axis.size();
  int i_lo = ns, i_hi = -1, j_lo = ni, j_hi = -1;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ni; ++j) {
      const double w = std::norm(amp(i, j));
      if (w > 0.0) {
        i_lo = std::min(i_lo, i);
        i_hi = std::max(i_hi, i);
        j_lo = std::min(j_lo, j);
        j_hi = std::max(j_hi, j);
      }
      norm += w;
      ms += w * jsf.signal_axis[i];
      mi += w * jsf.idler_axis[j];
    }
  if (!(norm > 0.0))
    throw std::invalid_argument("pearson_correlation on an all-zero density");
  // All the weight on a single row or column: no spread to correlate. Decided
  // on sample indices, not on the accumulated variance, which roundoff can
  // keep barely above zero.
  if (i_lo == i_hi || j_lo == j_hi)
    throw std::invalid_argument("pearson_correlation: degenerate marginal");
  ms /= norm;
  mi /= norm;
  double vs = 0.0, vi = 0.0, cov = 0.0;
  for (int i = 0; i < ns; ++i) {
    const double ds = jsf.signal_axis[i] - ms;
    for (int j = 0; j < ni; ++j) {
      const double w = std::norm(amp(i, j));
      const double di = jsf.idler_axis[j] - mi;
      vs += w * ds * ds;
      vi += w * di * di;
      cov += w * ds * di;
    }
  }
  if (!(vs > 0.0) || !(vi > 0.0))
    throw std::invalid_argument("pearson_correlation: degenerate marginal");
  return cov / std::sqrt(vs * vi);
}

ChannelDecomposition decompose_channels(const JSF& jsf,
                                        const std::vector<ChannelSpec>& channels) {
  if (channels.empty()) throw std::invalid_argument("decompose_channels: no channels");

  struct Range {
    int lo, hi;  // half-open sample range
  };
  // Edges are compared with a little slack pulled inward: supports of
  // adjacent channels computed as center +- width touch at a shared edge, and
  // rounding can land that edge a few ulp inside both intervals. A sample
  // sitting exactly on a shared edge is claimed by neither channel, which
  // keeps the support bookkeeping free of double counting.
  auto samples_in = [](const FrequencyAxis& ax, double lo, double hi) {
    Range r{ax.size(), ax.size()};
    for (int i = 0; i < ax.size(); ++i)
      if (ax[i] >= lo + 1e-9 && ax[i] <= hi - 1e-9) {
        r.lo = std::min(r.lo, i);
        r.hi = i + 1;
      }
    return r;
  };

  std::vector<Range> srange, irange;
  for (const ChannelSpec& ch : channels) {
    srange.push_back(samples_in(jsf.signal_axis, ch.signal_center_thz - ch.band_half_width_thz,
                                ch.signal_center_thz + ch.band_half_width_thz));
    irange.push_back(samples_in(jsf.idler_axis, ch.idler_center_thz - ch.band_half_width_thz,
                                ch.idler_center_thz + ch.band_half_width_thz));
    if (srange.back().lo >= srange.back().hi || irange.back().lo >= irange.back().hi)
      throw std::invalid_argument("channel support contains no grid samples");
  }
  for (std::size_t a = 0; a < channels.size(); ++a)
    for (std::size_t b = a + 1; b < channels.size(); ++b) {
      const bool s_overlap = srange[a].lo < srange[b].hi && srange[b].lo < srange[a].hi;
      const bool i_overlap = irange[a].lo < irange[b].hi && irange[b].lo < irange[a].hi;
      if (s_overlap || i_overlap)
        throw std::invalid_argument("channel supports overlap on the grid");
    }

  const double cell = std::abs(jsf.signal_axis.step()) * std::abs(jsf.idler_axis.step());
  ChannelDecomposition out;
  double support_total = 0.0;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const Range rs = srange[k];
    const Range ri = irange[k];
    const Eigen::MatrixXcd block =
        jsf.amplitude.block(rs.lo, ri.lo, rs.hi - rs.lo, ri.hi - ri.lo);

    IslandReport rep;
    rep.channel = static_cast<int>(k);
    Eigen::Index pi = 0, pj = 0;
    block.cwiseAbs().maxCoeff(&pi, &pj);
    rep.peak_signal_thz = jsf.signal_axis[rs.lo + static_cast<int>(pi)];
    rep.peak_idler_thz = jsf.idler_axis[ri.lo + static_cast<int>(pj)];
    rep.support_weight = block.squaredNorm() * cell;
    const std::complex<double> peak_amp = block(pi, pj);
    const double peak_mag = std::abs(peak_amp);
    rep.weight = peak_mag > 0.0 ? peak_amp / peak_mag : 1.0;  // phase; magnitude below
    rep.schmidt_number =
        schmidt_of_matrix(block * std::sqrt(cell), false).schmidt_number;
    support_total += rep.support_weight;
    out.islands.push_back(rep);
  }
  if (!(support_total > 0.0))
    throw std::invalid_argument("decompose_channels: no weight on any support");
  for (IslandReport& rep : out.islands)
    rep.weight *= std::sqrt(rep.support_weight / support_total);

  out.support_weight = support_total;
  out.off_support_weight = jsf.amplitude.squaredNorm() * cell - support_total;
  return out;
}

}  // namespace nlipair
