#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "nlipair/config.hpp"
#include "nlipair/io.hpp"
#include "nlipair/slm_export.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool noiseless = false;
  int threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config_path, "run configuration file")->required();
  sub->add_option("--out", opt.out_dir, "output directory, created if needed");
  sub->add_option("--seed", opt.seed, "override the configured random seed");
  sub->add_option("--threads", opt.threads, "worker threads for the grid fills")
      ->check(CLI::Range(1, 256));
}

nlipair::RunConfig config_for(const CLI::App* sub, const Options& opt) {
  nlipair::RunConfig cfg = nlipair::load_config(opt.config_path);
  if (sub->count("--seed")) cfg.seed = opt.seed;
  return cfg;
}

std::string out_path(const Options& opt, const char* name) {
  fs::create_directories(opt.out_dir);
  return (fs::path(opt.out_dir) / name).string();
}

nlipair::JSF single_piece(const nlipair::RunConfig& cfg, int threads) {
  return nlipair::single_piece_jsf(nlipair::signal_axis(cfg), nlipair::idler_axis(cfg),
                                   cfg.pump, cfg.medium, nlipair::model_of(cfg),
                                   threads);
}

nlipair::JSF two_stage(const nlipair::RunConfig& cfg, const nlipair::JSF& sp,
                       int threads) {
  const nlipair::PhaseProfile profile = nlipair::design_profile(cfg);
  const nlipair::InterferenceMap factor =
      nlipair::interference_map(sp.signal_axis, sp.idler_axis, profile, cfg.medium,
                                cfg.pump, nlipair::model_of(cfg), threads);
  return nlipair::nli_jsf(sp, factor);
}

std::vector<nlipair::AnalysisEtaRow> eta_table(const nlipair::RunConfig& cfg,
                                               const nlipair::JSF& sp,
                                               const nlipair::JSF& nli,
                                               const nlipair::BandFilter& filter) {
  std::vector<nlipair::AnalysisEtaRow> rows;
  for (int k = 1; k <= 20; ++k) {
    nlipair::AnalysisEtaRow row;
    row.eta = 0.05 * k;
    row.g2 = nlipair::g2_signal(sp, nli, row.eta, filter);
    row.heralding = nlipair::heralding_efficiency(
        nlipair::lossy_state_weights(sp, nli, row.eta, cfg.gain));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"design and simulation of a two-stage pulse-pumped pair source"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* design = app.add_subcommand(
      "design", "build the spectral phase and its band map");
  CLI::App* jsf = app.add_subcommand(
      "jsf", "compute the single-piece and two-stage joint spectra");
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Schmidt / correlation / g2 report of the designed source");
  CLI::App* scan = app.add_subcommand(
      "scan", "simulate the two-filter coincidence scan");
  CLI::App* g2curve = app.add_subcommand(
      "g2curve", "signal-arm g2 and heralding versus transmission");
  CLI::App* pattern = app.add_subcommand(
      "pattern", "render the phase to an 8-bit panel image (PGM)");
  for (CLI::App* sub : {design, jsf, analyze, scan, g2curve, pattern})
    add_common(sub, opt);
  scan->add_flag("--noiseless", opt.noiseless, "write exact means instead of counts");

  design->callback([&] {
    const nlipair::RunConfig cfg = config_for(design, opt);
    const nlipair::PhaseProfile profile = nlipair::design_profile(cfg);
    nlipair::write_profile_csv(profile, out_path(opt, "profile.csv"));
    nlipair::write_band_map(profile, out_path(opt, "bands.txt"));
    if (cfg.slm) {
      const nlipair::GrayPattern image = nlipair::phase_to_pattern(profile, *cfg.slm);
      nlipair::export_pgm(image, out_path(opt, "pattern.pgm"));
    }
    std::printf("profile: %d samples, %.6g..%.6g THz, %zu channel(s)\n",
                profile.size(), profile.axis().front(), profile.axis().back(),
                cfg.channels.size());
  });

  jsf->callback([&] {
    const nlipair::RunConfig cfg = config_for(jsf, opt);
    const nlipair::JSF sp = single_piece(cfg, opt.threads);
    const nlipair::JSF nli = two_stage(cfg, sp, opt.threads);
    nlipair::write_jsf_csv(sp, out_path(opt, "single_piece.csv"));
    nlipair::write_jsf_csv(nli, out_path(opt, "nli.csv"));
    std::printf("grid %dx%d, squared norms: single piece %.6g, two stage %.6g\n",
                sp.signal_axis.size(), sp.idler_axis.size(), nlipair::squared_norm(sp),
                nlipair::squared_norm(nli));
  });

  analyze->callback([&] {
    const nlipair::RunConfig cfg = config_for(analyze, opt);
    const nlipair::JSF sp = single_piece(cfg, opt.threads);
    const nlipair::JSF nli = two_stage(cfg, sp, opt.threads);
    const nlipair::BandFilter filter = nlipair::analysis_filter(cfg);
    const bool windowed = filter.signal.has_value();

    nlipair::AnalysisReport report;
    report.schmidt_number_full = nlipair::schmidt_decompose(nli, false).schmidt_number;
    report.pearson_full = nlipair::pearson_correlation(nli);
    if (windowed) {
      const nlipair::JSF cut = nlipair::apply_band_filter(nli, filter);
      report.schmidt_number_windowed =
          nlipair::schmidt_decompose(cut, false).schmidt_number;
      report.pearson_windowed = nlipair::pearson_correlation(nli, filter);
    } else {
      report.schmidt_number_windowed = report.schmidt_number_full;
      report.pearson_windowed = report.pearson_full;
    }
    report.total_weight = nlipair::squared_norm(nli);
    report.windowed = windowed;
    report.eta_rows = eta_table(cfg, sp, nli, filter);
    report.channels = nlipair::decompose_channels(nli, cfg.channels);
    nlipair::write_analysis_report(report, out_path(opt, "analysis.txt"));
    std::printf("schmidt number %.6g (windowed %.6g), pearson r %.6g (windowed %.6g)\n",
                report.schmidt_number_full, report.schmidt_number_windowed,
                report.pearson_full, report.pearson_windowed);
  });

  scan->callback([&] {
    const nlipair::RunConfig cfg = config_for(scan, opt);
    if (!cfg.scan)
      throw nlipair::ConfigError("config has no scan block (scan.* keys)");
    const nlipair::JSF sp = single_piece(cfg, opt.threads);
    const nlipair::JSF nli = two_stage(cfg, sp, opt.threads);
    const nlipair::ScanResult result = nlipair::joint_spectral_scan(
        sp, nli, cfg.eta, cfg.gain, *cfg.scan, cfg.seed, opt.noiseless);
    nlipair::write_scan_csv(result, out_path(opt, "scan.csv"));
    Eigen::Index a = 0, b = 0;
    result.true_counts.maxCoeff(&a, &b);
    std::printf("scan %zux%zu, peak true coincidences at %.6g / %.6g nm\n",
                result.signal_nm.size(), result.idler_nm.size(),
                result.signal_nm[static_cast<std::size_t>(a)],
                result.idler_nm[static_cast<std::size_t>(b)]);
  });

  g2curve->callback([&] {
    const nlipair::RunConfig cfg = config_for(g2curve, opt);
    const nlipair::JSF sp = single_piece(cfg, opt.threads);
    const nlipair::JSF nli = two_stage(cfg, sp, opt.threads);
    const nlipair::BandFilter filter = nlipair::analysis_filter(cfg);
    const std::vector<nlipair::AnalysisEtaRow> rows = eta_table(cfg, sp, nli, filter);
    const std::string path = out_path(opt, "g2curve.csv");
    std::FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(out, "eta,g2_signal,heralding\n");
    for (const nlipair::AnalysisEtaRow& row : rows)
      std::fprintf(out, "%.12g,%.12g,%.12g\n", row.eta, row.g2, row.heralding);
    std::fclose(out);
    std::printf("g2 at eta=1: %.6g\n", rows.back().g2);
  });

  pattern->callback([&] {
    const nlipair::RunConfig cfg = config_for(pattern, opt);
    if (!cfg.slm)
      throw nlipair::ConfigError("config has no panel block (slm.* keys)");
    const nlipair::PhaseProfile profile = nlipair::design_profile(cfg);
    const nlipair::GrayPattern image = nlipair::phase_to_pattern(profile, *cfg.slm);
    nlipair::export_pgm(image, out_path(opt, "pattern.pgm"));
    std::printf("pattern %dx%d written\n", image.columns, image.rows);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
