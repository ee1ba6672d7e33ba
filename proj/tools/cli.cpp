#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flyscan/errors.hpp"
#include "flyscan/image_io.hpp"
#include "flyscan/metrics.hpp"
#include "flyscan/pipeline.hpp"
#include "flyscan/run_io.hpp"

namespace flyscan::cli {

namespace {

// Flags that map one-to-one onto config keys.
const std::vector<std::pair<std::string, std::string>> kNamedOverrides = {
  {"--score-mode", "score_mode"},
  {"--alpha", "alpha"},
  {"--ell", "ell"},
  {"--sigma", "sigma"},
  {"--beta", "beta"},
  {"--steps", "s_steps"},
  {"--n-anchors", "n_anchors"},
  {"--iterations", "n_iterations"},
  {"--initial-anchors", "n_initial_anchors"},
  {"--k-idw", "k_idw"},
  {"--budget-cap", "budget_cap"},
  {"--speed", "speed"},
  {"--exposure", "exposure_time"},
  {"--dead-time", "dead_time"},
  {"--beam-radius", "beam_radius"},
};

struct Options
{
  std::string image;
  std::string config;
  std::string out = "flyscan_out";
  std::optional<std::uint64_t> seed;
  bool force = false;
  bool verbose = false;
  std::vector<std::string> sets;
  std::map<std::string, std::string> named;
};

void add_run_options(CLI::App& cmd, Options& o)
{
  cmd.add_option("image", o.image, "input image (.pgm, .csv or builtin:shapes|phantom)")
    ->required();
  cmd.add_option("--config", o.config, "flat JSON config file");
  cmd.add_option("--out", o.out, "output directory");
  cmd.add_option("--seed", o.seed, "random seed");
  cmd.add_flag("--force", o.force, "overwrite an existing metrics.csv");
  cmd.add_flag("-v,--verbose", o.verbose, "write optimizer traces");
  cmd.add_option("--set", o.sets, "override any config key: --set key=value");
  for (const auto& [flag, key] : kNamedOverrides)
    cmd.add_option(flag, o.named[key], "override config key '" + key + "'");
}

RunConfig resolve_config(const Options& o)
{
  RunConfig cfg;
  if (!o.config.empty())
    cfg = load_config_file(o.config, cfg);
  for (const std::string& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError(kv, "expected key=value");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [key, value] : o.named)
    if (!value.empty())
      set_config_value(cfg, key, value);
  if (o.seed)
    cfg.seed = *o.seed;
  cfg.validate();
  return cfg;
}

std::string fmt(const char* pattern, double v)
{
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string summary(double samplingFrac, double psnrDb, double ssimValue)
{
  return fmt("%.2f%%", 100.0 * samplingFrac) + " " + fmt("%.4f", psnrDb) + " " +
         fmt("%.4f", ssimValue);
}

int cmd_run(const Options& o, std::ostream& out)
{
  const RunConfig cfg = resolve_config(o);
  const ImageGrid truth = load_image(o.image);
  const RunWriter writer(o.out, o.force, o.verbose);
  writer.write_config(cfg);
  const RunState state =
    run_full(truth, cfg, [&](const RunState& s) { writer.on_state(s); });
  writer.finish(state);
  const IterationRecord& last = state.history.back();
  out << summary(last.sampling_frac, last.psnr_db, last.ssim) << '\n';
  return kOk;
}

int cmd_baseline(const Options& o, std::optional<double> fraction, std::ostream& out)
{
  const RunConfig cfg = resolve_config(o);
  const ImageGrid truth = load_image(o.image);
  const RunWriter writer(o.out, o.force, o.verbose);
  writer.write_config(cfg);
  auto ref = std::make_shared<const RasterReference>(make_raster_reference(truth, cfg));
  if (!fraction) {
    const RunState adaptive = run_full(truth, cfg, {}, ref);
    fraction = adaptive.history.back().sampling_frac;
  }
  const BaselineResult base = run_random_baseline(truth, cfg, *fraction, ref);
  write_pgm(base.state.recon, writer.file("recon_random.pgm"));
  writer.finish(base.state);
  out << summary(base.sampling_frac, base.report.psnr_db, base.report.ssim) << '\n';
  return kOk;
}

int cmd_sweep(const Options& o, const std::string& param,
              const std::vector<double>& values, std::ostream& out)
{
  const RunConfig cfg = resolve_config(o);
  const ImageGrid truth = load_image(o.image);
  const RunWriter writer(o.out, o.force, o.verbose);
  writer.write_config(cfg);
  const std::vector<SweepRow> rows = sweep(truth, cfg, param, values);
  write_sweep_csv(param, rows, writer.file("sweep.csv"));
  double lo = rows.front().psnr_db, hi = lo;
  for (const SweepRow& r : rows) {
    lo = std::min(lo, r.psnr_db);
    hi = std::max(hi, r.psnr_db);
  }
  out << param << " " << rows.size() << " values, psnr " << fmt("%.4f", lo)
      << ".." << fmt("%.4f", hi) << " dB, spread " << fmt("%.4f", hi - lo)
      << " dB\n";
  return kOk;
}

int cmd_raster(const Options& o, std::ostream& out)
{
  const RunConfig cfg = resolve_config(o);
  const ImageGrid truth = load_image(o.image);
  const RunWriter writer(o.out, o.force, o.verbose);
  writer.write_config(cfg);
  const RasterReference ref = make_raster_reference(truth, cfg);
  write_pgm(ref.image, writer.file("reference.pgm"));
  write_readouts_csv(ref.log, writer.file("readouts.csv"));
  write_path_csv(ref.path, writer.file("path_raster.csv"));
  const MetricReport m = report(ref.image, truth);
  out << ref.readouts() << " readouts, spacing " << fmt("%.6f", ref.line_spacing)
      << " px, vs truth " << fmt("%.4f", m.psnr_db) << " " << fmt("%.4f", m.ssim)
      << '\n';
  return kOk;
}

int cmd_metrics(const std::string& a, const std::string& b, std::ostream& out)
{
  const MetricReport m = report(load_image(a), load_image(b));
  out << fmt("%.4f", m.psnr_db) << " " << fmt("%.4f", m.ssim) << '\n';
  return kOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Adaptive fly-scan path planning and completion simulator", "flyscan"};
  app.require_subcommand(1);

  Options runOpts, baseOpts, sweepOpts, rasterOpts;
  auto* runCmd = app.add_subcommand("run", "adaptive scan: score, optimize, route, scan, complete");
  add_run_options(*runCmd, runOpts);

  std::optional<double> fraction;
  auto* baseCmd = app.add_subcommand("baseline", "random-anchor baseline at a matched budget");
  add_run_options(*baseCmd, baseOpts);
  baseCmd->add_option("--fraction", fraction,
                      "target sampling fraction (default: match an adaptive run)");

  std::string param;
  std::vector<double> values;
  auto* sweepCmd = app.add_subcommand("sweep", "run once per value of alpha or ell");
  add_run_options(*sweepCmd, sweepOpts);
  sweepCmd->add_option("--param", param, "alpha or ell")->required();
  sweepCmd->add_option("--values", values, "comma-separated values")
    ->required()
    ->delimiter(',');

  auto* rasterCmd = app.add_subcommand("raster", "dense raster fly-scan reference");
  add_run_options(*rasterCmd, rasterOpts);

  std::string imgA, imgB;
  auto* metricsCmd = app.add_subcommand("metrics", "PSNR and SSIM of two images");
  metricsCmd->add_option("a", imgA, "first image")->required();
  metricsCmd->add_option("b", imgB, "second image")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "flyscan: " << e.what() << '\n';
    return kConfigFailure;
  }

  try {
    if (*runCmd)
      return cmd_run(runOpts, out);
    if (*baseCmd)
      return cmd_baseline(baseOpts, fraction, out);
    if (*sweepCmd)
      return cmd_sweep(sweepOpts, param, values, out);
    if (*rasterCmd)
      return cmd_raster(rasterOpts, out);
    if (*metricsCmd)
      return cmd_metrics(imgA, imgB, out);
  } catch (const ConfigError& e) {
    err << "flyscan: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const IoError& e) {
    err << "flyscan: " << e.what() << '\n';
    return kIoFailure;
  } catch (const NumericalError& e) {
    err << "flyscan: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "flyscan: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << "flyscan: " << e.what() << '\n';
    return kIoFailure;
  }
  return kConfigFailure;
}

} // namespace flyscan::cli
