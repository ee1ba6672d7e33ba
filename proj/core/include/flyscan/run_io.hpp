#ifndef FLYSCAN_RUN_IO_HPP
#define FLYSCAN_RUN_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "flyscan/pipeline.hpp"

namespace flyscan {

/// Flat JSON keys understood by the config reader, in emission order.
const std::vector<std::string>& config_keys();

/// Pretty-printed flat JSON of every resolved parameter.
std::string config_to_json(const RunConfig& config);

/// Overlays the keys present in `text` onto `base`. Unknown keys and values
/// of the wrong type raise ConfigError naming the key; the result is
/// validated before it is returned.
RunConfig config_from_json(const std::string& text, RunConfig base = {});

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Sets one key from its textual value (used for command-line overrides).
void set_config_value(RunConfig& config, const std::string& key,
                      const std::string& value);

void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Header `iter,readouts,sampling_frac,psnr_db,ssim`.
void write_metrics_csv(std::span<const IterationRecord> history,
                       const std::filesystem::path& path);

/// Header `param,value,psnr_db,ssim,sampling_frac`.
void write_sweep_csv(const std::string& param, std::span<const SweepRow> rows,
                     const std::filesystem::path& path);

/// Writes the artifacts of one run into a directory:
/// config.json, recon_kNN.pgm, path_kNN.csv per iteration, and at the end
/// readouts.csv, anchors.csv and metrics.csv. With `verbose`, the ADAM trace
/// of each iteration goes to trace_kNN.csv.
class RunWriter
{
public:
  RunWriter(std::filesystem::path dir, bool force, bool verbose = false);

  const std::filesystem::path& dir() const noexcept { return mDir; }

  void write_config(const RunConfig& config) const;
  void on_state(const RunState& state) const;
  void finish(const RunState& state) const;

  std::filesystem::path file(const std::string& name) const { return mDir / name; }

private:
  std::filesystem::path mDir;
  bool mVerbose;
};

} // namespace flyscan

#endif
