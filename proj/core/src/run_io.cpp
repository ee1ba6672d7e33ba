#include "flyscan/run_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flyscan/errors.hpp"
#include "flyscan/image_io.hpp"

namespace flyscan {

namespace {

using json = nlohmann::ordered_json;

struct Field
{
  std::string key;
  std::function<json(const RunConfig&)> get;
  std::function<void(RunConfig&, const json&)> set;
};

double as_number(const std::string& key, const json& v)
{
  if (!v.is_number())
    throw ConfigError(key, "expected a number");
  return v.get<double>();
}

long long as_integer(const std::string& key, const json& v)
{
  if (v.is_number_integer())
    return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15)
      return static_cast<long long>(d);
  }
  throw ConfigError(key, "expected an integer");
}

template <typename T>
Field real_field(std::string key, T RunConfig::*group, double T::*member)
{
  return {key, [=](const RunConfig& c) { return json((c.*group).*member); },
          [=](RunConfig& c, const json& v) { (c.*group).*member = as_number(key, v); }};
}

template <typename T>
Field int_field(std::string key, T RunConfig::*group, int T::*member)
{
  return {key, [=](const RunConfig& c) { return json((c.*group).*member); },
          [=](RunConfig& c, const json& v) {
            (c.*group).*member = static_cast<int>(as_integer(key, v));
          }};
}

Field top_int(std::string key, int RunConfig::*member)
{
  return {key, [=](const RunConfig& c) { return json(c.*member); },
          [=](RunConfig& c, const json& v) {
            c.*member = static_cast<int>(as_integer(key, v));
          }};
}

const std::vector<Field>& fields()
{
  using O = ObjectiveParams;
  using P = ProbeConfig;
  using I = IdwParams;
  static const std::vector<Field> table = {
    top_int("n_anchors", &RunConfig::n_anchors),
    top_int("n_iterations", &RunConfig::n_iterations),
    top_int("n_initial_anchors", &RunConfig::n_initial_anchors),
    {"seed", [](const RunConfig& c) { return json(c.seed); },
     [](RunConfig& c, const json& v) {
       if (v.is_number_unsigned())
         c.seed = v.get<std::uint64_t>();
       else if (const long long s = as_integer("seed", v); s >= 0)
         c.seed = static_cast<std::uint64_t>(s);
       else
         throw ConfigError("seed", "must be non-negative");
     }},
    {"budget_cap",
     [](const RunConfig& c) { return c.budget_cap ? json(*c.budget_cap) : json(nullptr); },
     [](RunConfig& c, const json& v) {
       if (v.is_null())
         c.budget_cap.reset();
       else
         c.budget_cap = as_number("budget_cap", v);
     }},
    {"raster_readouts_per_pixel",
     [](const RunConfig& c) { return json(c.raster_readouts_per_pixel); },
     [](RunConfig& c, const json& v) {
       c.raster_readouts_per_pixel = as_number("raster_readouts_per_pixel", v);
     }},
    {"score_mode",
     [](const RunConfig& c) {
       return json(c.objective.score_mode == ScoreMode::top ? "top" : "weighted");
     },
     [](RunConfig& c, const json& v) {
       if (v == "top")
         c.objective.score_mode = ScoreMode::top;
       else if (v == "weighted")
         c.objective.score_mode = ScoreMode::weighted;
       else
         throw ConfigError("score_mode", "expected \"top\" or \"weighted\"");
     }},
    real_field("alpha", &RunConfig::objective, &O::alpha),
    real_field("ell", &RunConfig::objective, &O::ell),
    real_field("sigma", &RunConfig::objective, &O::sigma),
    int_field("m_neighbors", &RunConfig::objective, &O::m_neighbors),
    real_field("epsilon_log", &RunConfig::objective, &O::epsilon_log),
    real_field("beta", &RunConfig::objective, &O::beta),
    real_field("adam_b1", &RunConfig::objective, &O::adam_b1),
    real_field("adam_b2", &RunConfig::objective, &O::adam_b2),
    real_field("adam_eps", &RunConfig::objective, &O::adam_eps),
    int_field("s_steps", &RunConfig::objective, &O::s_steps),
    real_field("speed", &RunConfig::probe, &P::speed),
    real_field("exposure_time", &RunConfig::probe, &P::exposure_time),
    real_field("dead_time", &RunConfig::probe, &P::dead_time),
    real_field("beam_radius", &RunConfig::probe, &P::beam_radius),
    int_field("n_substeps", &RunConfig::probe, &P::n_substeps),
    int_field("n_footprint", &RunConfig::probe, &P::n_footprint),
    {"candidate_subset_size",
     [](const RunConfig& c) { return json(c.route.candidate_subset_size); },
     [](RunConfig& c, const json& v) {
       const long long n = as_integer("candidate_subset_size", v);
       if (n < 0)
         throw ConfigError("candidate_subset_size", "must be >= 0 (0 = unbounded)");
       c.route.candidate_subset_size = static_cast<std::size_t>(n);
     }},
    int_field("k_idw", &RunConfig::idw, &I::k_idw),
    real_field("exact_hit_tol", &RunConfig::idw, &I::exact_hit_tol),
    real_field("idw_power", &RunConfig::idw, &I::power),
  };
  return table;
}

const Field& find_field(const std::string& key)
{
  for (const Field& f : fields())
    if (f.key == key)
      return f;
  throw ConfigError(key, "unknown key");
}

std::string fmt_double(double v)
{
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

} // namespace

const std::vector<std::string>& config_keys()
{
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields())
      k.push_back(f.key);
    return k;
  }();
  return keys;
}

std::string config_to_json(const RunConfig& config)
{
  json j = json::object();
  for (const Field& f : fields())
    j[f.key] = f.get(config);
  return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text, RunConfig base)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw ConfigError("<document>", "expected a flat JSON object");
  for (const auto& [key, value] : j.items())
    find_field(key).set(base, value);
  base.validate();
  return base;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base)
{
  std::ifstream in(path);
  if (!in)
    throw IoError(path.string() + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), std::move(base));
}

void set_config_value(RunConfig& config, const std::string& key,
                      const std::string& value)
{
  const Field& f = find_field(key);
  json v;
  try {
    v = json::parse(value);
  } catch (const json::parse_error&) {
    // bare words like `top` are taken as strings
    v = value;
  }
  f.set(config, v);
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError(path.string() + ": cannot open for writing");
  out << text;
  if (!out)
    throw IoError(path.string() + ": write failed");
}

void write_metrics_csv(std::span<const IterationRecord> history,
                       const std::filesystem::path& path)
{
  std::string text = "iter,readouts,sampling_frac,psnr_db,ssim\n";
  for (const IterationRecord& r : history)
    text += std::to_string(r.iter) + "," + std::to_string(r.readouts) + "," +
            fmt_double(r.sampling_frac) + "," + fmt_double(r.psnr_db) + "," +
            fmt_double(r.ssim) + "\n";
  write_text_file(path, text);
}

void write_sweep_csv(const std::string& param, std::span<const SweepRow> rows,
                     const std::filesystem::path& path)
{
  std::string text = "param,value,psnr_db,ssim,sampling_frac\n";
  for (const SweepRow& r : rows)
    text += param + "," + fmt_double(r.value) + "," + fmt_double(r.psnr_db) + "," +
            fmt_double(r.ssim) + "," + fmt_double(r.sampling_frac) + "\n";
  write_text_file(path, text);
}

RunWriter::RunWriter(std::filesystem::path dir, bool force, bool verbose)
  : mDir(std::move(dir)), mVerbose(verbose)
{
  std::error_code ec;
  std::filesystem::create_directories(mDir, ec);
  if (ec)
    throw IoError(mDir.string() + ": cannot create directory: " + ec.message());
  if (!force && std::filesystem::exists(mDir / "metrics.csv"))
    throw IoError((mDir / "metrics.csv").string() +
                  ": already exists (pass --force to overwrite)");
}

void RunWriter::write_config(const RunConfig& config) const
{
  write_text_file(file("config.json"), config_to_json(config));
}

void RunWriter::on_state(const RunState& state) const
{
  char tag[32];
  std::snprintf(tag, sizeof tag, "k%02d", state.k);
  write_pgm(state.recon, file(std::string("recon_") + tag + ".pgm"));
  write_path_csv(state.last_path, file(std::string("path_") + tag + ".csv"));
  if (mVerbose && !state.last_trace.empty())
    write_trace_csv(state.last_trace, file(std::string("trace_") + tag + ".csv"));
}

void RunWriter::finish(const RunState& state) const
{
  write_readouts_csv(state.readouts, file("readouts.csv"));
  write_anchors_csv(state.scanned, file("anchors.csv"));
  write_metrics_csv(state.history, file("metrics.csv"));
}

} // namespace flyscan
