// fovr: command-line driver for trace generation, attention prediction,
// catalog synthesis and streaming simulation.
//
// Exit codes: 0 success, 1 runtime or data error, 2 usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fovr/bandwidth.hpp"
#include "fovr/catalog.hpp"
#include "fovr/error.hpp"
#include "fovr/prediction.hpp"
#include "fovr/simulator.hpp"
#include "fovr/trace.hpp"

namespace {

using namespace fovr;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kFormats = R"(File formats:
  trace      one sample per line, space separated:
               t_ms hw hx hy hz gx gy gz [ox oy oz]
             t_ms integer milliseconds; (hw,hx,hy,hz) head orientation
             quaternion; (gx,gy,gz) unit gaze direction; optional gaze origin
             (must be 0 0 0). Coordinates: +x forward, +z up, yaw
             counter-clockwise seen from +z.
  manifest   JSON object, keys sorted: clip_count, clip_duration_ms,
             format ("fovr-manifest/1"), grid {cols, rows},
             ladder {hd:[kbps], ld:[kbps...], sd:[kbps...]},
             table [clip][row-major tile] {hd:[..], ld:[..], sd:[..]}.
  bandwidth  `--bw` takes a constant in Mbps or a path to a file of
             `t_ms,bps` lines (step function, first t_ms = 0).
  predict    one line per estimate: `index issued_ms yaw pitch correct`,
             then `# accuracy <correct>/<total> = <fraction>`.
  rows       clip,request_ms,ready_ms,display_ms,stall_ms,bits,
             scheduled_qoe,actual_qoe,correct
  summary    JSON object of aggregates with sorted keys.
)";

// Converts library validation of flag values into usage errors.
template <class F>
auto configure(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void write_out(const std::string& path, const std::string& data) {
  if (path == "-") {
    std::cout << data;
    std::cout.flush();
    if (!std::cout) throw Error("failed writing standard output");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << data;
  if (!f.flush()) throw Error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Globals {
  std::uint64_t seed = 0;
  std::string out = "-";
};

struct TraceGenOpts {
  std::string kind = "static";
  SyntheticParams p;
  std::optional<double> sigma;
};

struct PredictorOpts {
  PredictorConfig cfg;
  SvrConfig svr;
  std::string model = "svr";
};

void add_predictor_flags(CLI::App* cmd, PredictorOpts& o) {
  cmd->add_option("--window", o.cfg.window_s, "Prediction window in seconds")->capture_default_str();
  cmd->add_option("--horizon", o.cfg.horizon_s, "Prediction horizon in seconds")->capture_default_str();
  cmd->add_option("--rate", o.cfg.rate_hz, "Resampling rate in Hz")->capture_default_str();
  cmd->add_option("--tolerance", o.cfg.tolerance_deg, "Correctness tolerance in degrees")->capture_default_str();
  cmd->add_option("--model", o.model, "Regression model: svr or linear")
      ->check(CLI::IsMember({"svr", "linear"}))
      ->capture_default_str();
  cmd->add_option("--svr-c", o.svr.c, "SVR box constraint C")->capture_default_str();
  cmd->add_option("--svr-epsilon", o.svr.epsilon, "SVR epsilon-tube width (degrees)")->capture_default_str();
  cmd->add_option("--svr-gamma", o.svr.gamma, "SVR RBF gamma on window-normalised time")->capture_default_str();
}

PredictorModel model_of(const PredictorOpts& o) {
  return o.model == "linear" ? PredictorModel::linear : PredictorModel::svr;
}

void validate_predictor(const PredictorOpts& o) {
  configure([&] {
    o.cfg.validate();
    o.svr.validate();
    return 0;
  });
}

int run_trace_gen(const Globals& g, const TraceGenOpts& o) {
  const Trace tr = configure([&] {
    SyntheticParams p = o.p;
    p.sigma_deg = o.sigma;
    return gen_synthetic(parse_motion_kind(o.kind), p, g.seed);
  });
  write_out(g.out, serialize_trace(tr));
  return 0;
}

int run_predict(const Globals& g, const std::string& trace_path, const PredictorOpts& o, std::int64_t step_ms) {
  validate_predictor(o);
  if (step_ms <= 0) throw UsageError("--step-ms must be > 0");
  const Trace tr = load_trace(read_file(trace_path));
  const auto est = sliding_predictions(tr, o.cfg, o.svr, model_of(o), step_ms);
  const AccuracyReport rep = eval_accuracy(est, tr, o.cfg.tolerance_deg);
  std::string out = format_prediction_dump(est, rep);
  std::ostringstream acc;
  acc.imbue(std::locale::classic());
  acc.setf(std::ios::fixed);
  acc.precision(6);
  acc << "# accuracy " << rep.correct << '/' << rep.total << " = " << rep.accuracy << '\n';
  out += acc.str();
  write_out(g.out, out);
  return 0;
}

int run_catalog_synth(const Globals& g, const SynthCatalogParams& p) {
  const TileCatalog cat = configure([&] { return synth_catalog(p, g.seed); });
  write_out(g.out, save_manifest(cat));
  return 0;
}

struct SimulateOpts {
  std::string trace;
  std::string manifest;
  std::string bw = "10";
  std::vector<double> sweep;
  std::string scheme = "fovr";
  std::string format = "summary";
  PredictorOpts pred;
  SimConfig sim;
};

std::optional<double> as_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::string sweep_label(double mbps) {
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << mbps;
  return ss.str();
}

int run_simulate(const Globals& g, const SimulateOpts& o) {
  validate_predictor(o.pred);
  SimConfig cfg = o.sim;
  cfg.predictor = o.pred.cfg;
  cfg.svr = o.pred.svr;
  cfg.model = model_of(o.pred);
  const Scheme scheme = configure([&] { return parse_scheme(o.scheme); });
  const ReportFormat format = configure([&] { return parse_report_format(o.format); });
  configure([&] {
    cfg.validate();
    return 0;
  });
  for (double m : o.sweep) {
    if (!(m > 0.0)) throw UsageError("--sweep bandwidths must be > 0 Mbps");
  }

  const Trace tr = load_trace(read_file(o.trace));
  const TileCatalog cat = load_manifest(read_file(o.manifest));

  if (o.sweep.empty()) {
    BandwidthModel bw = BandwidthModel::constant(1.0);
    if (const auto mbps = as_number(o.bw)) {
      if (!(*mbps > 0.0)) throw UsageError("--bw must be > 0 Mbps");
      bw = BandwidthModel::constant(*mbps * 1e6);
    } else {
      bw = load_bandwidth_trace(read_file(o.bw));
    }
    write_out(g.out, emit_report(simulate(tr, cat, bw, cfg, scheme), format));
    return 0;
  }

  // Independent runs; output keeps the order of the list.
  std::vector<std::future<SimReport>> runs;
  for (double m : o.sweep) {
    runs.push_back(std::async(std::launch::async, [&, m] {
      return simulate(tr, cat, BandwidthModel::constant(m * 1e6), cfg, scheme);
    }));
  }
  std::string out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const SimReport r = runs[i].get();
    const std::string label = sweep_label(o.sweep[i]);
    if (format == ReportFormat::summary) {
      out += "# bw_mbps=" + label + '\n' + emit_report(r, format);
    } else {
      const std::string rows = emit_report(r, format);
      std::istringstream lines(rows);
      std::string line;
      bool header = true;
      while (std::getline(lines, line)) {
        if (header) {
          if (i == 0) out += "bw_mbps," + line + '\n';
          header = false;
        } else {
          out += label + ',' + line + '\n';
        }
      }
    }
  }
  write_out(g.out, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attention-driven tile streaming toolkit"};
  app.footer(kFormats);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--out", g.out, "Output path, '-' for standard output")->capture_default_str();

  // trace gen
  auto* trace_cmd = app.add_subcommand("trace", "Trace utilities");
  trace_cmd->require_subcommand(1);
  auto* gen = trace_cmd->add_subcommand("gen", "Generate a synthetic head+gaze trace");
  TraceGenOpts tg;
  gen->add_option("--kind", tg.kind, "static, pursuit or saccade")->capture_default_str();
  gen->add_option("--duration", tg.p.duration_s, "Seconds")->capture_default_str();
  gen->add_option("--rate", tg.p.rate_hz, "Samples per second")->capture_default_str();
  gen->add_option("--center-yaw", tg.p.center_yaw_deg, "Degrees")->capture_default_str();
  gen->add_option("--center-pitch", tg.p.center_pitch_deg, "Degrees")->capture_default_str();
  gen->add_option("--sigma", tg.sigma, "Gaze noise in degrees (default 0.5 static, 0 otherwise)");
  gen->add_option("--amplitude-yaw", tg.p.amplitude_yaw_deg, "Pursuit yaw amplitude, degrees")->capture_default_str();
  gen->add_option("--amplitude-pitch", tg.p.amplitude_pitch_deg, "Pursuit pitch amplitude, degrees")
      ->capture_default_str();
  gen->add_option("--period", tg.p.period_s, "Pursuit period, seconds")->capture_default_str();
  gen->add_option("--phase", tg.p.phase_deg, "Pursuit phase, degrees")->capture_default_str();
  gen->add_option("--dwell", tg.p.dwell_mean_s, "Saccade mean fixation, seconds")->capture_default_str();
  gen->add_option("--jump", tg.p.jump_deg, "Saccade jump range, degrees")->capture_default_str();
  gen->add_option("--head-lag", tg.p.head_lag_ms, "Head lag behind gaze, ms")->capture_default_str();

  // predict
  auto* predict = app.add_subcommand("predict", "Sliding attention prediction with accuracy");
  std::string predict_trace;
  PredictorOpts po;
  std::int64_t step_ms = 1000;
  predict->add_option("--trace", predict_trace, "Trace file")->required();
  add_predictor_flags(predict, po);
  predict->add_option("--step-ms", step_ms, "Spacing between prediction instants, ms")->capture_default_str();

  // catalog synth
  auto* catalog_cmd = app.add_subcommand("catalog", "Catalog utilities");
  catalog_cmd->require_subcommand(1);
  auto* synth = catalog_cmd->add_subcommand("synth", "Synthesise a tile bitrate manifest");
  SynthCatalogParams cp;
  synth->add_option("--cols", cp.grid.cols, "Tile columns")->capture_default_str();
  synth->add_option("--rows", cp.grid.rows, "Tile rows")->capture_default_str();
  synth->add_option("--clips", cp.clips, "Number of clips")->capture_default_str();
  synth->add_option("--clip-ms", cp.clip_duration_ms, "Clip duration, ms")->capture_default_str();
  synth->add_option("--base-kbps", cp.base_kbps, "Whole-frame HD bitrate, kbps")->capture_default_str();
  synth->add_option("--sd-ratios", cp.sd_ratios, "SD rungs as fractions of HD, descending")
      ->delimiter(',')
      ->capture_default_str();
  synth->add_option("--ld-ratios", cp.ld_ratios, "LD rungs as fractions of HD, descending")
      ->delimiter(',')
      ->capture_default_str();
  synth->add_option("--jitter", cp.jitter, "Per-tile multiplicative jitter in [0, 0.5)")->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Stream a catalog along a trace");
  SimulateOpts so;
  sim->add_option("--trace", so.trace, "Trace file")->required();
  sim->add_option("--manifest", so.manifest, "Manifest file")->required();
  sim->add_option("--bw", so.bw, "Constant Mbps or bandwidth trace path")->capture_default_str();
  sim->add_option("--sweep", so.sweep, "Comma-separated constant Mbps values, run in parallel")->delimiter(',');
  sim->add_option("--scheme", so.scheme, "fovr, full, head_only or gaze_only")->capture_default_str();
  sim->add_option("--format", so.format, "rows or summary")->capture_default_str();
  sim->add_option("--startup-clips", so.sim.startup_clips, "Clips buffered before playback")->capture_default_str();
  sim->add_option("--processing-ms", so.sim.processing_delay_ms, "Composition delay, ms")->capture_default_str();
  sim->add_option("--prediction-ms", so.sim.prediction_delay_ms, "Prediction delay, ms")->capture_default_str();
  sim->add_option("--latency-ms", so.sim.network_latency_ms, "Network latency, ms")->capture_default_str();
  add_predictor_flags(sim, so.pred);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_trace_gen(g, tg);
    if (predict->parsed()) return run_predict(g, predict_trace, po, step_ms);
    if (synth->parsed()) return run_catalog_synth(g, cp);
    if (sim->parsed()) return run_simulate(g, so);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cerr << app.help();
  return 2;
}
