#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lecmeta/catalog.hpp"
#include "lecmeta/errors.hpp"
#include "lecmeta/evalsuite.hpp"
#include "lecmeta/ingest.hpp"
#include "lecmeta/matching.hpp"
#include "lecmeta/pipeline.hpp"
#include "lecmeta/png_io.hpp"
#include "lecmeta/subprocess.hpp"

namespace fs = std::filesystem;
using namespace lecmeta;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;   // some videos in a batch failed
constexpr int kExitConfig = 2;    // configuration / environment error

struct CommonOptions {
  std::string config_file;
  pipeline::PipelineConfig config;
};

// flags > config file > environment > defaults
void add_pipeline_flags(CLI::App* cmd, CommonOptions& opts) {
  pipeline::apply_env(opts.config);
  cmd->add_option("--config", opts.config_file, "JSON config file");

  auto& c = opts.config;
  cmd->add_option_function<std::string>(
         "--strategy",
         [&c](const std::string& v) { c.strategy = keyframe::strategy_from_name(v); },
         "Keyframe strategy: interval|pixel-diff|iframe|cluster")
      ->type_name("NAME");
  cmd->add_option("--interval", c.interval_s, "Sampling interval in seconds");
  cmd->add_option("--diff-threshold", c.diff_threshold,
                  "Pixel-diff selection threshold");
  cmd->add_option("--window", c.window, "Candidate window (cluster strategy)");
  cmd->add_option("--hash-threshold", c.hash_threshold,
                  "Max Hamming distance within a cluster");
  cmd->add_option("--brightness-floor", c.brightness_floor,
                  "Minimum mean gray for best-frame selection");
  cmd->add_option("--probe-report", c.probe_report,
                  "Frozen probe CSV (iframe strategy without the probe tool)");
  cmd->add_option("--engine", c.engine, "OCR engine: tesseract|fixture");
  cmd->add_option("--fixture-file", c.fixture_file, "Fixture engine script");
  cmd->add_option("--tesseract-path", c.tesseract_path, "OCR engine binary");
  cmd->add_option("--ocr-max-inflight", c.ocr_max_inflight,
                  "Max concurrent OCR subprocesses");
  cmd->add_option("--preprocess", c.preprocess,
                  "Comma list of binarize|gaussian_blur:S|edge_map");
  cmd->add_option("--lexicon-dir", c.lexicon_dir,
                  "Directory with publisher/institute/department.json");
  cmd->add_option("--match-threshold", c.match_threshold,
                  "Fuzzy match acceptance threshold");
  cmd->add_option("--recognizer", c.recognizer, "Name recognizer: rules|external");
  cmd->add_option("--catalog", c.catalog_path, "Catalog file path");
  cmd->add_option("--workers", c.workers, "Worker count (0 = auto)");
  cmd->add_option("--decode-fps", c.decode_fps, "Decode rate (frames/second)");
  cmd->add_option("--ffmpeg-path", c.tools.ffmpeg, "Media tool binary");
  cmd->add_option("--ffprobe-path", c.tools.ffprobe, "Stream probe binary");
}

// Re-applies flag values on top of the config file so flags keep the last
// word; CLI11 already parsed them into defaults, so only the file needs
// folding in underneath.
void finalize_config(CLI::App* cmd, CommonOptions& opts) {
  if (!opts.config_file.empty()) {
    pipeline::PipelineConfig file_config = opts.config;
    pipeline::apply_config_file(file_config, opts.config_file);
    pipeline::PipelineConfig merged = file_config;
    // CLI11 wrote flag values straight into opts.config. Start from the
    // file config and copy back any field whose flag was actually given,
    // so flags keep the last word.
    auto replay = [&](const char* flag, auto member) {
      if (cmd->count(flag)) merged.*member = opts.config.*member;
    };
    replay("--interval", &pipeline::PipelineConfig::interval_s);
    replay("--diff-threshold", &pipeline::PipelineConfig::diff_threshold);
    replay("--window", &pipeline::PipelineConfig::window);
    replay("--hash-threshold", &pipeline::PipelineConfig::hash_threshold);
    replay("--brightness-floor", &pipeline::PipelineConfig::brightness_floor);
    replay("--probe-report", &pipeline::PipelineConfig::probe_report);
    replay("--engine", &pipeline::PipelineConfig::engine);
    replay("--fixture-file", &pipeline::PipelineConfig::fixture_file);
    replay("--tesseract-path", &pipeline::PipelineConfig::tesseract_path);
    replay("--ocr-max-inflight", &pipeline::PipelineConfig::ocr_max_inflight);
    replay("--preprocess", &pipeline::PipelineConfig::preprocess);
    replay("--lexicon-dir", &pipeline::PipelineConfig::lexicon_dir);
    replay("--match-threshold", &pipeline::PipelineConfig::match_threshold);
    replay("--recognizer", &pipeline::PipelineConfig::recognizer);
    replay("--catalog", &pipeline::PipelineConfig::catalog_path);
    replay("--workers", &pipeline::PipelineConfig::workers);
    replay("--decode-fps", &pipeline::PipelineConfig::decode_fps);
    if (cmd->count("--strategy")) merged.strategy = opts.config.strategy;
    if (cmd->count("--ffmpeg-path")) merged.tools.ffmpeg = opts.config.tools.ffmpeg;
    if (cmd->count("--ffprobe-path")) merged.tools.ffprobe = opts.config.tools.ffprobe;
    opts.config = merged;
  }
  pipeline::validate(opts.config);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write: " + out_path);
  out << content;
}

std::vector<pipeline::VideoTask> collect_tasks(const std::vector<std::string>& inputs,
                                               const std::string& manifest_path,
                                               const std::string& video_dir) {
  std::vector<pipeline::VideoTask> tasks;
  for (const auto& input : inputs)
    tasks.push_back({input, input, std::nullopt});
  if (!manifest_path.empty()) {
    auto entries = ingest::parse_manifest(read_file(manifest_path));
    ingest::NullFetcher fetcher;
    for (const auto& e : entries) {
      pipeline::VideoTask t;
      std::string resolved = ingest::resolve_source(e, fetcher);
      if (!video_dir.empty() && !fs::path(resolved).is_absolute() &&
          !fs::exists(resolved))
        resolved = (fs::path(video_dir) / resolved).string();
      t.path = resolved;
      t.source_label = e.url_or_path;
      t.id = e.id;
      tasks.push_back(std::move(t));
    }
  }
  return tasks;
}

int cmd_keyframes(CommonOptions& opts, const std::string& video_path,
                  const std::string& out_dir) {
  media::DecodeOptions decode_opts;
  decode_opts.tools = opts.config.tools;
  decode_opts.fps = opts.config.strategy == keyframe::Strategy::iframe
                        ? 0.0
                        : opts.config.decode_fps;
  auto stream = media::decode_frames(video_path, decode_opts);
  auto keys = pipeline::select_keyframes(stream, opts.config, video_path);

  const std::string video_id = catalog::content_video_id(video_path);
  if (!out_dir.empty()) fs::create_directories(out_dir);
  int written = 0;
  for (const auto& entry : keys.entries) {
    const frames::FrameBuffer* frame = nullptr;
    for (const auto& f : stream)
      if (f.frame_index == entry.frame_index) {
        frame = &f;
        break;
      }
    std::string file;
    if (frame && !out_dir.empty()) {
      file = (fs::path(out_dir) /
              (video_id + "_" + std::to_string(entry.frame_index) + ".png"))
                 .string();
      png_io::write_png(file, *frame);
      ++written;
    }
    std::cout << "keyframe index=" << entry.frame_index << " t="
              << entry.timestamp_s << " reason="
              << keyframe::selection_reason_name(entry.reason)
              << (file.empty() ? "" : " file=" + file) << "\n";
  }
  std::cout << "selected " << keys.entries.size() << " keyframes ("
            << keyframe::strategy_name(keys.strategy) << ")"
            << (out_dir.empty() ? "" : ", wrote " + std::to_string(written) + " PNGs")
            << "\n";
  return kExitOk;
}

int cmd_extract(CommonOptions& opts, const std::vector<std::string>& inputs,
                const std::string& manifest_path, const std::string& video_dir,
                const std::string& log_path) {
  auto tasks = collect_tasks(inputs, manifest_path, video_dir);
  if (tasks.empty()) throw config_error("no inputs: pass video files or --manifest");

  std::ofstream log_file;
  std::ostream* log_stream = &std::cerr;
  if (!log_path.empty()) {
    log_file.open(log_path, std::ios::binary | std::ios::trunc);
    if (!log_file) throw io_error("cannot write log file: " + log_path);
    log_stream = &log_file;
  }
  pipeline::DiagnosticsLog log(log_stream);

  catalog::Catalog cat(opts.config.catalog_path);
  pipeline::BatchResult result =
      pipeline::run_extract_batch(tasks, opts.config, cat, log);

  std::cout << "processed " << result.processed << " of " << tasks.size()
            << " videos";
  if (result.failed) std::cout << ", " << result.failed << " failed";
  std::cout << "\n";
  for (const auto& f : result.failures) std::cerr << "failed: " << f << "\n";
  return result.failed == 0 ? kExitOk : kExitPartial;
}

int cmd_query(CommonOptions& opts, const std::string& attribute,
              const std::string& value, std::optional<double> fuzzy,
              const std::string& out_path) {
  catalog::Catalog cat(opts.config.catalog_path);
  auto rows = cat.query(attribute, value, fuzzy);
  std::string out;
  for (const auto& r : rows) {
    const auto& a = r.attributes;
    auto cell = [](const std::optional<extraction::AttributeValue>& v) {
      return v ? v->value : std::string();
    };
    out += r.video_id + "\t" + r.source + "\t" + cell(a.publisher) + "\t" +
           cell(a.institute) + "\t" + cell(a.department) + "\t" +
           cell(a.professor) + "\n";
  }
  write_output(out_path, out);
  std::cerr << rows.size() << " record(s)\n";
  return kExitOk;
}

int cmd_export(CommonOptions& opts, const std::string& format,
               const std::string& out_path) {
  catalog::Catalog cat(opts.config.catalog_path);
  if (format == "csv") write_output(out_path, cat.export_csv());
  else if (format == "json") write_output(out_path, cat.export_json());
  else throw config_error("export format must be csv or json");
  return kExitOk;
}

int cmd_eval(CommonOptions& opts, const std::vector<std::string>& catalog_paths,
             const std::string& truth_path, const std::string& mode,
             double fuzzy_threshold, const std::string& format,
             const std::string& out_path) {
  std::vector<catalog::VideoRecord> predictions;
  std::vector<std::string> paths = catalog_paths;
  if (paths.empty()) paths.push_back(opts.config.catalog_path);
  for (const auto& p : paths) {
    catalog::Catalog cat(p);
    for (const auto& [id, r] : cat.records()) predictions.push_back(r);
  }

  evalsuite::ScoringMode scoring;
  if (mode == "exact") scoring = evalsuite::ScoringMode::exact();
  else if (mode == "fuzzy") scoring = evalsuite::ScoringMode::fuzzy_at(fuzzy_threshold);
  else throw config_error("eval mode must be exact or fuzzy");

  auto truth = evalsuite::load_ground_truth(truth_path);
  evalsuite::EvalReport report = evalsuite::score(predictions, truth, scoring);
  if (format == "csv") write_output(out_path, evalsuite::render_report_csv(report));
  else if (format == "table")
    write_output(out_path, evalsuite::render_report_text(report));
  else throw config_error("eval format must be table or csv");
  return kExitOk;
}

int cmd_ingest(CommonOptions& opts, const std::string& manifest_path,
               const std::string& video_dir, const std::string& out_dir,
               bool run_trim) {
  auto entries = ingest::parse_manifest(read_file(manifest_path));
  ingest::NullFetcher fetcher;
  int failures = 0;
  for (const auto& e : entries) {
    std::string resolved;
    try {
      resolved = ingest::resolve_source(e, fetcher);
    } catch (const std::exception& ex) {
      std::cerr << "skip " << e.id << ": " << ex.what() << "\n";
      ++failures;
      continue;
    }
    if (!video_dir.empty() && !fs::path(resolved).is_absolute() &&
        !fs::exists(resolved))
      resolved = (fs::path(video_dir) / resolved).string();
    try {
      auto args = ingest::trim_args(e, resolved, out_dir.empty() ? "." : out_dir);
      std::cout << opts.config.tools.ffmpeg;
      for (const auto& a : args) std::cout << " " << a;
      std::cout << "\n";
      if (run_trim) {
        std::vector<std::string> argv{opts.config.tools.ffmpeg, "-y"};
        argv.insert(argv.end(), args.begin(), args.end());
        auto r = subprocess::run_capture(argv);
        if (r.exit_code != 0) {
          std::cerr << "trim failed for " << e.id << " (exit "
                    << r.exit_code << ")\n";
          ++failures;
        }
      }
    } catch (const std::exception& ex) {
      std::cerr << "skip " << e.id << ": " << ex.what() << "\n";
      ++failures;
    }
  }
  return failures == 0 ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lecture-video metadata extraction and indexing"};
  app.require_subcommand(1);

  CommonOptions opts;

  // keyframes
  auto* keyframes_cmd =
      app.add_subcommand("keyframes", "Extract keyframes from one video");
  std::string kf_video, kf_out_dir;
  keyframes_cmd->add_option("video", kf_video, "Input video")->required();
  keyframes_cmd->add_option("--out-dir", kf_out_dir, "Directory for keyframe PNGs");
  add_pipeline_flags(keyframes_cmd, opts);

  // extract
  auto* extract_cmd =
      app.add_subcommand("extract", "Run the full pipeline and update the catalog");
  std::vector<std::string> ex_inputs;
  std::string ex_manifest, ex_video_dir, ex_log;
  extract_cmd->add_option("videos", ex_inputs, "Input video files");
  extract_cmd->add_option("--manifest", ex_manifest, "Clip manifest CSV");
  extract_cmd->add_option("--video-dir", ex_video_dir,
                          "Directory for relative manifest paths");
  extract_cmd->add_option("--log", ex_log, "Diagnostics JSON-lines file");
  add_pipeline_flags(extract_cmd, opts);

  // query
  auto* query_cmd = app.add_subcommand("query", "Look up catalog records");
  std::string q_attr, q_value, q_out;
  double q_fuzzy = -1.0;
  query_cmd->add_option("attribute", q_attr,
                        "publisher|institute|department|professor")->required();
  query_cmd->add_option("value", q_value, "Value to match")->required();
  query_cmd->add_option("--fuzzy", q_fuzzy, "Fuzzy ratio threshold (0-100)");
  query_cmd->add_option("--out", q_out, "Write results to a file");
  add_pipeline_flags(query_cmd, opts);

  // export
  auto* export_cmd = app.add_subcommand("export", "Export the catalog");
  std::string exp_format = "csv", exp_out;
  export_cmd->add_option("--format", exp_format, "csv|json");
  export_cmd->add_option("--out", exp_out, "Write to a file");
  add_pipeline_flags(export_cmd, opts);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score the catalog against ground truth");
  std::vector<std::string> ev_catalogs;
  std::string ev_truth, ev_mode = "exact", ev_format = "table", ev_out;
  double ev_fuzzy = 90.0;
  eval_cmd->add_option("--truth", ev_truth, "Ground-truth CSV")->required();
  eval_cmd->add_option("--catalog-file", ev_catalogs,
                       "Catalog file(s); default: the configured catalog");
  eval_cmd->add_option("--mode", ev_mode, "exact|fuzzy");
  eval_cmd->add_option("--fuzzy-threshold", ev_fuzzy, "Fuzzy scoring threshold");
  eval_cmd->add_option("--format", ev_format, "table|csv");
  eval_cmd->add_option("--out", ev_out, "Write report to a file");
  add_pipeline_flags(eval_cmd, opts);

  // ingest
  auto* ingest_cmd =
      app.add_subcommand("ingest", "Resolve a manifest and emit trim commands");
  std::string in_manifest, in_video_dir, in_out_dir;
  bool in_run = false;
  ingest_cmd->add_option("--manifest", in_manifest, "Clip manifest CSV")->required();
  ingest_cmd->add_option("--video-dir", in_video_dir,
                         "Directory for relative manifest paths");
  ingest_cmd->add_option("--out-dir", in_out_dir, "Trim output directory");
  ingest_cmd->add_flag("--run", in_run, "Execute the trim commands");
  add_pipeline_flags(ingest_cmd, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    finalize_config(active, opts);

    if (active == keyframes_cmd) return cmd_keyframes(opts, kf_video, kf_out_dir);
    if (active == extract_cmd)
      return cmd_extract(opts, ex_inputs, ex_manifest, ex_video_dir, ex_log);
    if (active == query_cmd)
      return cmd_query(opts, q_attr, q_value,
                       q_fuzzy >= 0 ? std::optional<double>(q_fuzzy) : std::nullopt,
                       q_out);
    if (active == export_cmd) return cmd_export(opts, exp_format, exp_out);
    if (active == eval_cmd)
      return cmd_eval(opts, ev_catalogs, ev_truth, ev_mode, ev_fuzzy, ev_format,
                      ev_out);
    if (active == ingest_cmd)
      return cmd_ingest(opts, in_manifest, in_video_dir, in_out_dir, in_run);
    throw config_error("no subcommand selected");
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartial;
  }
}
