#include "lecmeta/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "lecmeta/errors.hpp"

namespace lecmeta::pipeline {

namespace {

using nlohmann::json;

std::string getenv_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

}  // namespace

void apply_env(PipelineConfig& config) {
  config.catalog_path = getenv_or("LECMETA_CATALOG", config.catalog_path);
  config.tools.ffmpeg = getenv_or("LECMETA_FFMPEG", config.tools.ffmpeg);
  config.tools.ffprobe = getenv_or("LECMETA_FFPROBE", config.tools.ffprobe);
  config.tesseract_path = getenv_or("LECMETA_TESSERACT", config.tesseract_path);
}

void apply_config_file(PipelineConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config file must hold a JSON object");

  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    try {
      if (key == "strategy")
        config.strategy = keyframe::strategy_from_name(v.get<std::string>());
      else if (key == "interval_s") config.interval_s = v.get<double>();
      else if (key == "diff_threshold") config.diff_threshold = v.get<double>();
      else if (key == "window") config.window = v.get<int>();
      else if (key == "hash_threshold") config.hash_threshold = v.get<int>();
      else if (key == "brightness_floor") config.brightness_floor = v.get<double>();
      else if (key == "probe_report") config.probe_report = v.get<std::string>();
      else if (key == "engine") config.engine = v.get<std::string>();
      else if (key == "fixture_file") config.fixture_file = v.get<std::string>();
      else if (key == "tesseract_path") config.tesseract_path = v.get<std::string>();
      else if (key == "ocr_max_inflight") config.ocr_max_inflight = v.get<int>();
      else if (key == "preprocess") config.preprocess = v.get<std::string>();
      else if (key == "lexicon_dir") config.lexicon_dir = v.get<std::string>();
      else if (key == "match_threshold") config.match_threshold = v.get<double>();
      else if (key == "recognizer") config.recognizer = v.get<std::string>();
      else if (key == "catalog") config.catalog_path = v.get<std::string>();
      else if (key == "workers") config.workers = v.get<int>();
      else if (key == "decode_fps") config.decode_fps = v.get<double>();
      else if (key == "ffmpeg_path") config.tools.ffmpeg = v.get<std::string>();
      else if (key == "ffprobe_path") config.tools.ffprobe = v.get<std::string>();
      else throw config_error("unknown config key: " + key);
    } catch (const json::exception& e) {
      throw config_error("bad value for config key '" + key + "': " + e.what());
    }
  }
}

void validate(const PipelineConfig& config) {
  if (!(config.interval_s > 0)) throw config_error("interval_s must be > 0");
  if (!(config.diff_threshold > 0) || config.diff_threshold > 255)
    throw config_error("diff_threshold must be in (0,255]");
  if (config.window < 2) throw config_error("window must be >= 2");
  if (config.hash_threshold < 0 || config.hash_threshold > 64)
    throw config_error("hash_threshold must be in [0,64]");
  if (config.brightness_floor < 0 || config.brightness_floor > 255)
    throw config_error("brightness_floor must be in [0,255]");
  if (config.engine != "tesseract" && config.engine != "fixture")
    throw config_error("engine must be 'tesseract' or 'fixture'");
  if (config.engine == "fixture" && config.fixture_file.empty())
    throw config_error("fixture engine needs a fixture_file");
  if (config.ocr_max_inflight < 1)
    throw config_error("ocr_max_inflight must be >= 1");
  if (config.match_threshold < 0 || config.match_threshold > 100)
    throw config_error("match_threshold must be in [0,100]");
  if (config.recognizer != "rules" && config.recognizer != "external")
    throw config_error("recognizer must be 'rules' or 'external'");
  if (config.workers < 0) throw config_error("workers must be >= 0");
  if (config.decode_fps < 0) throw config_error("decode_fps must be >= 0");
  ocr::parse_preprocess_spec(config.preprocess);  // throws on bad steps
}

void DiagnosticsLog::emit(
    const std::string& event,
    const std::vector<std::pair<std::string, std::string>>& fields) {
  if (!out_) return;
  json j;
  j["event"] = event;
  for (const auto& [k, v] : fields) j[k] = v;
  std::lock_guard<std::mutex> lock(mutex_);
  (*out_) << j.dump() << '\n';
  out_->flush();
}

EngineProvider::EngineProvider(const PipelineConfig& config) {
  if (config.engine == "fixture") {
    fixture_ = std::make_shared<ocr::FixtureEngine>(
        ocr::FixtureEngine::load(config.fixture_file));
    engine_id_ = fixture_->id();
  } else {
    shared_ = std::make_shared<ocr::TesseractEngine>(config.tesseract_path,
                                                     config.ocr_max_inflight);
    shared_->probe();  // absence is a configuration error, not per-frame
    engine_id_ = shared_->id();
  }
}

std::shared_ptr<ocr::OcrEngine> EngineProvider::engine_for(
    const std::string& video_id) const {
  if (fixture_)
    return std::make_shared<ocr::FixtureEngine>(fixture_->for_video(video_id));
  return shared_;
}

std::unique_ptr<extraction::NameRecognizer> make_recognizer(
    const PipelineConfig& config) {
  if (config.recognizer == "rules")
    return std::make_unique<extraction::RuleBasedRecognizer>();
  throw config_error(
      "recognizer 'external' is a hook without a bundled implementation; "
      "configure 'rules'");
}

extraction::Lexicons load_lexicons(const PipelineConfig& config) {
  extraction::Lexicons lex;
  if (config.lexicon_dir.empty()) {
    lex.publisher = matching::default_lexicon(matching::Category::publisher);
    lex.institute = matching::default_lexicon(matching::Category::institute);
    lex.department = matching::default_lexicon(matching::Category::department);
    return lex;
  }
  namespace fs = std::filesystem;
  auto load = [&](const char* name, matching::Category cat) {
    fs::path p = fs::path(config.lexicon_dir) / (std::string(name) + ".json");
    matching::Lexicon l = matching::load_lexicon(p.string());
    if (l.category != cat)
      throw config_error(std::string("lexicon file ") + p.string() +
                         " declares the wrong category");
    return l;
  };
  lex.publisher = load("publisher", matching::Category::publisher);
  lex.institute = load("institute", matching::Category::institute);
  lex.department = load("department", matching::Category::department);
  return lex;
}

keyframe::KeyframeSet select_keyframes(
    std::span<const frames::FrameBuffer> stream, const PipelineConfig& config,
    const std::string& video_path) {
  switch (config.strategy) {
    case keyframe::Strategy::interval:
      return keyframe::sample_every(stream, config.interval_s);
    case keyframe::Strategy::pixel_diff:
      return keyframe::pixel_diff_keyframes(stream, config.diff_threshold);
    case keyframe::Strategy::iframe: {
      keyframe::ProbeReport report;
      if (!config.probe_report.empty()) {
        std::ifstream in(config.probe_report, std::ios::binary);
        if (!in)
          throw config_error("cannot open probe report: " + config.probe_report);
        std::ostringstream ss;
        ss << in.rdbuf();
        report = keyframe::parse_probe_csv(ss.str());
      } else {
        report = media::probe_frames(video_path, config.tools);
      }
      return keyframe::select_iframes(report);
    }
    case keyframe::Strategy::cluster: {
      keyframe::ClusterParams params;
      params.window = config.window;
      params.hash_threshold = config.hash_threshold;
      params.brightness_floor = config.brightness_floor;
      return keyframe::cluster_keyframes(stream, params);
    }
  }
  throw config_error("unhandled keyframe strategy");
}

catalog::VideoRecord process_video(const VideoTask& task,
                                   const PipelineConfig& config,
                                   const EngineProvider& engines,
                                   const extraction::Lexicons& lexicons,
                                   DiagnosticsLog& log) {
  const std::string video_id =
      task.id ? *task.id : catalog::content_video_id(task.path);
  log.emit("video_start", {{"video_id", video_id}, {"path", task.path}});

  media::DecodeOptions decode_opts;
  decode_opts.tools = config.tools;
  // The iframe strategy addresses frames by their ordinal in the full
  // stream, so it decodes at the native rate.
  decode_opts.fps =
      config.strategy == keyframe::Strategy::iframe ? 0.0 : config.decode_fps;
  std::vector<frames::FrameBuffer> stream = media::decode_frames(task.path, decode_opts);

  keyframe::KeyframeSet keys = select_keyframes(stream, config, task.path);
  log.emit("keyframes_selected",
           {{"video_id", video_id},
            {"strategy", keyframe::strategy_name(keys.strategy)},
            {"count", std::to_string(keys.entries.size())}});

  auto engine = engines.engine_for(video_id);
  auto recognizer = make_recognizer(config);
  auto steps = ocr::parse_preprocess_spec(config.preprocess);

  std::vector<extraction::AttributeSet> per_frame;
  for (const auto& entry : keys.entries) {
    const frames::FrameBuffer* frame = nullptr;
    for (const auto& f : stream)
      if (f.frame_index == entry.frame_index) {
        frame = &f;
        break;
      }
    if (!frame) {
      // Probe-selected index outside the decoded stream; skip it.
      log.emit("keyframe_missing", {{"video_id", video_id},
                                    {"frame", std::to_string(entry.frame_index)}});
      continue;
    }
    ocr::OcrResult text = ocr::recognize(*engine, *frame, steps);
    log.emit("frame_ocr", {{"video_id", video_id},
                           {"frame", std::to_string(entry.frame_index)},
                           {"lines", std::to_string(text.lines.size())}});
    std::string recognizer_note;
    extraction::AttributeSet set = extraction::extract_frame_attributes(
        text, lexicons, config.match_threshold, *recognizer, &recognizer_note);
    if (!recognizer_note.empty())
      log.emit("recognizer_degraded",
               {{"video_id", video_id}, {"note", recognizer_note}});
    per_frame.push_back(std::move(set));
  }

  catalog::VideoRecord record;
  record.video_id = video_id;
  record.source = task.source_label.empty() ? task.path : task.source_label;
  record.attributes = extraction::merge_frames(per_frame);
  record.keyframe_strategy = keyframe::strategy_name(keys.strategy);
  record.engine_id = engines.engine_id();
  record.processed_at = catalog::utc_timestamp();
  if (auto d = media::probe_duration(task.path, config.tools))
    record.duration_s = *d;
  else if (!stream.empty())
    record.duration_s = stream.back().timestamp_s;

  std::set<long> used;
  auto note_used = [&](const std::optional<extraction::AttributeValue>& a,
                       const char* name) {
    if (!a) return;
    used.insert(a->source_frame);
    log.emit("attribute", {{"video_id", video_id},
                           {"name", name},
                           {"value", a->value},
                           {"score", std::to_string(a->score)},
                           {"frame", std::to_string(a->source_frame)},
                           {"line", std::to_string(a->source_line)}});
  };
  note_used(record.attributes.publisher, "publisher");
  note_used(record.attributes.institute, "institute");
  note_used(record.attributes.department, "department");
  note_used(record.attributes.professor, "professor");
  record.keyframes_used.assign(used.begin(), used.end());

  int present = (record.attributes.publisher ? 1 : 0) +
                (record.attributes.institute ? 1 : 0) +
                (record.attributes.department ? 1 : 0) +
                (record.attributes.professor ? 1 : 0);
  log.emit("video_done", {{"video_id", video_id},
                          {"attributes", std::to_string(present)}});
  return record;
}

namespace {

bool needs_media_tool(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext != ".y4m";
}

}  // namespace

BatchResult run_extract_batch(const std::vector<VideoTask>& tasks,
                              const PipelineConfig& config,
                              catalog::Catalog& cat, DiagnosticsLog& log) {
  EngineProvider engines(config);
  extraction::Lexicons lexicons = load_lexicons(config);

  // A missing decode tool is an environment error for the whole batch, not
  // a per-video failure.
  bool any_needs_tool =
      std::any_of(tasks.begin(), tasks.end(),
                  [](const VideoTask& t) { return needs_media_tool(t.path); });
  if (any_needs_tool && !media::ffmpeg_available(config.tools))
    throw config_error("media tool '" + config.tools.ffmpeg +
                       "' not found and the batch contains non-y4m inputs");

  int workers = config.workers;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, config.ocr_max_inflight);
  }
  workers = std::min<int>(workers, static_cast<int>(tasks.size()));
  if (workers < 1) workers = 1;

  BatchResult result;
  std::mutex sink_mutex;  // serializes catalog writes and result updates
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        catalog::VideoRecord record =
            process_video(tasks[i], config, engines, lexicons, log);
        std::lock_guard<std::mutex> lock(sink_mutex);
        cat.upsert(record);
        ++result.processed;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(sink_mutex);
        ++result.failed;
        result.failures.push_back(tasks[i].path + ": " + e.what());
        log.emit("video_failed", {{"path", tasks[i].path}, {"error", e.what()}});
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return result;
}

}  // namespace lecmeta::pipeline
