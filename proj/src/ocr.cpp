#include "lecmeta/ocr.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <semaphore>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lecmeta/errors.hpp"
#include "lecmeta/png_io.hpp"
#include "lecmeta/subprocess.hpp"

namespace lecmeta::ocr {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string PreprocessStep::name() const {
  switch (kind) {
    case Kind::binarize: return "binarize";
    case Kind::gaussian_blur: return "gaussian_blur(" + format_double(sigma) + ")";
    case Kind::edge_map: return "edge_map";
  }
  return "?";
}

std::vector<PreprocessStep> parse_preprocess_spec(const std::string& spec) {
  std::vector<PreprocessStep> steps;
  std::string item;
  std::istringstream ss(spec);
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    PreprocessStep step;
    if (item == "binarize") {
      step.kind = PreprocessStep::Kind::binarize;
    } else if (item == "edge_map") {
      step.kind = PreprocessStep::Kind::edge_map;
    } else if (item.rfind("gaussian_blur", 0) == 0) {
      step.kind = PreprocessStep::Kind::gaussian_blur;
      step.sigma = 2.0;
      auto colon = item.find(':');
      if (colon != std::string::npos) {
        try {
          step.sigma = std::stod(item.substr(colon + 1));
        } catch (...) {
          throw config_error("bad gaussian_blur sigma in '" + item + "'");
        }
      }
      if (!(step.sigma > 0.0))
        throw config_error("gaussian_blur sigma must be > 0");
    } else {
      throw config_error("unknown preprocessing step: " + item);
    }
    steps.push_back(step);
  }
  return steps;
}

frames::FrameBuffer preprocess(const frames::FrameBuffer& f,
                               const std::vector<PreprocessStep>& steps) {
  frames::FrameBuffer out = f;
  for (const auto& step : steps) {
    switch (step.kind) {
      case PreprocessStep::Kind::binarize:
        out = frames::binarize(out);
        break;
      case PreprocessStep::Kind::gaussian_blur:
        out = frames::gaussian_blur(out, step.sigma);
        break;
      case PreprocessStep::Kind::edge_map:
        out = frames::edge_map(out);
        break;
    }
  }
  return out;
}

std::vector<OcrLine> group_lines(std::vector<OcrWord> words) {
  if (words.empty()) return {};

  // Deterministic regardless of input order.
  std::sort(words.begin(), words.end(), [](const OcrWord& a, const OcrWord& b) {
    double ca = a.bbox.top + a.bbox.height / 2.0;
    double cb = b.bbox.top + b.bbox.height / 2.0;
    if (ca != cb) return ca < cb;
    if (a.bbox.left != b.bbox.left) return a.bbox.left < b.bbox.left;
    return a.text < b.text;
  });

  std::vector<int> heights;
  heights.reserve(words.size());
  for (const auto& w : words) heights.push_back(w.bbox.height);
  std::sort(heights.begin(), heights.end());
  double half_median = heights[(heights.size() - 1) / 2] / 2.0;

  std::vector<OcrLine> lines;
  double prev_center = 0.0;
  for (const auto& w : words) {
    double center = w.bbox.top + w.bbox.height / 2.0;
    if (lines.empty() || center - prev_center >= half_median) {
      lines.emplace_back();
    }
    lines.back().words.push_back(w);
    prev_center = center;
  }

  for (auto& line : lines) {
    std::stable_sort(line.words.begin(), line.words.end(),
                     [](const OcrWord& a, const OcrWord& b) {
                       return a.bbox.left < b.bbox.left;
                     });
    int left = line.words.front().bbox.left, top = line.words.front().bbox.top;
    int right = 0, bottom = 0;
    for (const auto& w : line.words) {
      left = std::min(left, w.bbox.left);
      top = std::min(top, w.bbox.top);
      right = std::max(right, w.bbox.left + w.bbox.width);
      bottom = std::max(bottom, w.bbox.top + w.bbox.height);
      if (!line.text.empty()) line.text += ' ';
      line.text += w.text;
    }
    line.bbox = {left, top, right - left, bottom - top};
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const OcrLine& a, const OcrLine& b) {
                     return a.bbox.top < b.bbox.top;
                   });
  for (size_t i = 0; i < lines.size(); ++i)
    lines[i].line_number = static_cast<int>(i);
  return lines;
}

OcrResult recognize(OcrEngine& engine, const frames::FrameBuffer& f,
                    const std::vector<PreprocessStep>& steps) {
  OcrResult result;
  result.engine_id = engine.id();
  result.frame_index = f.frame_index;
  for (const auto& s : steps) result.preprocessing.push_back(s.name());
  const frames::FrameBuffer prepped = preprocess(f, steps);
  result.lines = group_lines(engine.recognize_words(prepped));
  return result;
}

std::vector<OcrWord> parse_engine_tsv(const std::string& raw) {
  std::vector<OcrWord> words;
  std::istringstream ss(raw);
  std::string line;
  long line_no = 0;
  bool saw_header = false;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> cols;
    size_t start = 0;
    for (;;) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (!saw_header) {
      if (cols.size() != 12 || cols[0] != "level")
        throw parse_error("unexpected TSV header", line_no);
      saw_header = true;
      continue;
    }
    if (cols.size() != 12)
      throw parse_error("TSV row has " + std::to_string(cols.size()) +
                            " columns, expected 12",
                        line_no);
    if (cols[0] != "5") continue;  // only word-level rows
    OcrWord w;
    try {
      w.bbox.left = std::stoi(cols[6]);
      w.bbox.top = std::stoi(cols[7]);
      w.bbox.width = std::stoi(cols[8]);
      w.bbox.height = std::stoi(cols[9]);
      w.confidence = std::stod(cols[10]);
    } catch (...) {
      throw parse_error("non-numeric geometry or confidence", line_no);
    }
    w.text = cols[11];
    if (w.confidence < 0) continue;  // the engine's non-word marker
    if (w.text.empty() || w.bbox.width <= 0 || w.bbox.height <= 0) continue;
    if (w.confidence > 100) w.confidence = 100;
    words.push_back(std::move(w));
  }
  return words;
}

std::string serialize_words_tsv(const std::vector<OcrWord>& words) {
  std::string out =
      "level\tpage_num\tblock_num\tpar_num\tline_num\tword_num\tleft\ttop\t"
      "width\theight\tconf\ttext\n";
  int n = 0;
  for (const auto& w : words) {
    out += "5\t1\t1\t1\t1\t" + std::to_string(++n) + "\t" +
           std::to_string(w.bbox.left) + "\t" + std::to_string(w.bbox.top) +
           "\t" + std::to_string(w.bbox.width) + "\t" +
           std::to_string(w.bbox.height) + "\t" + format_double(w.confidence) +
           "\t" + w.text + "\n";
  }
  return out;
}

FixtureEngine::FixtureEngine(std::map<long, std::vector<std::string>> frames,
                             std::string engine_id)
    : engine_id_(std::move(engine_id)), frames_(std::move(frames)) {}

FixtureEngine FixtureEngine::parse(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("invalid fixture JSON: ") + e.what());
  }
  FixtureEngine eng;
  if (j.contains("engine_id")) eng.engine_id_ = j.at("engine_id").get<std::string>();

  auto parse_frame_map = [](const nlohmann::json& obj) {
    std::map<long, std::vector<std::string>> m;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      long idx = 0;
      try {
        idx = std::stol(it.key());
      } catch (...) {
        throw config_error("fixture frame key is not an index: " + it.key());
      }
      std::vector<std::string> lines;
      for (const auto& l : it.value()) lines.push_back(l.get<std::string>());
      m.emplace(idx, std::move(lines));
    }
    return m;
  };

  if (j.contains("frames")) eng.frames_ = parse_frame_map(j.at("frames"));
  if (j.contains("videos"))
    for (auto it = j.at("videos").begin(); it != j.at("videos").end(); ++it)
      eng.videos_.emplace(it.key(), parse_frame_map(it.value()));
  return eng;
}

FixtureEngine FixtureEngine::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open fixture file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

FixtureEngine FixtureEngine::for_video(const std::string& video_id) const {
  auto it = videos_.find(video_id);
  if (it != videos_.end()) return FixtureEngine(it->second, engine_id_);
  return FixtureEngine(frames_, engine_id_);
}

std::vector<OcrWord> FixtureEngine::recognize_words(const frames::FrameBuffer& f) {
  auto it = frames_.find(f.frame_index);
  if (it == frames_.end()) return {};
  // Synthesize word boxes so the scripted lines survive line grouping
  // exactly: one row of boxes per line, 20px apart, 12px tall.
  std::vector<OcrWord> words;
  int y = 4;
  for (const auto& line : it->second) {
    int x = 4;
    for (const auto& tok : split_ws(line)) {
      OcrWord w;
      w.text = tok;
      w.bbox = {x, y, std::max<int>(8, 8 * static_cast<int>(tok.size())), 12};
      w.confidence = 99.0;
      x += w.bbox.width + 8;
      words.push_back(std::move(w));
    }
    y += 20;
  }
  return words;
}

TesseractEngine::TesseractEngine(std::string binary_path, int max_inflight)
    : binary_(std::move(binary_path)), inflight_(max_inflight < 1 ? 1 : max_inflight) {}

void TesseractEngine::probe() {
  if (!subprocess::binary_available(binary_, {"--version"}))
    throw engine_unavailable("OCR engine binary not runnable: " + binary_);
}

std::vector<OcrWord> TesseractEngine::recognize_words(const frames::FrameBuffer& f) {
  struct Release {
    std::counting_semaphore<>* sem;
    ~Release() { sem->release(); }
  };
  inflight_.acquire();
  Release release{&inflight_};

  const char* tmpdir = std::getenv("TMPDIR");
  std::string tmpl = std::string(tmpdir ? tmpdir : "/tmp") + "/lecmeta_ocr_XXXXXX.png";
  std::vector<char> path(tmpl.begin(), tmpl.end());
  path.push_back('\0');
  int fd = mkstemps(path.data(), 4);
  if (fd < 0) throw io_error("cannot create temporary image file");
  ::close(fd);
  std::string png_path(path.data());

  try {
    png_io::write_png(png_path, f);
    subprocess::RunResult r = subprocess::run_capture(
        {binary_, png_path, "stdout", "--psm", "3", "tsv"}, /*quiet_stderr=*/true);
    ::unlink(png_path.c_str());
    if (r.exit_code != 0)
      throw engine_failure("OCR engine exited with code " +
                           std::to_string(r.exit_code));
    try {
      return parse_engine_tsv(r.output);
    } catch (const parse_error& e) {
      throw engine_failure(std::string("malformed OCR engine output: ") + e.what());
    }
  } catch (...) {
    ::unlink(png_path.c_str());
    throw;
  }
}

}  // namespace lecmeta::ocr
