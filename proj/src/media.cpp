#include "lecmeta/media.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lecmeta/errors.hpp"
#include "lecmeta/subprocess.hpp"

namespace lecmeta::media {

namespace {

struct ByteSource {
  virtual ~ByteSource() = default;
  virtual bool read_exact(void* buf, size_t n) = 0;
  virtual bool read_line(std::string& line) = 0;
};

struct FileSource : ByteSource {
  std::ifstream in;
  explicit FileSource(const std::string& path) : in(path, std::ios::binary) {
    if (!in) throw io_error("cannot open: " + path);
  }
  bool read_exact(void* buf, size_t n) override {
    in.read(static_cast<char*>(buf), static_cast<std::streamsize>(n));
    return static_cast<size_t>(in.gcount()) == n;
  }
  bool read_line(std::string& line) override {
    line.clear();
    if (!std::getline(in, line)) return false;
    line += '\n';
    return true;
  }
};

struct PipeSource : ByteSource {
  subprocess::ChildReader reader;
  explicit PipeSource(const std::vector<std::string>& argv)
      : reader(argv, /*quiet_stderr=*/false) {}
  bool read_exact(void* buf, size_t n) override { return reader.read_exact(buf, n); }
  bool read_line(std::string& line) override { return reader.read_line(line); }
};

struct Y4mGeometry {
  int width = 0;
  int height = 0;
  long fps_num = 25;
  long fps_den = 1;
  size_t luma_bytes = 0;
  size_t chroma_bytes = 0;
};

Y4mGeometry parse_y4m_signature(const std::string& header) {
  if (header.rfind("YUV4MPEG2", 0) != 0)
    throw io_error("not a YUV4MPEG2 stream");
  Y4mGeometry geo;
  std::string colorspace = "420jpeg";  // y4m default when C is absent
  std::istringstream ss(header.substr(9));
  std::string tag;
  while (ss >> tag) {
    switch (tag[0]) {
      case 'W': geo.width = std::stoi(tag.substr(1)); break;
      case 'H': geo.height = std::stoi(tag.substr(1)); break;
      case 'F': {
        size_t colon = tag.find(':');
        if (colon == std::string::npos)
          throw io_error("bad frame rate tag in y4m header: " + tag);
        geo.fps_num = std::stol(tag.substr(1, colon - 1));
        geo.fps_den = std::stol(tag.substr(colon + 1));
        break;
      }
      case 'C': colorspace = tag.substr(1); break;
      default: break;  // I, A, X tags don't affect decoding
    }
  }
  if (geo.width <= 0 || geo.height <= 0)
    throw io_error("y4m header without valid dimensions");
  if (geo.fps_num <= 0 || geo.fps_den <= 0)
    throw io_error("y4m header with invalid frame rate");
  const size_t w = geo.width, h = geo.height;
  geo.luma_bytes = w * h;
  if (colorspace.rfind("mono", 0) == 0) geo.chroma_bytes = 0;
  else if (colorspace.rfind("420", 0) == 0)
    geo.chroma_bytes = 2 * ((w + 1) / 2) * ((h + 1) / 2);
  else if (colorspace.rfind("422", 0) == 0)
    geo.chroma_bytes = 2 * ((w + 1) / 2) * h;
  else if (colorspace.rfind("444", 0) == 0)
    geo.chroma_bytes = 2 * w * h;
  else
    throw io_error("unsupported y4m colorspace: " + colorspace);
  return geo;
}

std::vector<frames::FrameBuffer> parse_y4m(ByteSource& src) {
  std::string header;
  if (!src.read_line(header)) throw io_error("empty y4m stream");
  while (!header.empty() && (header.back() == '\n' || header.back() == '\r'))
    header.pop_back();
  Y4mGeometry geo = parse_y4m_signature(header);

  std::vector<frames::FrameBuffer> out;
  std::vector<std::uint8_t> chroma(geo.chroma_bytes);
  std::string frame_line;
  long index = 0;
  while (src.read_line(frame_line)) {
    if (frame_line.rfind("FRAME", 0) != 0)
      throw io_error("malformed y4m frame marker");
    frames::FrameBuffer f = frames::make_frame(
        geo.width, geo.height, 1, index,
        static_cast<double>(index) * geo.fps_den / geo.fps_num);
    if (!src.read_exact(f.data.data(), geo.luma_bytes))
      throw io_error("truncated y4m frame " + std::to_string(index));
    if (geo.chroma_bytes &&
        !src.read_exact(chroma.data(), geo.chroma_bytes))
      throw io_error("truncated y4m chroma in frame " + std::to_string(index));
    out.push_back(std::move(f));
    ++index;
  }
  return out;
}

bool has_extension(const std::string& path, const char* ext) {
  auto e = std::filesystem::path(path).extension().string();
  for (auto& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return e == ext;
}

}  // namespace

std::vector<frames::FrameBuffer> read_y4m(const std::string& path) {
  FileSource src(path);
  return parse_y4m(src);
}

void write_y4m(const std::string& path,
               const std::vector<frames::FrameBuffer>& frames_seq,
               long fps_num, long fps_den) {
  if (frames_seq.empty()) throw error("write_y4m needs at least one frame");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path);
  const int w = frames_seq.front().width, h = frames_seq.front().height;
  out << "YUV4MPEG2 W" << w << " H" << h << " F" << fps_num << ":" << fps_den
      << " Ip A1:1 Cmono\n";
  for (const auto& f : frames_seq) {
    if (f.width != w || f.height != h)
      throw error("write_y4m frames must share dimensions");
    const frames::FrameBuffer gray = frames::to_grayscale(f);
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(gray.data.data()),
              static_cast<std::streamsize>(gray.data.size()));
  }
  if (!out) throw io_error("failed writing y4m: " + path);
}

bool ffmpeg_available(const ToolPaths& tools) {
  return subprocess::binary_available(tools.ffmpeg, {"-version"});
}

bool ffprobe_available(const ToolPaths& tools) {
  return subprocess::binary_available(tools.ffprobe, {"-version"});
}

std::vector<frames::FrameBuffer> decode_frames(const std::string& video_path,
                                               const DecodeOptions& options) {
  if (!std::filesystem::exists(video_path))
    throw io_error("video file does not exist: " + video_path);
  if (has_extension(video_path, ".y4m")) return read_y4m(video_path);

  if (!ffmpeg_available(options.tools))
    throw config_error("media tool '" + options.tools.ffmpeg +
                       "' not found; cannot decode " + video_path);

  std::vector<std::string> argv{options.tools.ffmpeg, "-v", "error", "-i",
                                video_path};
  if (options.fps > 0) {
    char fps[32];
    std::snprintf(fps, sizeof fps, "fps=%g", options.fps);
    argv.insert(argv.end(), {"-vf", fps});
  }
  argv.insert(argv.end(), {"-pix_fmt", "gray", "-f", "yuv4mpegpipe", "-"});

  PipeSource src(argv);
  std::vector<frames::FrameBuffer> frames_seq;
  std::string decode_failure;
  try {
    frames_seq = parse_y4m(src);
  } catch (const io_error& e) {
    decode_failure = e.what();
  }
  int exit_code = src.reader.close();
  if (exit_code != 0 || !decode_failure.empty() || frames_seq.empty())
    throw io_error("decode failed for " + video_path +
                   (decode_failure.empty() ? "" : ": " + decode_failure) +
                   " (media tool exit code " + std::to_string(exit_code) + ")");
  return frames_seq;
}

std::optional<double> probe_duration(const std::string& video_path,
                                     const ToolPaths& tools) {
  if (has_extension(video_path, ".y4m")) {
    auto frames_seq = read_y4m(video_path);
    if (frames_seq.size() < 2) return frames_seq.empty() ? 0.0 : 1.0;
    double step = frames_seq[1].timestamp_s - frames_seq[0].timestamp_s;
    return frames_seq.back().timestamp_s + step;
  }
  if (!ffprobe_available(tools)) return std::nullopt;
  auto r = subprocess::run_capture(
      {tools.ffprobe, "-v", "error", "-show_entries", "format=duration", "-of",
       "csv=p=0", video_path},
      /*quiet_stderr=*/true);
  if (r.exit_code != 0) return std::nullopt;
  try {
    return std::stod(r.output);
  } catch (...) {
    return std::nullopt;
  }
}

keyframe::ProbeReport probe_frames(const std::string& video_path,
                                   const ToolPaths& tools) {
  if (!ffprobe_available(tools))
    throw config_error("stream probe tool '" + tools.ffprobe +
                       "' not found; pass a probe report file instead");
  auto r = subprocess::run_capture(
      {tools.ffprobe, "-v", "error", "-select_streams", "v", "-show_frames",
       "-show_entries", "frame=pict_type,pts_time", "-of", "csv", video_path},
      /*quiet_stderr=*/true);
  if (r.exit_code != 0)
    throw io_error("stream probe failed for " + video_path);
  return keyframe::parse_probe_csv(r.output);
}

}  // namespace lecmeta::media
