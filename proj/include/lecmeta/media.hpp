#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lecmeta/frames.hpp"
#include "lecmeta/keyframe.hpp"

namespace lecmeta::media {

// External tool locations; empty fields fall back to PATH lookup.
struct ToolPaths {
  std::string ffmpeg = "ffmpeg";
  std::string ffprobe = "ffprobe";
};

// Parses a YUV4MPEG2 stream: the luma plane becomes a gray frame, chroma
// planes are skipped. This is both the fixture format on disk and the
// media tool's pipe format, so one parser covers both.
std::vector<frames::FrameBuffer> read_y4m(const std::string& path);

// Writes gray frames as YUV4MPEG2 Cmono at the given frame rate.
void write_y4m(const std::string& path,
               const std::vector<frames::FrameBuffer>& frames_seq,
               long fps_num = 1, long fps_den = 1);

struct DecodeOptions {
  double fps = 1.0;   // decode rate; <= 0 decodes at the native rate
  ToolPaths tools;
};

// Decoded frame stream for any input the media tool can open; .y4m files
// are read natively so fixtures need no external tools. Decode failures
// distinguish a missing tool (config_error) from an undecodable file
// (io_error).
std::vector<frames::FrameBuffer> decode_frames(const std::string& video_path,
                                               const DecodeOptions& options);

// Stream duration in seconds. Computed from the stream itself for .y4m,
// via the probe tool otherwise; nullopt when that tool is unavailable.
std::optional<double> probe_duration(const std::string& video_path,
                                     const ToolPaths& tools);

// Runs the stream probe and parses its frame listing into a ProbeReport.
keyframe::ProbeReport probe_frames(const std::string& video_path,
                                   const ToolPaths& tools);

bool ffmpeg_available(const ToolPaths& tools);
bool ffprobe_available(const ToolPaths& tools);

}  // namespace lecmeta::media
