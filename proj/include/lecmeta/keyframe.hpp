#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lecmeta/frames.hpp"

namespace lecmeta::keyframe {

enum class Strategy { interval, pixel_diff, iframe, cluster };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

enum class SelectionReason { interval, diff_threshold, iframe, cluster_best, unclustered };

std::string selection_reason_name(SelectionReason r);

struct KeyframeEntry {
  long frame_index = 0;
  double timestamp_s = 0.0;
  SelectionReason reason = SelectionReason::interval;
};

// Keyframe indices are a strictly increasing subset of the input stream.
struct KeyframeSet {
  Strategy strategy = Strategy::interval;
  std::vector<KeyframeEntry> entries;
};

enum class PictureType : char { I = 'I', P = 'P', B = 'B' };

struct ProbeFrame {
  long frame_index = 0;
  double timestamp_s = 0.0;
  PictureType picture_type = PictureType::I;
};

struct ProbeReport {
  std::vector<ProbeFrame> frames;
};

struct CandidateCluster {
  std::vector<long> members;       // frame indices, temporally contiguous
  std::uint64_t signature = 0;     // average hash of the first member
};

// 64-bit average hash: 64x64 gray thumbnail, 8x8 block means thresholded
// against their overall mean.
std::uint64_t average_hash(const frames::FrameBuffer& f);

int hamming_distance(std::uint64_t a, std::uint64_t b);

// Frame-count sampling: the first frame at or past each multiple of
// interval_s.
KeyframeSet sample_every(std::span<const frames::FrameBuffer> stream,
                         double interval_s);

// Pixel subtraction: a frame is kept when its mean absolute deviation from
// the last kept frame exceeds threshold. The first frame is always kept.
KeyframeSet pixel_diff_keyframes(std::span<const frames::FrameBuffer> stream,
                                 double threshold);

// I-frame selection over an externally probed stream.
KeyframeSet select_iframes(const ProbeReport& report);

// Parses the probe tool's CSV frame listing (`frame,<pict_type>,<pts_time>`
// rows; the swapped field order some probe builds emit is also accepted).
// Unknown picture types are rejected.
ProbeReport parse_probe_csv(const std::string& text);

// Candidate step of the cluster strategy: consecutive-frame differences,
// one argmax per window of diffs, ties to the smaller index.
std::vector<long> candidate_frames(std::span<const frames::FrameBuffer> stream,
                                   int window);

// Single-pass temporally contiguous clustering by Hamming distance of the
// average hash against each cluster's first member.
std::vector<CandidateCluster> cluster_candidates(
    std::span<const frames::FrameBuffer> candidates, int hash_threshold);

// Best frame per cluster by blur index, with a minimum brightness floor;
// singleton clusters pass through as unclustered keyframes.
KeyframeSet best_per_cluster(const std::vector<CandidateCluster>& clusters,
                             std::span<const frames::FrameBuffer> frames_by_member,
                             double brightness_floor = 10.0);

struct ClusterParams {
  int window = 15;
  int hash_threshold = 10;
  double brightness_floor = 10.0;
};

// The full candidate -> cluster -> best pipeline.
KeyframeSet cluster_keyframes(std::span<const frames::FrameBuffer> stream,
                              const ClusterParams& params);

}  // namespace lecmeta::keyframe
