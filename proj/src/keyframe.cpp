#include "lecmeta/keyframe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "lecmeta/csv.hpp"
#include "lecmeta/errors.hpp"

namespace lecmeta::keyframe {

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::interval: return "interval";
    case Strategy::pixel_diff: return "pixel-diff";
    case Strategy::iframe: return "iframe";
    case Strategy::cluster: return "cluster";
  }
  return "?";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "interval") return Strategy::interval;
  if (name == "pixel-diff" || name == "pixel_diff") return Strategy::pixel_diff;
  if (name == "iframe") return Strategy::iframe;
  if (name == "cluster") return Strategy::cluster;
  throw config_error("unknown keyframe strategy: " + name);
}

std::string selection_reason_name(SelectionReason r) {
  switch (r) {
    case SelectionReason::interval: return "interval";
    case SelectionReason::diff_threshold: return "diff_threshold";
    case SelectionReason::iframe: return "iframe";
    case SelectionReason::cluster_best: return "cluster_best";
    case SelectionReason::unclustered: return "unclustered";
  }
  return "?";
}

std::uint64_t average_hash(const frames::FrameBuffer& f) {
  const frames::FrameBuffer thumb =
      frames::resize_nearest(frames::to_grayscale(f), 64, 64);
  // 8x8 block sums; a bit is set when its block mean exceeds the global mean.
  std::uint64_t block_sum[64] = {};
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x)
      block_sum[(y / 8) * 8 + (x / 8)] += thumb.at(x, y);
  std::uint64_t total = 0;
  for (auto s : block_sum) total += s;
  std::uint64_t hash = 0;
  for (int i = 0; i < 64; ++i)
    if (block_sum[i] * 64 > total) hash |= (std::uint64_t{1} << i);
  return hash;
}

int hamming_distance(std::uint64_t a, std::uint64_t b) {
  return std::popcount(a ^ b);
}

KeyframeSet sample_every(std::span<const frames::FrameBuffer> stream,
                         double interval_s) {
  if (!(interval_s > 0.0)) throw config_error("sampling interval must be > 0");
  KeyframeSet set;
  set.strategy = Strategy::interval;
  long next_k = 0;
  for (const auto& f : stream) {
    if (f.timestamp_s >= static_cast<double>(next_k) * interval_s) {
      set.entries.push_back(
          {f.frame_index, f.timestamp_s, SelectionReason::interval});
      next_k = static_cast<long>(std::floor(f.timestamp_s / interval_s)) + 1;
    }
  }
  return set;
}

KeyframeSet pixel_diff_keyframes(std::span<const frames::FrameBuffer> stream,
                                 double threshold) {
  if (!(threshold > 0.0)) throw config_error("diff threshold must be > 0");
  KeyframeSet set;
  set.strategy = Strategy::pixel_diff;
  const frames::FrameBuffer* last_selected = nullptr;
  for (const auto& f : stream) {
    // Compared against the last selected frame, not the previous stream
    // frame, so slow fades cannot stay under the threshold forever.
    if (last_selected == nullptr ||
        frames::mean_abs_diff(f, *last_selected) > threshold) {
      set.entries.push_back(
          {f.frame_index, f.timestamp_s, SelectionReason::diff_threshold});
      last_selected = &f;
    }
  }
  return set;
}

KeyframeSet select_iframes(const ProbeReport& report) {
  KeyframeSet set;
  set.strategy = Strategy::iframe;
  for (const auto& pf : report.frames)
    if (pf.picture_type == PictureType::I)
      set.entries.push_back(
          {pf.frame_index, pf.timestamp_s, SelectionReason::iframe});
  return set;
}

namespace {

bool parse_picture_type(const std::string& s, PictureType& out) {
  if (s == "I") out = PictureType::I;
  else if (s == "P") out = PictureType::P;
  else if (s == "B") out = PictureType::B;
  else return false;
  return true;
}

bool parse_timestamp(const std::string& s, double& out) {
  if (s.empty()) return false;
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size() && out >= 0.0 && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

}  // namespace

ProbeReport parse_probe_csv(const std::string& text) {
  ProbeReport report;
  long line = 0;
  long ordinal = 0;
  for (const auto& row : csv::parse(text)) {
    ++line;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.empty() || row[0] != "frame")
      throw parse_error("probe row does not start with 'frame'", line);
    if (row.size() != 3)
      throw parse_error("probe row needs exactly 3 fields", line);
    ProbeFrame pf;
    pf.frame_index = ordinal;
    // Expected shape is frame,<pict_type>,<pts_time>; some probe builds emit
    // the two value fields swapped.
    if (parse_picture_type(row[1], pf.picture_type)) {
      if (!parse_timestamp(row[2], pf.timestamp_s))
        throw parse_error("bad probe timestamp '" + row[2] + "'", line);
    } else if (parse_picture_type(row[2], pf.picture_type)) {
      if (!parse_timestamp(row[1], pf.timestamp_s))
        throw parse_error("bad probe timestamp '" + row[1] + "'", line);
    } else {
      throw parse_error("unknown picture type '" + row[1] + "'", line);
    }
    report.frames.push_back(pf);
    ++ordinal;
  }
  return report;
}

std::vector<long> candidate_frames(std::span<const frames::FrameBuffer> stream,
                                   int window) {
  if (window < 2) throw config_error("candidate window must be >= 2");
  std::vector<long> out;
  if (stream.size() < 2) return out;

  // diffs[k] corresponds to stream position k+1
  std::vector<double> diffs(stream.size() - 1);
  for (size_t i = 1; i < stream.size(); ++i)
    diffs[i - 1] = frames::mean_abs_diff(stream[i], stream[i - 1]);

  for (size_t start = 0; start < diffs.size(); start += window) {
    size_t end = std::min(diffs.size(), start + static_cast<size_t>(window));
    size_t best = start;
    for (size_t k = start + 1; k < end; ++k)
      if (diffs[k] > diffs[best]) best = k;  // ties keep the smaller index
    out.push_back(stream[best + 1].frame_index);
  }
  return out;
}

std::vector<CandidateCluster> cluster_candidates(
    std::span<const frames::FrameBuffer> candidates, int hash_threshold) {
  if (hash_threshold < 0 || hash_threshold > 64)
    throw config_error("hash threshold must be in [0,64]");
  std::vector<CandidateCluster> clusters;
  for (const auto& f : candidates) {
    std::uint64_t h = average_hash(f);
    if (!clusters.empty() &&
        hamming_distance(h, clusters.back().signature) <= hash_threshold) {
      clusters.back().members.push_back(f.frame_index);
    } else {
      clusters.push_back({{f.frame_index}, h});
    }
  }
  return clusters;
}

KeyframeSet best_per_cluster(const std::vector<CandidateCluster>& clusters,
                             std::span<const frames::FrameBuffer> frames_by_member,
                             double brightness_floor) {
  std::unordered_map<long, const frames::FrameBuffer*> by_index;
  for (const auto& f : frames_by_member) by_index.emplace(f.frame_index, &f);
  auto lookup = [&](long idx) -> const frames::FrameBuffer& {
    auto it = by_index.find(idx);
    if (it == by_index.end())
      throw error("cluster member " + std::to_string(idx) +
                  " is not among the provided frames");
    return *it->second;
  };

  KeyframeSet set;
  set.strategy = Strategy::cluster;
  for (const auto& cluster : clusters) {
    if (cluster.members.empty()) throw error("empty candidate cluster");
    if (cluster.members.size() == 1) {
      const auto& f = lookup(cluster.members.front());
      set.entries.push_back(
          {f.frame_index, f.timestamp_s, SelectionReason::unclustered});
      continue;
    }
    // Score by sharpness; frames under the brightness floor only count when
    // every member is under it.
    bool any_bright = false;
    for (long idx : cluster.members)
      if (frames::brightness(lookup(idx)) >= brightness_floor) {
        any_bright = true;
        break;
      }
    const frames::FrameBuffer* best = nullptr;
    double best_score = -1.0;
    for (long idx : cluster.members) {
      const auto& f = lookup(idx);
      if (any_bright && frames::brightness(f) < brightness_floor) continue;
      double score = frames::blur_index(f);
      if (best == nullptr || score > best_score ||
          (score == best_score && f.frame_index < best->frame_index)) {
        best = &f;
        best_score = score;
      }
    }
    set.entries.push_back(
        {best->frame_index, best->timestamp_s, SelectionReason::cluster_best});
  }
  std::sort(set.entries.begin(), set.entries.end(),
            [](const KeyframeEntry& a, const KeyframeEntry& b) {
              return a.frame_index < b.frame_index;
            });
  return set;
}

KeyframeSet cluster_keyframes(std::span<const frames::FrameBuffer> stream,
                              const ClusterParams& params) {
  std::vector<long> indices = candidate_frames(stream, params.window);
  std::vector<frames::FrameBuffer> candidates;
  candidates.reserve(indices.size());
  for (const auto& f : stream)
    if (std::find(indices.begin(), indices.end(), f.frame_index) != indices.end())
      candidates.push_back(f);
  auto clusters = cluster_candidates(candidates, params.hash_threshold);
  return best_per_cluster(clusters, candidates, params.brightness_floor);
}

}  // namespace lecmeta::keyframe
