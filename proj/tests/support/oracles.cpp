#include "support/oracles.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "lecmeta/matching.hpp"

namespace oracles {

namespace {

size_t lev_rec(const std::u32string& a, const std::u32string& b, size_t i,
               size_t j, std::map<std::pair<size_t, size_t>, size_t>& memo) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  auto key = std::make_pair(i, j);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  size_t best;
  if (a[i] == b[j]) {
    best = lev_rec(a, b, i + 1, j + 1, memo);
  } else {
    size_t del = lev_rec(a, b, i + 1, j, memo);
    size_t ins = lev_rec(a, b, i, j + 1, memo);
    size_t sub = lev_rec(a, b, i + 1, j + 1, memo);
    best = 1 + std::min({del, ins, sub});
  }
  memo.emplace(key, best);
  return best;
}

}  // namespace

size_t levenshtein_memo(const std::u32string& a, const std::u32string& b) {
  std::map<std::pair<size_t, size_t>, size_t> memo;
  return lev_rec(a, b, 0, 0, memo);
}

size_t levenshtein_memo(const std::string& a, const std::string& b) {
  return levenshtein_memo(lecmeta::matching::decode_utf8(a),
                          lecmeta::matching::decode_utf8(b));
}

double ratio_from_oracle(const std::string& a, const std::string& b) {
  auto ua = lecmeta::matching::decode_utf8(a);
  auto ub = lecmeta::matching::decode_utf8(b);
  size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 100.0;
  return 100.0 * (1.0 - double(levenshtein_memo(ua, ub)) / double(longest));
}

int otsu_scan(const lecmeta::frames::FrameBuffer& gray) {
  std::vector<long> hist(256, 0);
  for (auto v : gray.data) ++hist[v];
  const double n = double(gray.data.size());

  double best_var = -1.0;
  int best_t = 0;
  for (int t = 0; t < 255; ++t) {
    double w0 = 0, w1 = 0, s0 = 0, s1 = 0;
    for (int v = 0; v <= t; ++v) {
      w0 += hist[v];
      s0 += double(v) * hist[v];
    }
    for (int v = t + 1; v < 256; ++v) {
      w1 += hist[v];
      s1 += double(v) * hist[v];
    }
    if (w0 == 0 || w1 == 0) continue;
    double mu0 = s0 / w0, mu1 = s1 / w1;
    double var = (w0 / n) * (w1 / n) * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace oracles
