#include "defhyper/features.hpp"

#include <cctype>
#include <cmath>

#include "defhyper/error.hpp"

namespace defhyper {

std::array<double, kPosCount> ContextSegment::column(std::size_t k) const {
  const auto l = static_cast<std::size_t>(window);
  return one_hot(k < l ? pre[k] : post[k - l]);
}

std::vector<double> ContextSegment::matrix() const {
  const std::size_t cols = 2 * static_cast<std::size_t>(window);
  std::vector<double> m(kPosCount * cols, 0.0);
  for (std::size_t k = 0; k < cols; ++k) {
    const auto col = column(k);
    for (std::size_t r = 0; r < kPosCount; ++r) m[r * cols + k] = col[r];
  }
  return m;
}

ContextSegment context_segment(std::span<const PosType> tags, int position, int window) {
  const int n = static_cast<int>(tags.size());
  if (position < 1 || position > n) {
    throw ShapeError("candidate position " + std::to_string(position) +
                     " outside sentence of length " + std::to_string(n));
  }
  if (window < 1) throw ConfigError("window size must be at least 1");
  ContextSegment seg;
  seg.candidate = {0, position};
  seg.window = window;
  const auto at = [&](int p) {
    return p < 1 || p > n ? PosType::Null : tags[static_cast<std::size_t>(p - 1)];
  };
  for (int p = position - window; p < position; ++p) seg.pre.push_back(at(p));
  for (int p = position + 1; p <= position + window; ++p) seg.post.push_back(at(p));
  return seg;
}

IdWindow id_window(std::span<const int> ids, int position, int window, int pad_id) {
  const int n = static_cast<int>(ids.size());
  IdWindow w;
  w.pre.reserve(static_cast<std::size_t>(window));
  w.post.reserve(static_cast<std::size_t>(window));
  const auto at = [&](int p) { return p < 1 || p > n ? pad_id : ids[static_cast<std::size_t>(p - 1)]; };
  for (int p = position - window; p < position; ++p) w.pre.push_back(at(p));
  for (int p = position + 1; p <= position + window; ++p) w.post.push_back(at(p));
  return w;
}

TrainStats TrainStats::from(const Corpus& train) {
  TrainStats s;
  s.frequency = train.frequency;
  s.max_count = train.max_frequency();
  return s;
}

std::int64_t TrainStats::count(const std::string& lowered) const {
  const auto it = frequency.find(lowered);
  return it == frequency.end() ? 0 : it->second;
}

RefinementFeatures refinement_features(const Candidate& candidate, const Definition& definition,
                                       const TrainStats& stats, const CooccurrenceGraph& graph) {
  RefinementFeatures f;
  const std::string& surface = definition.word_at(candidate.position);
  const std::string lowered = to_lower(surface);
  f.position = static_cast<double>(candidate.position) / static_cast<double>(definition.size());
  f.capitalized =
      !surface.empty() && std::isupper(static_cast<unsigned char>(surface.front())) ? 1.0 : 0.0;
  if (stats.max_count > 0) {
    f.frequency = std::log1p(static_cast<double>(stats.count(lowered))) /
                  std::log1p(static_cast<double>(stats.max_count));
  }
  f.dc = degree_centrality(graph, lowered);
  return f;
}

std::vector<HybridToken> hybrid_tokens(std::span<const std::string> words,
                                       std::span<const PosType> tags, const TopK& top) {
  if (words.size() != tags.size()) throw ShapeError("words and tags differ in length");
  std::vector<HybridToken> out;
  out.reserve(words.size());
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (top.contains(to_lower(words[k]))) {
      out.emplace_back(words[k]);
    } else {
      out.emplace_back(tags[k]);
    }
  }
  return out;
}

IntegerEncoding integer_encode(const ContextSegment& segment, const RefinementFeatures& feats) {
  IntegerEncoding enc;
  enc.window = segment.window;
  enc.values.reserve(segment.pre.size() + segment.post.size() + RefinementFeatures::kCount);
  for (PosType p : segment.pre) enc.values.push_back(pos_index(p));
  for (PosType p : segment.post) enc.values.push_back(33 - pos_index(p));
  enc.values.push_back(feats.dc);
  enc.values.push_back(feats.position);
  enc.values.push_back(feats.capitalized);
  enc.values.push_back(feats.frequency);
  return enc;
}

}  // namespace defhyper
