#pragma once

#include <array>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "defhyper/cograph.hpp"
#include "defhyper/corpus.hpp"
#include "defhyper/postag.hpp"

namespace defhyper {

// PoS context around one candidate: L tags before it and L after it,
// padded with PosType::Null outside the sentence.
struct ContextSegment {
  Candidate candidate;
  int window = 0;
  std::vector<PosType> pre;   // positions i-L .. i-1
  std::vector<PosType> post;  // positions i+1 .. i+L

  // Column k of the 16 x 2L one-hot matrix (pre columns first).
  std::array<double, kPosCount> column(std::size_t k) const;
  // Row-major 16 x 2L matrix.
  std::vector<double> matrix() const;
};

ContextSegment context_segment(std::span<const PosType> tags, int position, int window);

// Same windowing over arbitrary per-position token ids.
struct IdWindow {
  std::vector<int> pre;
  std::vector<int> post;
};
IdWindow id_window(std::span<const int> ids, int position, int window, int pad_id);

// Corpus-level statistics the refinement features are normalized against.
struct TrainStats {
  FrequencyMap frequency;
  std::int64_t max_count = 0;

  static TrainStats from(const Corpus& train);
  std::int64_t count(const std::string& lowered) const;
};

struct RefinementFeatures {
  double position = 0.0;     // i / N
  double capitalized = 0.0;  // 1 if the surface starts uppercase
  double frequency = 0.0;    // log(1+count) / log(1+max_count)
  double dc = 0.0;           // degree centrality in the hypernym graph

  static constexpr std::size_t kCount = 4;
};

RefinementFeatures refinement_features(const Candidate& candidate, const Definition& definition,
                                       const TrainStats& stats, const CooccurrenceGraph& graph);

// Element of a hybrid sequence: a retained frequent word or a PoS type.
using HybridToken = std::variant<std::string, PosType>;

std::vector<HybridToken> hybrid_tokens(std::span<const std::string> words,
                                       std::span<const PosType> tags, const TopK& top);

// [I(pre)..., 33 - I(post)..., dc, position, capitalized, frequency]
struct IntegerEncoding {
  int window = 0;
  std::vector<double> values;
};

IntegerEncoding integer_encode(const ContextSegment& segment, const RefinementFeatures& feats);

}  // namespace defhyper
