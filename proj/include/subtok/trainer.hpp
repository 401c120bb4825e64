// Copyright 2026 The subtok Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUBTOK_TRAINER_HPP_
#define SUBTOK_TRAINER_HPP_

#include <functional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "subtok/model.hpp"

namespace subtok {

struct TrainerConfig {
  std::size_t vocab_size = 8000;
  std::size_t max_piece_len = 16;  // characters
  std::size_t min_count = 2;
  std::size_t seed_size = 1000000;
  double prune_ratio = 0.2;
  int em_inner_iters = 2;
  int final_em_iters = 2;
};

// Normalized sentences. Normalization is applied on ingestion, so no
// sentence contains a raw space.
class Corpus {
 public:
  Corpus() = default;

  static Corpus FromLines(std::span<const std::string> lines,
                          bool add_dummy_prefix = true);
  // One sentence per LF-terminated line, UTF-8.
  static Corpus FromFile(const std::string& path,
                         bool add_dummy_prefix = true);

  const std::vector<NormalizedText>& sentences() const { return sentences_; }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }

  // Distinct characters over all sentences.
  std::set<char32_t> Alphabet() const;

 private:
  std::vector<NormalizedText> sentences_;
};

// Candidate filter over a (UTF-32) surface; an empty function keeps all.
using KeepPredicate = std::function<bool(std::u32string_view)>;

// Seed model from corpus substrings: every substring with
// 1 <= length <= max_piece_len occurring at least min_count times and
// satisfying `keep` becomes a candidate; single characters satisfying
// `keep` are always included. Scores are log relative frequencies over the
// retained candidates. When candidates exceed seed_size, the top
// count*length survive (single characters always retained).
UnigramModel HarvestCandidates(const Corpus& corpus,
                               const TrainerConfig& config,
                               const KeepPredicate& keep = {});

// One EM iteration against the mixture of `frozen` (optional, scores
// untouched) and `model`. Returns `model` with re-estimated scores:
// log(count / total) where total sums expected counts over all mixture
// pieces. Pieces with zero expected count get a -inf sentinel.
UnigramModel EmStep(const UnigramModel& model, const UnigramModel* frozen,
                    const Corpus& corpus);

// Removes floor(ratio * |prunable|) of the lowest-scored pieces not in
// `protected_surfaces` (-inf sentinels go first). When `floor` is nonzero,
// never shrinks the model below it: within one step of the target only
// enough pieces are removed to land exactly on it.
UnigramModel Prune(const UnigramModel& model, double ratio,
                   const std::unordered_set<std::string>& protected_surfaces,
                   std::size_t floor = 0);

// Protected pieces cannot be pruned, but EM can still starve them down to
// the -inf sentinel once larger pieces cover all their occurrences. This
// restores such pieces to (worst finite score - kUnkLogProbMargin) so they
// keep working as last-resort fallbacks; anyone driving em_step/prune
// loops by hand wants this at the same points train() applies it.
UnigramModel FloorProtectedSentinels(
    const UnigramModel& model,
    const std::unordered_set<std::string>& protected_surfaces);

// Full pipeline: harvest, then alternate em_inner_iters EM steps with a
// prune (single-character pieces protected) until the vocabulary reaches
// config.vocab_size, then final_em_iters polish steps.
UnigramModel Train(const Corpus& corpus, const TrainerConfig& config);

// Sum of per-sentence log Z under the mixture; the EM training objective.
double CorpusLogLikelihood(const UnigramModel& model,
                           const UnigramModel* frozen, const Corpus& corpus);

}  // namespace subtok

#endif  // SUBTOK_TRAINER_HPP_
