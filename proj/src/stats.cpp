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

#include "subtok/stats.hpp"

#include "subtok/lattice.hpp"

namespace subtok {

TokenizationReport Analyze(
    const Corpus& corpus, const UnigramModel& model,
    const std::unordered_set<std::string>& reference_vocab) {
  TokenizationReport report;
  if (corpus.empty()) return report;

  std::uint64_t token_total = 0;
  std::uint64_t oov_total = 0;
  std::unordered_set<std::string> oov_surfaces;
  for (const NormalizedText& sentence : corpus.sentences()) {
    const TokenSequence seq = Viterbi(BuildLattice(sentence, model));
    token_total += seq.tokens.size();
    for (const std::string& token : seq.tokens) {
      if (!reference_vocab.count(token)) {
        ++oov_total;
        oov_surfaces.insert(token);
      }
    }
  }

  report.tokens_per_sentence =
      static_cast<double>(token_total) / static_cast<double>(corpus.size());
  report.oov_rate = token_total == 0
                        ? 0.0
                        : static_cast<double>(oov_total) /
                              static_cast<double>(token_total);
  report.words_for_no_oov = oov_surfaces.size();
  return report;
}

std::unordered_set<std::string> SurfaceSet(const UnigramModel& model) {
  std::unordered_set<std::string> surfaces;
  surfaces.reserve(model.size());
  for (const Piece& piece : model.pieces()) surfaces.insert(piece.surface);
  return surfaces;
}

}  // namespace subtok
