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

#include "subtok/extender.hpp"

#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "subtok/error.hpp"
#include "subtok/unicode.hpp"

namespace subtok {

std::set<char32_t> NewLetters(const Corpus& corpus,
                              const UnigramModel& original) {
  std::set<char32_t> letters;
  const std::set<char32_t>& known = original.alphabet();
  for (const NormalizedText& sentence : corpus.sentences()) {
    for (char32_t c : sentence.chars) {
      if (c != kSpaceSymbol && !known.count(c)) letters.insert(c);
    }
  }
  return letters;
}

ExtensionResult Extend(const Corpus& corpus, const UnigramModel& original,
                       const ExtensionConfig& config) {
  const std::set<char32_t> new_letters = NewLetters(corpus, original);
  if (new_letters.empty()) {
    throw EmptyExtensionError("no new letters: every corpus character is "
                              "already covered by the original model");
  }
  const std::size_t target = config.additional_vocab_size;
  if (target < new_letters.size()) {
    throw ConfigError("additional vocab size " + std::to_string(target) +
                      " is smaller than the number of new letters (" +
                      std::to_string(new_letters.size()) + ")");
  }

  // Candidates are exactly the substrings starting with a new letter;
  // a new letter followed by known letters is legal.
  const KeepPredicate keep = [&new_letters](std::u32string_view surface) {
    return new_letters.count(surface.front()) > 0;
  };
  UnigramModel additional = HarvestCandidates(corpus, config.trainer, keep);

  std::unordered_set<std::string> protected_surfaces;
  for (char32_t c : new_letters) {
    std::string surface;
    AppendUtf8(c, &surface);
    protected_surfaces.insert(std::move(surface));
  }

  while (additional.size() > target) {
    for (int i = 0; i < config.trainer.em_inner_iters; ++i) {
      additional = EmStep(additional, &original, corpus);
    }
    const std::size_t before = additional.size();
    additional = Prune(additional, config.trainer.prune_ratio,
                       protected_surfaces, target);
    if (additional.size() == before) {
      std::size_t worst = UnigramModel::npos;
      for (std::size_t i = 0; i < additional.size(); ++i) {
        if (protected_surfaces.count(additional.pieces()[i].surface)) continue;
        if (worst == UnigramModel::npos ||
            additional.pieces()[i].log_prob <=
                additional.pieces()[worst].log_prob) {
          worst = i;
        }
      }
      if (worst == UnigramModel::npos) break;
      std::vector<Piece> pieces = additional.pieces();
      pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(worst));
      additional = UnigramModel(std::move(pieces));
    }
  }

  additional = FloorProtectedSentinels(additional, protected_surfaces);

  ExtensionResult result{std::move(additional), UnigramModel()};
  result.merged = MergeModels(original, result.additional);
  return result;
}

}  // namespace subtok
