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

#ifndef SUBTOK_STATS_HPP_
#define SUBTOK_STATS_HPP_

#include <cstdint>
#include <string>
#include <unordered_set>

#include "subtok/model.hpp"
#include "subtok/trainer.hpp"

namespace subtok {

// Tokenization metrics for a corpus/model pair against a reference
// vocabulary: mean tokens per sentence, fraction of tokens whose surface is
// missing from the reference, and the number of distinct missing surfaces
// (the additions needed to eliminate OOVs).
struct TokenizationReport {
  double tokens_per_sentence = 0.0;
  double oov_rate = 0.0;
  std::uint64_t words_for_no_oov = 0;
};

// Encodes every sentence with `model` and judges OOV by exact surface
// match against `reference_vocab`.
TokenizationReport Analyze(
    const Corpus& corpus, const UnigramModel& model,
    const std::unordered_set<std::string>& reference_vocab);

// Surface set of a model, for use as a reference vocabulary.
std::unordered_set<std::string> SurfaceSet(const UnigramModel& model);

}  // namespace subtok

#endif  // SUBTOK_STATS_HPP_
