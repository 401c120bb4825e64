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

#ifndef SUBTOK_EXTENDER_HPP_
#define SUBTOK_EXTENDER_HPP_

#include <set>

#include "subtok/model.hpp"
#include "subtok/trainer.hpp"

namespace subtok {

struct ExtensionConfig {
  std::size_t additional_vocab_size = 2000;
  // Inner-loop knobs; `trainer.vocab_size` is ignored here.
  TrainerConfig trainer;
};

// Characters occurring in the corpus but absent from every surface of the
// original model. U+2581 never counts as new.
std::set<char32_t> NewLetters(const Corpus& corpus,
                              const UnigramModel& original);

struct ExtensionResult {
  UnigramModel additional;  // learned pieces, all starting with a new letter
  UnigramModel merged;      // original pieces (bit-identical) then additional
};

// Learns additional subwords for the new letters of `corpus`: candidates
// are restricted to substrings starting with a new letter, likelihoods are
// estimated by EM against the mixture with the frozen original model, and
// the vocabulary is pruned down to exactly additional_vocab_size. Because
// every additional surface starts with a letter unknown to the original
// model, the merged model tokenizes original-alphabet text exactly as the
// original does.
//
// Throws EmptyExtensionError when the corpus introduces no new letters and
// ConfigError when additional_vocab_size cannot cover them.
ExtensionResult Extend(const Corpus& corpus, const UnigramModel& original,
                       const ExtensionConfig& config);

}  // namespace subtok

#endif  // SUBTOK_EXTENDER_HPP_
