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

#include "subtok/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <unordered_map>
#include <utility>

#include "subtok/error.hpp"
#include "subtok/lattice.hpp"
#include "subtok/unicode.hpp"

namespace subtok {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

Corpus Corpus::FromLines(std::span<const std::string> lines,
                         bool add_dummy_prefix) {
  Corpus corpus;
  corpus.sentences_.reserve(lines.size());
  for (const std::string& line : lines) {
    corpus.sentences_.push_back(Normalize(line, add_dummy_prefix));
  }
  return corpus;
}

Corpus Corpus::FromFile(const std::string& path, bool add_dummy_prefix) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file: " + path);
  Corpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    corpus.sentences_.push_back(Normalize(line, add_dummy_prefix));
  }
  return corpus;
}

std::set<char32_t> Corpus::Alphabet() const {
  std::set<char32_t> alphabet;
  for (const NormalizedText& sentence : sentences_) {
    alphabet.insert(sentence.chars.begin(), sentence.chars.end());
  }
  return alphabet;
}

UnigramModel HarvestCandidates(const Corpus& corpus,
                               const TrainerConfig& config,
                               const KeepPredicate& keep) {
  struct Candidate {
    std::u32string surface;
    std::uint64_t count;
  };

  std::unordered_map<std::u32string, std::uint64_t> counts;
  for (const NormalizedText& sentence : corpus.sentences()) {
    const std::u32string_view chars(sentence.chars);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const std::size_t max_len =
          std::min(config.max_piece_len, chars.size() - i);
      for (std::size_t len = 1; len <= max_len; ++len) {
        ++counts[std::u32string(chars.substr(i, len))];
      }
    }
  }

  std::vector<Candidate> candidates;
  candidates.reserve(counts.size());
  for (auto& [surface, count] : counts) {
    if (keep && !keep(surface)) continue;
    if (count < config.min_count && surface.size() > 1) continue;
    candidates.push_back(Candidate{surface, count});
  }

  if (candidates.size() > config.seed_size) {
    // Keep the best count*length candidates; single characters always stay.
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                const auto wa = a.count * a.surface.size();
                const auto wb = b.count * b.surface.size();
                if (wa != wb) return wa > wb;
                return a.surface < b.surface;
              });
    std::vector<Candidate> kept;
    kept.reserve(config.seed_size);
    std::vector<Candidate> singles_overflow;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (i < config.seed_size) {
        kept.push_back(std::move(candidates[i]));
      } else if (candidates[i].surface.size() == 1) {
        singles_overflow.push_back(std::move(candidates[i]));
      }
    }
    kept.insert(kept.end(), singles_overflow.begin(), singles_overflow.end());
    candidates = std::move(kept);
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.surface < b.surface;
            });

  std::uint64_t total = 0;
  for (const Candidate& candidate : candidates) total += candidate.count;

  std::vector<Piece> pieces;
  pieces.reserve(candidates.size());
  for (const Candidate& candidate : candidates) {
    pieces.push_back(
        Piece{EncodeUtf8(candidate.surface),
              std::log(static_cast<double>(candidate.count)) -
                  std::log(static_cast<double>(total))});
  }
  return UnigramModel(std::move(pieces));
}

UnigramModel EmStep(const UnigramModel& model, const UnigramModel* frozen,
                    const Corpus& corpus) {
  const bool mixed = frozen != nullptr && !frozen->empty();
  const UnigramModel mixture_storage =
      mixed ? MergeModels(*frozen, model) : UnigramModel();
  const UnigramModel& mixture = mixed ? mixture_storage : model;
  const std::size_t offset = mixed ? frozen->size() : 0;

  std::vector<double> counts(mixture.size(), 0.0);
  for (const NormalizedText& sentence : corpus.sentences()) {
    AccumulateExpectedCounts(BuildLattice(sentence, mixture), counts);
  }

  double total = 0.0;
  for (double count : counts) total += count;
  if (total == 0.0) return model;  // no evidence, nothing to update

  const double log_total = std::log(total);
  std::vector<Piece> pieces = model.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double count = counts[offset + i];
    pieces[i].log_prob =
        count > 0.0 ? std::log(count) - log_total : kNegInf;
  }
  return UnigramModel(std::move(pieces));
}

UnigramModel Prune(const UnigramModel& model, double ratio,
                   const std::unordered_set<std::string>& protected_surfaces,
                   std::size_t floor) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ConfigError("prune ratio must lie in (0, 1)");
  }

  std::vector<std::size_t> prunable;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (!protected_surfaces.count(model.pieces()[i].surface)) {
      prunable.push_back(i);
    }
  }

  // Nudge before flooring so exact products like 0.3 * 10 are not lost to
  // representation error.
  std::size_t remove_n = static_cast<std::size_t>(
      std::floor(ratio * static_cast<double>(prunable.size()) + 1e-9));
  if (floor > 0) {
    const std::size_t headroom =
        model.size() > floor ? model.size() - floor : 0;
    remove_n = std::min(remove_n, headroom);
  }
  if (remove_n == 0) return model;

  // Lowest scores go (sentinels first, being -inf); ties keep
  // earlier-inserted pieces.
  std::sort(prunable.begin(), prunable.end(),
            [&model](std::size_t a, std::size_t b) {
              const double sa = model.pieces()[a].log_prob;
              const double sb = model.pieces()[b].log_prob;
              if (sa != sb) return sa < sb;
              return a > b;
            });

  std::vector<bool> removed(model.size(), false);
  for (std::size_t k = 0; k < remove_n; ++k) removed[prunable[k]] = true;

  std::vector<Piece> pieces;
  pieces.reserve(model.size() - remove_n);
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (!removed[i]) pieces.push_back(model.pieces()[i]);
  }
  return UnigramModel(std::move(pieces));
}

UnigramModel FloorProtectedSentinels(
    const UnigramModel& model,
    const std::unordered_set<std::string>& protected_surfaces) {
  double min_finite = 0.0;
  bool has_finite = false;
  bool has_sentinel = false;
  for (const Piece& piece : model.pieces()) {
    if (std::isfinite(piece.log_prob)) {
      min_finite =
          has_finite ? std::min(min_finite, piece.log_prob) : piece.log_prob;
      has_finite = true;
    } else if (protected_surfaces.count(piece.surface)) {
      has_sentinel = true;
    }
  }
  if (!has_sentinel) return model;

  const double floor_score = (has_finite ? min_finite : 0.0) -
                             kUnkLogProbMargin;
  std::vector<Piece> pieces = model.pieces();
  for (Piece& piece : pieces) {
    if (!std::isfinite(piece.log_prob) &&
        protected_surfaces.count(piece.surface)) {
      piece.log_prob = floor_score;
    }
  }
  return UnigramModel(std::move(pieces));
}

UnigramModel Train(const Corpus& corpus, const TrainerConfig& config) {
  const std::set<char32_t> alphabet = corpus.Alphabet();
  if (config.vocab_size < alphabet.size()) {
    throw ConfigError("vocab size " + std::to_string(config.vocab_size) +
                      " is smaller than the corpus alphabet (" +
                      std::to_string(alphabet.size()) + " characters)");
  }

  UnigramModel model = HarvestCandidates(corpus, config);

  std::unordered_set<std::string> protected_surfaces;
  for (const Piece& piece : model.pieces()) {
    if (DecodeUtf8(piece.surface).size() == 1) {
      protected_surfaces.insert(piece.surface);
    }
  }

  while (model.size() > config.vocab_size) {
    for (int i = 0; i < config.em_inner_iters; ++i) {
      model = EmStep(model, nullptr, corpus);
    }
    const std::size_t before = model.size();
    model = Prune(model, config.prune_ratio, protected_surfaces,
                  config.vocab_size);
    if (model.size() == before) {
      // floor(ratio * prunable) hit zero; drop the single worst piece so
      // the loop always reaches the target.
      std::size_t worst = UnigramModel::npos;
      for (std::size_t i = 0; i < model.size(); ++i) {
        if (protected_surfaces.count(model.pieces()[i].surface)) continue;
        if (worst == UnigramModel::npos ||
            model.pieces()[i].log_prob <= model.pieces()[worst].log_prob) {
          worst = i;  // on ties drop the later piece, matching Prune
        }
      }
      if (worst == UnigramModel::npos) break;  // everything protected
      std::vector<Piece> pieces = model.pieces();
      pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(worst));
      model = UnigramModel(std::move(pieces));
    }
  }

  model = FloorProtectedSentinels(model, protected_surfaces);
  for (int i = 0; i < config.final_em_iters; ++i) {
    model = EmStep(model, nullptr, corpus);
  }
  return FloorProtectedSentinels(model, protected_surfaces);
}

double CorpusLogLikelihood(const UnigramModel& model,
                           const UnigramModel* frozen, const Corpus& corpus) {
  const bool mixed = frozen != nullptr && !frozen->empty();
  const UnigramModel mixture_storage =
      mixed ? MergeModels(*frozen, model) : UnigramModel();
  const UnigramModel& mixture = mixed ? mixture_storage : model;

  double total = 0.0;
  for (const NormalizedText& sentence : corpus.sentences()) {
    total += ForwardBackward(BuildLattice(sentence, mixture)).log_z;
  }
  return total;
}

}  // namespace subtok
