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

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "subtok/error.hpp"
#include "subtok/lattice.hpp"
#include "subtok/unicode.hpp"
#include "test_support.hpp"

namespace subtok {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Corpus RawCorpus(std::vector<std::string> lines) {
  return Corpus::FromLines(lines, /*add_dummy_prefix=*/false);
}

double ScoreOf(const UnigramModel& model, const std::string& surface) {
  const std::size_t index = model.FindIndex(surface);
  REQUIRE(index != UnigramModel::npos);
  return model.pieces()[index].log_prob;
}

TEST_CASE("harvest counts every substring up to the length cap") {
  TrainerConfig config;
  config.max_piece_len = 2;
  config.min_count = 1;
  const UnigramModel model = HarvestCandidates(RawCorpus({"aba"}), config);
  REQUIRE(model.size() == 4);
  // Counts a:2, b:1, ab:1, ba:1, total 5.
  CHECK(ScoreOf(model, "a") ==
        doctest::Approx(std::log(2.0 / 5.0)).epsilon(1e-12));
  CHECK(ScoreOf(model, "b") ==
        doctest::Approx(std::log(1.0 / 5.0)).epsilon(1e-12));
  CHECK(ScoreOf(model, "ab") ==
        doctest::Approx(std::log(1.0 / 5.0)).epsilon(1e-12));
  CHECK(ScoreOf(model, "ba") ==
        doctest::Approx(std::log(1.0 / 5.0)).epsilon(1e-12));

  SUBCASE("empty corpus yields an empty model") {
    CHECK(HarvestCandidates(Corpus(), config).empty());
  }
}

TEST_CASE("harvest respects the keep predicate") {
  TrainerConfig config;
  config.max_piece_len = 2;
  config.min_count = 1;
  const KeepPredicate keep = [](std::u32string_view surface) {
    return surface.front() == U'X';
  };
  const UnigramModel model = HarvestCandidates(RawCorpus({"aX"}), config, keep);
  REQUIRE(model.size() == 1);
  CHECK(model.pieces()[0].surface == "X");
  CHECK(model.pieces()[0].log_prob == doctest::Approx(0.0));
}

TEST_CASE("harvest filters by min_count but force-includes single chars") {
  TrainerConfig config;
  config.max_piece_len = 3;
  config.min_count = 2;
  const UnigramModel model =
      HarvestCandidates(RawCorpus({"abab", "c"}), config);
  CHECK(model.Contains("a"));
  CHECK(model.Contains("b"));
  CHECK(model.Contains("c"));  // count 1, forced in as a single character
  CHECK(model.Contains("ab"));
  CHECK_FALSE(model.Contains("ba"));  // count 1 only
  CHECK_FALSE(model.Contains("aba"));
  CHECK_FALSE(model.Contains("bab"));
}

TEST_CASE("harvest seed cap keeps the heaviest candidates plus all singles") {
  TrainerConfig config;
  config.max_piece_len = 4;
  config.min_count = 1;
  config.seed_size = 6;
  const UnigramModel model =
      HarvestCandidates(RawCorpus({"abcdabcdabcd"}), config);
  for (const char* single : {"a", "b", "c", "d"}) {
    CHECK(model.Contains(single));
  }
  std::size_t multi = 0;
  for (const Piece& piece : model.pieces()) {
    if (DecodeUtf8(piece.surface).size() > 1) ++multi;
  }
  CHECK(model.size() >= 4);
  CHECK(multi <= 6);  // multi-char pieces only occupy capped slots
}

TEST_CASE("em_step matches the enumeration oracle on the worked example") {
  const Corpus corpus = RawCorpus({"ab"});
  const UnigramModel model({Piece{"a", std::log(0.4)},
                            Piece{"b", std::log(0.3)},
                            Piece{"ab", std::log(0.2)}});
  const UnigramModel updated = EmStep(model, nullptr, corpus);
  // Expected counts (0.375, 0.375, 0.625), total 1.375.
  CHECK(ScoreOf(updated, "a") ==
        doctest::Approx(std::log(0.375 / 1.375)).epsilon(1e-12));
  CHECK(ScoreOf(updated, "b") ==
        doctest::Approx(std::log(0.375 / 1.375)).epsilon(1e-12));
  CHECK(ScoreOf(updated, "ab") ==
        doctest::Approx(std::log(0.625 / 1.375)).epsilon(1e-12));

  const auto oracle =
      testing::OracleEmStep(model.pieces(), {}, {DecodeUtf8("ab")});
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    CHECK(updated.pieces()[i].log_prob ==
          doctest::Approx(oracle[i].log_prob).epsilon(1e-12));
  }
}

TEST_CASE("em_step on a single-piece corpus normalizes to probability one") {
  const UnigramModel model({Piece{"a", -3.7}});
  const UnigramModel updated = EmStep(model, nullptr, RawCorpus({"a"}));
  CHECK(updated.pieces()[0].log_prob == doctest::Approx(0.0));
}

TEST_CASE("em_step against a frozen mixture updates only the model") {
  const UnigramModel frozen({Piece{"a", std::log(0.4)},
                             Piece{"b", std::log(0.3)}});
  const UnigramModel model({Piece{"ab", std::log(0.2)}});
  const UnigramModel updated = EmStep(model, &frozen, RawCorpus({"ab"}));
  REQUIRE(updated.size() == 1);
  CHECK(ScoreOf(updated, "ab") ==
        doctest::Approx(std::log(0.625 / 1.375)).epsilon(1e-12));
  // Frozen scores pass through merging bit-identically.
  const UnigramModel merged = MergeModels(frozen, updated);
  CHECK(merged.pieces()[0].log_prob == std::log(0.4));
  CHECK(merged.pieces()[1].log_prob == std::log(0.3));
}

TEST_CASE("em_step agrees with the oracle on random corpora") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> n_sentences(1, 5);
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<int> abc(0, 2);
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<std::string> lines;
    const int n = n_sentences(rng);
    for (int s = 0; s < n; ++s) {
      std::string line;
      const int m = len(rng);
      for (int k = 0; k < m; ++k) {
        line.push_back(static_cast<char>('a' + abc(rng)));
      }
      lines.push_back(line);
    }
    const Corpus corpus = RawCorpus(lines);
    TrainerConfig config;
    config.max_piece_len = 3;
    config.min_count = 1;
    const UnigramModel model = HarvestCandidates(corpus, config);
    if (model.empty()) continue;

    const UnigramModel updated = EmStep(model, nullptr, corpus);
    std::vector<std::u32string> sentences;
    for (const NormalizedText& sentence : corpus.sentences()) {
      sentences.push_back(sentence.chars);
    }
    const auto oracle = testing::OracleEmStep(model.pieces(), {}, sentences);
    REQUIRE(updated.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      CHECK(std::abs(updated.pieces()[i].log_prob - oracle[i].log_prob) <=
            1e-9);
    }
  }
}

TEST_CASE("prune removes the lowest-scored unprotected pieces") {
  std::vector<Piece> pieces;
  for (int i = 0; i < 10; ++i) {
    pieces.push_back(Piece{"p" + std::to_string(i), -1.0 * i});
  }
  const UnigramModel model(pieces);
  const UnigramModel pruned = Prune(model, 0.2, {});
  REQUIRE(pruned.size() == 8);
  CHECK_FALSE(pruned.Contains("p9"));
  CHECK_FALSE(pruned.Contains("p8"));
  CHECK(pruned.Contains("p7"));
}

TEST_CASE("prune floor semantics keep sub-step models intact") {
  const UnigramModel model({Piece{"x", -1.0}, Piece{"y", -9.0}});
  const UnigramModel pruned = Prune(model, 0.5, {"y"});
  // prunable = {x}, floor(0.5 * 1) = 0 removed.
  CHECK(pruned.size() == 2);
}

TEST_CASE("prune lands exactly on the vocabulary target") {
  std::vector<Piece> pieces;
  for (int i = 0; i < 1005; ++i) {
    pieces.push_back(Piece{"p" + std::to_string(i), -0.001 * i});
  }
  const UnigramModel model(pieces);
  // A full step would remove 201; the floor caps it at 5.
  const UnigramModel pruned = Prune(model, 0.2, {}, 1000);
  CHECK(pruned.size() == 1000);
  CHECK_FALSE(pruned.Contains("p1004"));
  CHECK(pruned.Contains("p999"));
}

TEST_CASE("prune drops -inf sentinels first") {
  const UnigramModel model({Piece{"keep", -1.0}, Piece{"dead", -kInf},
                            Piece{"low", -50.0}, Piece{"mid", -2.0},
                            Piece{"hi", -0.5}});
  const UnigramModel pruned = Prune(model, 0.2, {});
  REQUIRE(pruned.size() == 4);
  CHECK_FALSE(pruned.Contains("dead"));
  CHECK(pruned.Contains("low"));
}

TEST_CASE("prune rejects ratios outside (0, 1)") {
  const UnigramModel model({Piece{"a", -1.0}});
  CHECK_THROWS_AS(Prune(model, 0.0, {}), ConfigError);
  CHECK_THROWS_AS(Prune(model, 1.0, {}), ConfigError);
}

TEST_CASE("train reaches the target with full character coverage") {
  testing::MorphemeCorpusSpec spec;
  spec.seed = 404;
  spec.sentences = 100;
  spec.letters = testing::LatinLetters(8);
  spec.morphemes = 30;
  const std::vector<std::string> lines = testing::MakeMorphemeCorpus(spec);
  const Corpus corpus = Corpus::FromLines(lines);

  TrainerConfig config;
  config.vocab_size = 30;
  config.min_count = 2;
  const UnigramModel model = Train(corpus, config);
  CHECK(model.size() == 30);

  for (char32_t c : corpus.Alphabet()) {
    std::string surface;
    AppendUtf8(c, &surface);
    CHECK(model.Contains(surface));
  }
  for (const NormalizedText& sentence : corpus.sentences()) {
    const TokenSequence seq = Viterbi(BuildLattice(sentence, model));
    for (bool oov : seq.oov_flags) CHECK_FALSE(oov);
  }

  SUBCASE("final vocabulary is a subset of the initial candidates") {
    const UnigramModel seed_model = HarvestCandidates(corpus, config);
    for (const Piece& piece : model.pieces()) {
      CHECK(seed_model.Contains(piece.surface));
    }
  }
}

TEST_CASE("train on a two-letter corpus prunes to the singles") {
  std::vector<std::string> lines(8, "ab");
  TrainerConfig config;
  config.vocab_size = 2;
  config.max_piece_len = 2;
  config.min_count = 1;
  const Corpus corpus = RawCorpus(lines);
  const UnigramModel model = Train(corpus, config);
  REQUIRE(model.size() == 2);
  CHECK(model.Contains("a"));
  CHECK(model.Contains("b"));
  const TokenSequence seq = Encode("ab", model, /*add_dummy_prefix=*/false);
  for (bool oov : seq.oov_flags) CHECK_FALSE(oov);
}

TEST_CASE("train rejects targets below the alphabet size") {
  TrainerConfig config;
  config.vocab_size = 2;
  CHECK_THROWS_AS(
      Train(Corpus::FromLines(std::vector<std::string>{"abcde"}), config),
      ConfigError);
}

TEST_CASE("em steps never decrease the corpus likelihood") {
  testing::MorphemeCorpusSpec spec;
  spec.seed = 17;
  spec.sentences = 30;
  spec.letters = testing::LatinLetters(5);
  spec.morphemes = 12;
  spec.words_min = 2;
  spec.words_max = 4;
  const Corpus corpus = Corpus::FromLines(testing::MakeMorphemeCorpus(spec));
  TrainerConfig config;
  config.min_count = 1;
  config.max_piece_len = 6;
  UnigramModel model = HarvestCandidates(corpus, config);

  double previous = CorpusLogLikelihood(model, nullptr, corpus);
  for (int step = 0; step < 10; ++step) {
    model = EmStep(model, nullptr, corpus);
    const double current = CorpusLogLikelihood(model, nullptr, corpus);
    CHECK(current >= previous - 1e-9);
    previous = current;
  }
}

TEST_CASE("em step output stays on the probability simplex") {
  const Corpus corpus = RawCorpus({"abab", "aab", "bb"});
  TrainerConfig config;
  config.min_count = 1;
  config.max_piece_len = 3;
  UnigramModel model = HarvestCandidates(corpus, config);
  for (int step = 0; step < 3; ++step) {
    model = EmStep(model, nullptr, corpus);
    double sum = 0.0;
    bool has_sentinel = false;
    for (const Piece& piece : model.pieces()) {
      if (std::isfinite(piece.log_prob)) {
        sum += std::exp(piece.log_prob);
      } else {
        has_sentinel = true;
      }
    }
    CHECK(sum <= 1.0 + 1e-9);
    if (!has_sentinel) CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("starved protected pieces are floored back to a usable score") {
  const UnigramModel model({Piece{"mor", -2.0}, Piece{"m", -kInf},
                            Piece{"o", -kInf}, Piece{"r", -7.5},
                            Piece{"junk", -kInf}});
  const UnigramModel floored =
      FloorProtectedSentinels(model, {"m", "o", "r"});
  // Protected sentinels land one margin below the worst finite score.
  CHECK(ScoreOf(floored, "m") == -7.5 - kUnkLogProbMargin);
  CHECK(ScoreOf(floored, "o") == -7.5 - kUnkLogProbMargin);
  CHECK(ScoreOf(floored, "r") == -7.5);
  CHECK(ScoreOf(floored, "mor") == -2.0);
  // Unprotected sentinels are left for the next prune.
  CHECK(floored.pieces()[4].log_prob == -kInf);

  SUBCASE("no sentinels means no change") {
    const UnigramModel clean({Piece{"a", -1.0}});
    CHECK(FloorProtectedSentinels(clean, {"a"}).pieces()[0].log_prob == -1.0);
  }
}

TEST_CASE("corpus ingestion normalizes and derives the alphabet") {
  const Corpus corpus =
      Corpus::FromLines(std::vector<std::string>{"a b", "cc"});
  REQUIRE(corpus.size() == 2);
  CHECK(EncodeUtf8(corpus.sentences()[0].chars) == "▁a▁b");
  CHECK(corpus.Alphabet() ==
        std::set<char32_t>{kSpaceSymbol, U'a', U'b', U'c'});
}

}  // namespace
}  // namespace subtok
