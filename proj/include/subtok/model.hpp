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

#ifndef SUBTOK_MODEL_HPP_
#define SUBTOK_MODEL_HPP_

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace subtok {

// The space marker used by lossless whitespace escaping (U+2581).
inline constexpr char32_t kSpaceSymbol = U'▁';
inline constexpr std::string_view kSpaceSymbolUtf8 = "\xe2\x96\x81";

// Margin between the worst in-vocabulary score and the unknown-run score.
inline constexpr double kUnkLogProbMargin = 10.0;

// A vocabulary entry: a subword surface (UTF-8, non-empty, no raw space)
// with its natural-log probability. -inf is tolerated transiently during
// training as a marked-for-pruning sentinel; serialized models are finite.
struct Piece {
  std::string surface;
  double log_prob = 0.0;
};

// Sentence text after whitespace escaping: no raw U+0020 remains.
struct NormalizedText {
  std::u32string chars;

  bool empty() const { return chars.empty(); }
  std::size_t size() const { return chars.size(); }
};

// One piece occurring as a prefix of some text suffix.
struct PrefixMatch {
  std::size_t piece_index;
  std::size_t length;  // in characters
};

struct StringViewHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// An ordered piece inventory. Piece order is the serialization order.
// Immutable after construction; training produces new model values.
class UnigramModel {
 public:
  UnigramModel();
  explicit UnigramModel(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  bool empty() const { return pieces_.empty(); }

  // Returns the piece index for a surface, or npos if absent.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t FindIndex(std::string_view surface) const;
  bool Contains(std::string_view surface) const {
    return FindIndex(surface) != npos;
  }

  // Every character occurring in any piece surface.
  const std::set<char32_t>& alphabet() const { return alphabet_; }

  // Score of unknown-run edges: strictly below every piece score.
  double unk_log_prob() const { return unk_log_prob_; }

  // Length in characters of the longest surface (0 for an empty model).
  std::size_t max_piece_chars() const { return max_piece_chars_; }

  // Appends to `out` every piece whose surface is a prefix of `text`.
  // Time is proportional to the number of characters inspected, i.e. to
  // the longest match, not to the vocabulary size.
  void MatchPrefixes(std::u32string_view text,
                     std::vector<PrefixMatch>* out) const;

 private:
  struct TrieNode {
    // Sorted by character for binary search.
    std::vector<std::pair<char32_t, std::uint32_t>> children;
    std::uint32_t piece_index = kNoPiece;
  };
  static constexpr std::uint32_t kNoPiece = 0xFFFFFFFFu;

  std::vector<Piece> pieces_;
  std::unordered_map<std::string, std::size_t, StringViewHash, std::equal_to<>>
      index_;
  std::set<char32_t> alphabet_;
  std::vector<TrieNode> trie_;
  double unk_log_prob_ = -kUnkLogProbMargin;
  std::size_t max_piece_chars_ = 0;
};

// Replaces every U+0020 with U+2581 and, when `add_dummy_prefix` is set and
// the input is non-empty, prepends one U+2581. Nothing else is touched; in
// particular no Unicode canonicalization is performed.
NormalizedText Normalize(std::string_view raw, bool add_dummy_prefix = true);

// Inverse of Normalize over token surfaces: concatenates, maps U+2581 back
// to space, and strips exactly one leading space if present.
std::string Denormalize(std::span<const std::string> tokens);

// Parses the text vocabulary format: one `surface<TAB>score` per line,
// UTF-8, LF line endings, no header. Compatible with the files written by
// SentencePiece's spm_export_vocab. Empty lines are ignored.
UnigramModel LoadModel(std::string_view text);
UnigramModel LoadModelFile(const std::string& path);

// Serializes in stored piece order, one `surface<TAB>score` per line with
// six fractional digits. LoadModel(ExportVocab(m)) reproduces m's surfaces
// and scores to serialization precision.
std::string ExportVocab(const UnigramModel& model);

// Concatenates two models: `original` pieces first, order and scores
// untouched, then `additional`. Throws ValidationError on duplicates.
UnigramModel MergeModels(const UnigramModel& original,
                         const UnigramModel& additional);

}  // namespace subtok

#endif  // SUBTOK_MODEL_HPP_
