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

#include "subtok/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "subtok/error.hpp"
#include "subtok/unicode.hpp"

namespace subtok {

UnigramModel::UnigramModel() { trie_.emplace_back(); }

UnigramModel::UnigramModel(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
  trie_.emplace_back();  // root
  index_.reserve(pieces_.size());
  double min_finite = 0.0;
  bool has_finite = false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& piece = pieces_[i];
    if (piece.surface.empty()) {
      throw ValidationError("piece " + std::to_string(i) +
                            " has an empty surface");
    }
    if (std::isnan(piece.log_prob) ||
        piece.log_prob == std::numeric_limits<double>::infinity()) {
      throw ValidationError("piece \"" + piece.surface +
                            "\" has a non-finite score");
    }
    if (!index_.emplace(piece.surface, i).second) {
      throw ValidationError("duplicate surface \"" + piece.surface + "\"");
    }
    const std::u32string chars = DecodeUtf8(piece.surface);
    for (char32_t c : chars) {
      if (c == U' ') {
        throw ValidationError("piece \"" + piece.surface +
                              "\" contains a raw space");
      }
      alphabet_.insert(c);
    }
    max_piece_chars_ = std::max(max_piece_chars_, chars.size());
    if (std::isfinite(piece.log_prob)) {
      min_finite = has_finite ? std::min(min_finite, piece.log_prob)
                              : piece.log_prob;
      has_finite = true;
    }
    // Insert into the prefix trie.
    std::uint32_t node = 0;
    for (char32_t c : chars) {
      auto& children = trie_[node].children;
      auto it = std::lower_bound(
          children.begin(), children.end(), c,
          [](const auto& entry, char32_t key) { return entry.first < key; });
      if (it == children.end() || it->first != c) {
        const auto next = static_cast<std::uint32_t>(trie_.size());
        it = children.emplace(it, c, next);
        trie_.emplace_back();
      }
      node = it->second;
    }
    trie_[node].piece_index = static_cast<std::uint32_t>(i);
  }
  unk_log_prob_ = (has_finite ? min_finite : 0.0) - kUnkLogProbMargin;
}

std::size_t UnigramModel::FindIndex(std::string_view surface) const {
  const auto it = index_.find(surface);
  return it == index_.end() ? npos : it->second;
}

void UnigramModel::MatchPrefixes(std::u32string_view text,
                                 std::vector<PrefixMatch>* out) const {
  std::uint32_t node = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto& children = trie_[node].children;
    const auto it = std::lower_bound(
        children.begin(), children.end(), text[i],
        [](const auto& entry, char32_t key) { return entry.first < key; });
    if (it == children.end() || it->first != text[i]) return;
    node = it->second;
    if (trie_[node].piece_index != kNoPiece) {
      out->push_back(PrefixMatch{trie_[node].piece_index, i + 1});
    }
  }
}

NormalizedText Normalize(std::string_view raw, bool add_dummy_prefix) {
  NormalizedText out;
  if (raw.empty()) return out;
  std::u32string chars = DecodeUtf8(raw);
  out.chars.reserve(chars.size() + 1);
  if (add_dummy_prefix) out.chars.push_back(kSpaceSymbol);
  for (char32_t c : chars) {
    out.chars.push_back(c == U' ' ? kSpaceSymbol : c);
  }
  return out;
}

std::string Denormalize(std::span<const std::string> tokens) {
  std::u32string chars;
  for (const std::string& token : tokens) {
    const std::u32string piece = DecodeUtf8(token);
    for (char32_t c : piece) {
      chars.push_back(c == kSpaceSymbol ? U' ' : c);
    }
  }
  if (!chars.empty() && chars.front() == U' ') chars.erase(chars.begin(), chars.begin() + 1);
  return EncodeUtf8(chars);
}

UnigramModel LoadModel(std::string_view text) {
  std::vector<Piece> pieces;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                       : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": missing tab separator");
    }
    const std::string_view surface = line.substr(0, tab);
    const std::string_view score_text = line.substr(tab + 1);
    double score = 0.0;
    const auto [end, ec] = std::from_chars(
        score_text.data(), score_text.data() + score_text.size(), score);
    if (ec != std::errc() || end != score_text.data() + score_text.size()) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": unparseable score \"" + std::string(score_text) +
                       "\"");
    }
    if (!std::isfinite(score)) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": non-finite score");
    }
    pieces.push_back(Piece{std::string(surface), score});
  }
  try {
    return UnigramModel(std::move(pieces));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("vocabulary: ") + e.what());
  }
}

UnigramModel LoadModelFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return LoadModel(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string ExportVocab(const UnigramModel& model) {
  std::string out;
  char score_text[64];
  for (const Piece& piece : model.pieces()) {
    std::snprintf(score_text, sizeof(score_text), "%.6f", piece.log_prob);
    out += piece.surface;
    out += '\t';
    out += score_text;
    out += '\n';
  }
  return out;
}

UnigramModel MergeModels(const UnigramModel& original,
                         const UnigramModel& additional) {
  std::vector<Piece> pieces;
  pieces.reserve(original.size() + additional.size());
  pieces.insert(pieces.end(), original.pieces().begin(),
                original.pieces().end());
  pieces.insert(pieces.end(), additional.pieces().begin(),
                additional.pieces().end());
  return UnigramModel(std::move(pieces));
}

}  // namespace subtok
