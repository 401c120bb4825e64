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

#include "subtok/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subtok/error.hpp"
#include "subtok/unicode.hpp"

namespace subtok {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

std::string Lattice::EdgeSurface(const LatticeEdge& edge) const {
  if (!edge.is_unknown) return model->pieces()[edge.piece_index].surface;
  return EncodeUtf8(
      std::u32string_view(text).substr(edge.begin, edge.end - edge.begin));
}

Lattice BuildLattice(const NormalizedText& text, const UnigramModel& model) {
  Lattice lattice;
  lattice.text = text.chars;
  lattice.model = &model;
  const std::size_t n = text.size();
  lattice.length = n;
  lattice.edges_at.resize(n);
  if (n == 0) return lattice;

  const auto& alphabet = model.alphabet();
  std::vector<bool> in_alphabet(n);
  for (std::size_t i = 0; i < n; ++i) {
    in_alphabet[i] = alphabet.count(text.chars[i]) > 0;
  }

  auto add_edge = [&lattice](LatticeEdge edge) {
    lattice.edges_at[edge.begin].push_back(
        static_cast<std::uint32_t>(lattice.edges.size()));
    lattice.edges.push_back(edge);
  };

  // Piece occurrences. Pieces carrying the -inf marked-for-pruning
  // sentinel contribute no edges; they are already dead weight and would
  // otherwise sink every path through positions only they cover.
  std::vector<PrefixMatch> matches;
  const std::u32string_view chars(lattice.text);
  for (std::size_t i = 0; i < n; ++i) {
    matches.clear();
    model.MatchPrefixes(chars.substr(i), &matches);
    for (const PrefixMatch& match : matches) {
      const double log_prob = model.pieces()[match.piece_index].log_prob;
      if (log_prob == -std::numeric_limits<double>::infinity()) continue;
      add_edge(LatticeEdge{i, i + match.length, match.piece_index, log_prob,
                           false});
    }
  }

  // Maximal runs of out-of-alphabet characters, kept atomic.
  for (std::size_t i = 0; i < n;) {
    if (in_alphabet[i]) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n && !in_alphabet[j]) ++j;
    add_edge(LatticeEdge{i, j, UnigramModel::npos, model.unk_log_prob(), true});
    i = j;
  }

  // In-alphabet positions where no surface matches would disconnect the
  // lattice (possible with externally built vocabularies that lack some
  // single-character pieces); cover them with one-character unknown edges.
  for (std::size_t i = 0; i < n; ++i) {
    if (in_alphabet[i] && lattice.edges_at[i].empty()) {
      add_edge(
          LatticeEdge{i, i + 1, UnigramModel::npos, model.unk_log_prob(), true});
    }
  }
  return lattice;
}

namespace {

struct ViterbiState {
  double score = kNegInf;
  std::size_t token_count = 0;
  std::uint32_t back_edge = 0;
  bool reachable = false;
};

}  // namespace

TokenSequence Viterbi(const Lattice& lattice) {
  TokenSequence result;
  const std::size_t n = lattice.length;
  if (n == 0) return result;

  std::vector<ViterbiState> states(n + 1);
  states[0].score = 0.0;
  states[0].reachable = true;

  for (std::size_t pos = 0; pos < n; ++pos) {
    if (!states[pos].reachable) continue;
    for (std::uint32_t edge_id : lattice.edges_at[pos]) {
      const LatticeEdge& edge = lattice.edges[edge_id];
      const double score = states[pos].score + edge.log_prob;
      const std::size_t tokens = states[pos].token_count + 1;
      ViterbiState& target = states[edge.end];
      bool better;
      if (!target.reachable || score > target.score) {
        better = true;
      } else if (score < target.score) {
        better = false;
      } else if (tokens != target.token_count) {
        better = tokens < target.token_count;
      } else {
        const LatticeEdge& incumbent = lattice.edges[target.back_edge];
        const std::size_t len = edge.end - edge.begin;
        const std::size_t incumbent_len = incumbent.end - incumbent.begin;
        if (len != incumbent_len) {
          better = len > incumbent_len;
        } else {
          better =
              lattice.EdgeSurface(edge) < lattice.EdgeSurface(incumbent);
        }
      }
      if (better) {
        target.score = score;
        target.token_count = tokens;
        target.back_edge = edge_id;
        target.reachable = true;
      }
    }
  }

  if (!states[n].reachable) {
    throw Error("internal: disconnected lattice");
  }

  std::vector<std::uint32_t> path;
  for (std::size_t pos = n; pos > 0;) {
    const std::uint32_t edge_id = states[pos].back_edge;
    path.push_back(edge_id);
    pos = lattice.edges[edge_id].begin;
  }
  std::reverse(path.begin(), path.end());

  result.total_log_prob = states[n].score;
  result.tokens.reserve(path.size());
  result.oov_flags.reserve(path.size());
  for (std::uint32_t edge_id : path) {
    const LatticeEdge& edge = lattice.edges[edge_id];
    result.tokens.push_back(lattice.EdgeSurface(edge));
    result.oov_flags.push_back(edge.is_unknown);
  }
  return result;
}

namespace {

// Shared forward/backward passes; posterior accumulation differs per caller.
struct AlphaBeta {
  std::vector<double> alpha;
  std::vector<double> beta;
};

AlphaBeta RunForwardBackward(const Lattice& lattice) {
  const std::size_t n = lattice.length;
  AlphaBeta ab;
  ab.alpha.assign(n + 1, kNegInf);
  ab.beta.assign(n + 1, kNegInf);
  ab.alpha[0] = 0.0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (ab.alpha[pos] == kNegInf) continue;
    for (std::uint32_t edge_id : lattice.edges_at[pos]) {
      const LatticeEdge& edge = lattice.edges[edge_id];
      ab.alpha[edge.end] =
          LogAdd(ab.alpha[edge.end], ab.alpha[pos] + edge.log_prob);
    }
  }
  ab.beta[n] = 0.0;
  for (std::size_t pos = n; pos-- > 0;) {
    for (std::uint32_t edge_id : lattice.edges_at[pos]) {
      const LatticeEdge& edge = lattice.edges[edge_id];
      if (ab.beta[edge.end] == kNegInf) continue;
      ab.beta[pos] =
          LogAdd(ab.beta[pos], edge.log_prob + ab.beta[edge.end]);
    }
  }
  return ab;
}

}  // namespace

ForwardBackwardResult ForwardBackward(const Lattice& lattice) {
  ForwardBackwardResult result;
  if (lattice.length == 0) return result;
  const AlphaBeta ab = RunForwardBackward(lattice);
  const double log_z = ab.alpha[lattice.length];
  result.log_z = log_z;
  result.log_z_backward = ab.beta[0];
  if (log_z == kNegInf) {
    throw Error("internal: disconnected lattice");
  }
  for (const LatticeEdge& edge : lattice.edges) {
    if (edge.is_unknown) continue;
    if (ab.alpha[edge.begin] == kNegInf || ab.beta[edge.end] == kNegInf) {
      continue;
    }
    const double posterior =
        std::exp(ab.alpha[edge.begin] + edge.log_prob + ab.beta[edge.end] -
                 log_z);
    result.expected_counts[lattice.model->pieces()[edge.piece_index].surface] +=
        posterior;
  }
  return result;
}

double AccumulateExpectedCounts(const Lattice& lattice,
                                std::span<double> counts) {
  if (lattice.length == 0) return 0.0;
  const AlphaBeta ab = RunForwardBackward(lattice);
  const double log_z = ab.alpha[lattice.length];
  if (log_z == kNegInf) {
    throw Error("internal: disconnected lattice");
  }
  for (const LatticeEdge& edge : lattice.edges) {
    if (edge.is_unknown) continue;
    if (ab.alpha[edge.begin] == kNegInf || ab.beta[edge.end] == kNegInf) {
      continue;
    }
    counts[edge.piece_index] += std::exp(
        ab.alpha[edge.begin] + edge.log_prob + ab.beta[edge.end] - log_z);
  }
  return log_z;
}

TokenSequence Encode(std::string_view raw, const UnigramModel& model,
                     bool add_dummy_prefix) {
  return Viterbi(BuildLattice(Normalize(raw, add_dummy_prefix), model));
}

std::string Decode(std::span<const std::string> tokens) {
  return Denormalize(tokens);
}

}  // namespace subtok
