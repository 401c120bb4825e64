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

#ifndef SUBTOK_LATTICE_HPP_
#define SUBTOK_LATTICE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subtok/model.hpp"

namespace subtok {

struct LatticeEdge {
  std::size_t begin;        // character index, inclusive
  std::size_t end;          // character index, exclusive
  std::size_t piece_index;  // UnigramModel::npos for unknown edges
  double log_prob;
  bool is_unknown;
};

// A segmentation lattice over one normalized sentence. Paths from position
// 0 to `length` are segmentations; edges are piece occurrences plus
// unknown-run edges. The referenced model must outlive the lattice.
struct Lattice {
  std::size_t length = 0;
  std::u32string text;
  const UnigramModel* model = nullptr;
  std::vector<LatticeEdge> edges;
  // edges_at[p] lists indices of edges beginning at position p.
  std::vector<std::vector<std::uint32_t>> edges_at;

  std::string EdgeSurface(const LatticeEdge& edge) const;
};

struct TokenSequence {
  std::vector<std::string> tokens;
  double total_log_prob = 0.0;
  std::vector<bool> oov_flags;  // true for unknown-run tokens
};

struct ForwardBackwardResult {
  // Posterior expected occurrence count per piece surface. Unknown-run
  // edges carry no entry: they are not vocabulary items.
  std::unordered_map<std::string, double> expected_counts;
  double log_z = 0.0;
  // Same mass computed from the backward pass; agrees with log_z up to
  // floating-point noise and is exposed for consistency checking.
  double log_z_backward = 0.0;
};

// Builds the lattice: one edge per occurrence of a model surface as a
// substring of `text`, one edge per maximal run of out-of-alphabet
// characters (scored unk_log_prob), and a single-character unknown edge at
// any remaining position with no outgoing edge, so that full connectivity
// from 0 to length always holds.
Lattice BuildLattice(const NormalizedText& text, const UnigramModel& model);
Lattice BuildLattice(const NormalizedText& text, UnigramModel&& model) =
    delete;  // the lattice keeps a reference; temporaries would dangle

// Best path by total log probability. Ties are broken deterministically:
// fewer tokens, then longer last edge, then lexicographically smaller
// surface.
TokenSequence Viterbi(const Lattice& lattice);

ForwardBackwardResult ForwardBackward(const Lattice& lattice);

// E-step workhorse: adds posterior expected counts per piece index into
// `counts` (sized lattice.model->size()) and returns log Z.
double AccumulateExpectedCounts(const Lattice& lattice,
                                std::span<double> counts);

// Normalize, build the lattice, run Viterbi.
TokenSequence Encode(std::string_view raw, const UnigramModel& model,
                     bool add_dummy_prefix = true);

// Inverse of Encode on surfaces; same as Denormalize.
std::string Decode(std::span<const std::string> tokens);

}  // namespace subtok

#endif  // SUBTOK_LATTICE_HPP_
