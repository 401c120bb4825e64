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

#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subtok/error.hpp"
#include "subtok/extender.hpp"
#include "subtok/lattice.hpp"
#include "subtok/model.hpp"
#include "subtok/stats.hpp"
#include "subtok/trainer.hpp"

namespace subtok {

namespace {

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << contents;
  if (!out) throw Error("write failed: " + path);
}

std::string FormatScore(double value) {
  char text[64];
  std::snprintf(text, sizeof(text), "%.6f", value);
  return text;
}

void RunEncode(const std::string& model_path, bool show_scores,
               std::istream& in, std::ostream& out) {
  const UnigramModel model = LoadModelFile(model_path);
  std::string line;
  while (std::getline(in, line)) {
    const TokenSequence seq = Encode(line, model);
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      if (i > 0) out << ' ';
      out << seq.tokens[i];
    }
    if (show_scores) out << '\t' << FormatScore(seq.total_log_prob);
    out << '\n';
  }
}

void RunDecode(const std::string& model_path, std::istream& in,
               std::ostream& out) {
  if (!model_path.empty()) LoadModelFile(model_path);  // path validation only
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t space = line.find(' ', pos);
      const std::size_t end = space == std::string::npos ? line.size() : space;
      if (end > pos) tokens.push_back(line.substr(pos, end - pos));
      pos = end + 1;
    }
    out << Decode(tokens) << '\n';
  }
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"unigram subword tokenizer with vocabulary extension"};
  app.require_subcommand(1);

  TrainerConfig trainer_config;
  std::string input_path;
  std::string output_path;
  std::string model_path;
  std::string original_path;
  std::string reference_path;
  std::string additional_path;
  std::string merged_path;
  std::size_t add_size = 2000;
  bool show_scores = false;
  bool machine_format = false;

  auto add_trainer_options = [&trainer_config](CLI::App* cmd) {
    cmd->add_option("--max-piece-len", trainer_config.max_piece_len,
                    "maximum piece length in characters")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--min-count", trainer_config.min_count,
                    "minimum substring count for candidates")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed-size", trainer_config.seed_size,
                    "cap on initial candidates")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--prune-ratio", trainer_config.prune_ratio,
                    "fraction of prunable pieces removed per iteration");
    cmd->add_option("--em-iters", trainer_config.em_inner_iters,
                    "EM iterations per pruning round")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--final-em-iters", trainer_config.final_em_iters,
                    "polish EM iterations after the main loop")
        ->check(CLI::NonNegativeNumber);
  };

  CLI::App* train = app.add_subcommand("train", "learn a model from scratch");
  train->add_option("--input", input_path, "corpus, one sentence per line")
      ->required();
  train->add_option("--vocab-size", trainer_config.vocab_size,
                    "target vocabulary size")
      ->required()
      ->check(CLI::PositiveNumber);
  train->add_option("--output", output_path, "model file to write")
      ->required();
  add_trainer_options(train);

  CLI::App* extend = app.add_subcommand(
      "extend", "learn additional subwords for a new script");
  extend->add_option("--input", input_path, "corpus, one sentence per line")
      ->required();
  extend->add_option("--original", original_path, "original model file")
      ->required();
  extend->add_option("--add-size", add_size, "additional vocabulary size")
      ->required()
      ->check(CLI::PositiveNumber);
  extend
      ->add_option("--output-additional", additional_path,
                   "file for the additional model")
      ->required();
  extend
      ->add_option("--output-merged", merged_path,
                   "file for the merged model")
      ->required();
  add_trainer_options(extend);

  CLI::App* encode =
      app.add_subcommand("encode", "tokenize stdin lines to stdout");
  encode->add_option("--model", model_path, "model file")->required();
  encode->add_flag("--show-scores", show_scores,
                   "append the path log probability to each line");

  CLI::App* decode =
      app.add_subcommand("decode", "detokenize stdin lines to stdout");
  decode->add_option("--model", model_path,
                     "model file (accepted for pipeline symmetry)");

  CLI::App* stats =
      app.add_subcommand("stats", "tokenization metrics for a corpus");
  stats->add_option("--model", model_path, "model file")->required();
  stats->add_option("--reference", reference_path, "reference vocabulary")
      ->required();
  stats->add_option("--input", input_path, "corpus, one sentence per line")
      ->required();
  stats->add_flag("--machine", machine_format,
                  "single tab-separated record instead of key: value lines");

  CLI::App* export_vocab =
      app.add_subcommand("export-vocab", "print the canonical serialization");
  export_vocab->add_option("--model", model_path, "model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (train->parsed()) {
      const Corpus corpus = Corpus::FromFile(input_path);
      const UnigramModel model = Train(corpus, trainer_config);
      WriteFile(output_path, ExportVocab(model));
      err << "trained " << model.size() << " pieces from " << corpus.size()
          << " sentences\n";
    } else if (extend->parsed()) {
      const UnigramModel original = LoadModelFile(original_path);
      const Corpus corpus = Corpus::FromFile(input_path);
      ExtensionConfig config;
      config.additional_vocab_size = add_size;
      config.trainer = trainer_config;
      const ExtensionResult result = Extend(corpus, original, config);
      WriteFile(additional_path, ExportVocab(result.additional));
      WriteFile(merged_path, ExportVocab(result.merged));
      err << "learned " << result.additional.size()
          << " additional pieces; merged model has " << result.merged.size()
          << "\n";
    } else if (encode->parsed()) {
      RunEncode(model_path, show_scores, in, out);
    } else if (decode->parsed()) {
      RunDecode(model_path, in, out);
    } else if (stats->parsed()) {
      const UnigramModel model = LoadModelFile(model_path);
      const UnigramModel reference = LoadModelFile(reference_path);
      const Corpus corpus = Corpus::FromFile(input_path);
      const TokenizationReport report =
          Analyze(corpus, model, SurfaceSet(reference));
      if (machine_format) {
        out << "tokens_per_sentence=" << FormatScore(report.tokens_per_sentence)
            << "\toov_rate=" << FormatScore(report.oov_rate)
            << "\twords_for_no_oov=" << report.words_for_no_oov << '\n';
      } else {
        out << "tokens_per_sentence: "
            << FormatScore(report.tokens_per_sentence) << '\n'
            << "oov_rate: " << FormatScore(report.oov_rate) << '\n'
            << "words_for_no_oov: " << report.words_for_no_oov << '\n';
      }
    } else if (export_vocab->parsed()) {
      out << ExportVocab(LoadModelFile(model_path));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace subtok
