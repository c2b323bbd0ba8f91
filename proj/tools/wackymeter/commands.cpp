// Copyright 2026-present the wackymeter project
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
#include "commands.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "wackymeter/ablation.hpp"
#include "wackymeter/curve.hpp"
#include "wackymeter/errors.hpp"
#include "wackymeter/format.hpp"
#include "wackymeter/impact_index.hpp"
#include "wackymeter/io.hpp"
#include "wackymeter/lexical_index.hpp"
#include "wackymeter/metrics.hpp"
#include "wackymeter/parallel.hpp"
#include "wackymeter/representation.hpp"
#include "wackymeter/synthetic.hpp"
#include "wackymeter/wackiness.hpp"

namespace wackymeter::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::uint64_t seed = 7;
  unsigned threads = 0;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Seed for every random draw")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads; 0 uses every core")
      ->capture_default_str();
  sub->add_option("--out", c.out, "Output directory")->required();
}

// CLI11 validator built from a parser that throws on bad input.
template <typename Parse>
CLI::Validator parsed_by(Parse parse, const std::string& description) {
  return CLI::Validator(
      [parse](std::string& text) {
        try {
          parse(text);
          return std::string();
        } catch (const std::exception& e) {
          return std::string(e.what());
        }
      },
      description);
}

CLI::Validator one_of(std::vector<std::string> choices) {
  return CLI::IsMember(std::move(choices));
}

void emit(RunContext& ctx, const std::string& name,
          const std::function<void(std::ostream&)>& body) {
  std::ostringstream out;
  body(out);
  write_file(ctx.out / name, out.str());
}

std::optional<Vocabulary> maybe_vocab(RunContext& ctx, const std::string& path) {
  if (path.empty()) return std::nullopt;
  ctx.manifest.add_input(path);
  return load_vocabulary(path);
}

const Vocabulary* ptr(const std::optional<Vocabulary>& v) { return v ? &*v : nullptr; }

TokenSet resolve_special(const std::vector<std::string>& names, const Vocabulary* vocab) {
  TokenSet out;
  for (const auto& name : names) {
    const auto id = vocab->find(name);
    if (!id) throw ValidationError(fmt::format("special token '{}' is not in the vocabulary", name));
    out.insert(*id);
  }
  return out;
}

void require(bool condition, const std::string& message) {
  if (!condition) throw UsageError(message);
}

std::string json_real(double v) { return format_real(v); }

std::vector<Ranking> run_queries(std::size_t n, unsigned threads,
                                 const std::function<Ranking(std::size_t)>& one) {
  std::vector<Ranking> run(n);
  parallel_for(n, threads, [&](std::size_t i) { run[i] = one(i); });
  return run;
}

// --- synth ------------------------------------------------------------------

Command synth_command(CLI::App& root) {
  struct Opts {
    Common common;
    std::size_t vocab_size = 2000;
    std::size_t corpus_size = 1000;
    std::size_t query_count = 100;
    std::string profile = "lexical-overlap";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("synth", "Generate a synthetic model with a known expansion profile");
  add_common(sub, o->common);
  sub->add_option("--vocab-size", o->vocab_size, "Vocabulary size")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--corpus-size", o->corpus_size, "Number of documents")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--query-count", o->query_count, "Number of queries")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--profile", o->profile, "lexical-overlap, random-token or mixed(p)")
      ->check(parsed_by([](const std::string& s) { ExpansionProfile::parse(s); }, "PROFILE"))
      ->capture_default_str();

  Command cmd;
  cmd.app = sub;
  cmd.validate = [] {};
  cmd.run = [o](RunContext& ctx) {
    SyntheticConfig cfg;
    cfg.vocab_size = o->vocab_size;
    cfg.corpus_size = o->corpus_size;
    cfg.query_count = o->query_count;
    cfg.profile = ExpansionProfile::parse(o->profile);
    cfg.seed = o->common.seed;
    const auto model = generate_synthetic_model(cfg);
    const std::map<std::string, std::string> extra{{"profile", cfg.profile.name()}};

    emit(ctx, "vocab.tsv", [&](std::ostream& out) { write_vocabulary(out, model.vocab); });
    emit(ctx, "corpus.jsonl", [&](std::ostream& out) { write_corpus(out, model.corpus); });
    emit(ctx, "queries.jsonl", [&](std::ostream& out) { write_corpus(out, model.queries); });
    emit(ctx, "doc_vectors.jsonl",
         [&](std::ostream& out) { write_pooled_vectors(out, model.doc_vectors, extra); });
    emit(ctx, "query_vectors.jsonl",
         [&](std::ostream& out) { write_pooled_vectors(out, model.query_vectors, extra); });
    emit(ctx, "qrels.txt", [&](std::ostream& out) { write_qrels(out, model.qrels); });
    emit(ctx, "injections.csv", [&](std::ostream& out) {
      out << "input_kind,input_id,token_id,source\n";
      auto rows = [&](const char* kind, const std::vector<InjectionLog>& logs) {
        for (const auto& log : logs) {
          for (const auto& t : log.tokens) {
            out << kind << ',' << csv_field(log.input_id) << ',' << t.token << ','
                << (t.source == ExpansionSource::kLexical ? "lexical" : "random") << '\n';
          }
        }
      };
      rows("document", model.doc_injections);
      rows("query", model.query_injections);
    });
    fmt::print("synthetic model '{}': {} tokens, {} documents, {} queries\n", cfg.profile.name(),
               model.vocab.size(), model.corpus.size(), model.queries.size());
  };
  cmd.common_seed = &o->common.seed;
  cmd.common_out = &o->common.out;
  return cmd;
}

// --- index ------------------------------------------------------------------

Command index_command(CLI::App& root) {
  struct Opts {
    Common common;
    std::string vocab, corpus, vectors;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("index", "Build the lexical and impact indices");
  add_common(sub, o->common);
  sub->add_option("--vocab", o->vocab, "Vocabulary TSV (enables token range checks)");
  sub->add_option("--corpus", o->corpus, "Tokenized corpus JSONL")->required();
  sub->add_option("--vectors", o->vectors, "Pooled document vectors JSONL")->required();

  Command cmd;
  cmd.app = sub;
  cmd.validate = [] {};
  cmd.run = [o](RunContext& ctx) {
    const auto vocab = maybe_vocab(ctx, o->vocab);
    ctx.manifest.add_input(o->corpus);
    ctx.manifest.add_input(o->vectors);
    const auto corpus = load_corpus(o->corpus, ptr(vocab));
    const auto vectors = load_pooled_vectors(o->vectors, ptr(vocab));
    const auto lexical = build_lexical_index(corpus);
    const auto impact = build_impact_index(vectors);
    if (impact.doc_ids().size() != lexical.doc_count()) {
      fmt::print(stderr, "warning: {} vectors for {} corpus documents\n",
                 impact.doc_ids().size(), lexical.doc_count());
    }
    lexical.save(ctx.out / "lexical.idx");
    impact.save(ctx.out / "impact.idx");
    emit(ctx, "posting_lengths.csv", [&](std::ostream& out) {
      out << "token_id,posting_length\n";
      for (const auto& [t, n] : impact.posting_lengths()) out << t << ',' << n << '\n';
    });
    fmt::print("indexed {} documents; impact checksum {}\n", impact.doc_ids().size(),
               impact.checksum());
  };
  cmd.common_seed = &o->common.seed;
  cmd.common_out = &o->common.out;
  return cmd;
}

// --- pool -------------------------------------------------------------------

Command pool_command(CLI::App& root) {
  struct Opts {
    Common common;
    std::string vocab, vectors, aggregation = "max";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("pool", "Pool per-token vectors into one vector per input");
  add_common(sub, o->common);
  sub->add_option("--vocab", o->vocab, "Vocabulary TSV (enables token range checks)");
  sub->add_option("--vectors", o->vectors, "Per-token vectors JSONL")->required();
  sub->add_option("--aggregation", o->aggregation, "max, sum or cls")
      ->check(one_of({"max", "sum", "cls"}))->capture_default_str();

  Command cmd;
  cmd.app = sub;
  cmd.validate = [] {};
  cmd.run = [o](RunContext& ctx) {
    const auto vocab = maybe_vocab(ctx, o->vocab);
    ctx.manifest.add_input(o->vectors);
    const auto file = load_vectors(o->vectors, ptr(vocab));
    if (file.header.format != VectorFormat::kPerToken) {
      throw ValidationError(fmt::format("'{}' already holds pooled vectors", o->vectors));
    }
    const Aggregation mode = parse_aggregation(o->aggregation);
    std::vector<SparseVector> pooled;
    pooled.reserve(file.per_token.size());
    for (const auto& m : file.per_token) {
      pooled.push_back(aggregate(file.header.activated ? m : activate(m), mode));
    }
    auto extra = file.header.extra;
    extra["aggregation"] = to_string(mode);
    emit(ctx, "pooled.jsonl",
         [&](std::ostream& out) { write_pooled_vectors(out, pooled, extra); });
    fmt::print("pooled {} inputs with {}\n", pooled.size(), to_string(mode));
  };
  cmd.common_seed = &o->common.seed;
  cmd.common_out = &o->common.out;
  return cmd;
}

// --- search -----------------------------------------------------------------

Command search_command(CLI::App& root) {
  struct Opts {
    Common common;
    std::string retriever = "impact";
    std::string vocab, vectors, index, query_vectors, corpus, queries, tag;
    std::size_t k = 1000;
    Bm25Params bm25;
    Rm3Params rm3;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("search", "Batch retrieval into a TREC run file");
  add_common(sub, o->common);
  sub->add_option("--retriever", o->retriever, "impact, bm25 or rm3")
      ->check(one_of({"impact", "bm25", "rm3"}))->capture_default_str();
  sub->add_option("--vocab", o->vocab, "Vocabulary TSV (enables token range checks)");
  sub->add_option("--vectors", o->vectors, "Pooled document vectors (impact)");
  sub->add_option("--index", o->index, "Prebuilt impact.idx (impact) or lexical.idx (bm25, rm3)");
  sub->add_option("--query-vectors", o->query_vectors, "Pooled query vectors (impact, bm25)");
  sub->add_option("--corpus", o->corpus, "Tokenized corpus (bm25, rm3)");
  sub->add_option("--queries", o->queries, "Tokenized queries (bm25, rm3)");
  sub->add_option("--k", o->k, "Ranking depth")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--tag", o->tag, "Run tag; defaults to the retriever name");
  sub->add_option("--k1", o->bm25.k1, "BM25 k1")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--b", o->bm25.b, "BM25 b")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sub->add_option("--fb-docs", o->rm3.fb_docs, "RM3 feedback documents")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--fb-terms", o->rm3.fb_terms, "RM3 feedback terms")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--orig-weight", o->rm3.orig_weight, "RM3 weight of the original query")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();

  Command cmd;
  cmd.app = sub;
  cmd.validate = [o] {
    if (o->retriever == "impact") {
      require(o->vectors.empty() != o->index.empty(),
              "impact search needs exactly one of --vectors and --index");
      require(!o->query_vectors.empty(), "impact search needs --query-vectors");
    } else {
      require(o->corpus.empty() != o->index.empty(),
              "lexical search needs exactly one of --corpus and --index");
      if (o->retriever == "rm3") {
        require(!o->queries.empty(), "rm3 needs --queries");
      } else {
        require(o->queries.empty() != o->query_vectors.empty(),
                "bm25 needs exactly one of --queries and --query-vectors");
      }
    }
  };
  cmd.run = [o](RunContext& ctx) {
    const auto vocab = maybe_vocab(ctx, o->vocab);
    const std::string tag = o->tag.empty() ? o->retriever : o->tag;
    const unsigned threads = o->common.threads;
    std::vector<Ranking> run;
    if (o->retriever == "impact") {
      ImpactIndex index;
      if (!o->index.empty()) {
        ctx.manifest.add_input(o->index);
        index = ImpactIndex::load(o->index);
      } else {
        ctx.manifest.add_input(o->vectors);
        index = build_impact_index(load_pooled_vectors(o->vectors, ptr(vocab)));
      }
      ctx.manifest.add_input(o->query_vectors);
      const auto queries = load_pooled_vectors(o->query_vectors, ptr(vocab));
      run = run_queries(queries.size(), threads,
                        [&](std::size_t i) { return index.search(queries[i], o->k); });
    } else {
      LexicalIndex index;
      if (!o->index.empty()) {
        ctx.manifest.add_input(o->index);
        index = LexicalIndex::load(o->index);
      } else {
        ctx.manifest.add_input(o->corpus);
        index = build_lexical_index(load_corpus(o->corpus, ptr(vocab)));
      }
      if (o->retriever == "rm3") {
        ctx.manifest.add_input(o->queries);
        const auto queries = load_corpus(o->queries, ptr(vocab));
        Rm3Params params = o->rm3;
        params.bm25 = o->bm25;
        std::vector<SparseVector> expanded(queries.size());
        parallel_for(queries.size(), threads,
                     [&](std::size_t i) { expanded[i] = rm3_expand(queries[i], index, params); });
        run = run_queries(queries.size(), threads, [&](std::size_t i) {
          return bm25_search(expanded[i], index, o->k, o->bm25);
        });
        emit(ctx, "rm3_queries.jsonl", [&](std::ostream& out) {
          write_pooled_vectors(out, expanded, {{"expansion", "rm3"}});
        });
      } else if (!o->queries.empty()) {
        ctx.manifest.add_input(o->queries);
        const auto queries = load_corpus(o->queries, ptr(vocab));
        run = run_queries(queries.size(), threads, [&](std::size_t i) {
          return bm25_search(queries[i], index, o->k, o->bm25);
        });
      } else {
        ctx.manifest.add_input(o->query_vectors);
        const auto queries = load_pooled_vectors(o->query_vectors, ptr(vocab));
        run = run_queries(queries.size(), threads, [&](std::size_t i) {
          return bm25_search(queries[i], index, o->k, o->bm25);
        });
      }
    }
    emit(ctx, "run.trec", [&](std::ostream& out) { write_run(out, run, tag); });
    fmt::print("{} queries retrieved with {}\n", run.size(), o->retriever);
  };
  cmd.common_seed = &o->common.seed;
  cmd.common_out = &o->common.out;
  return cmd;
}

// --- wackiness --------------------------------------------------------------

Command wackiness_command(CLI::App& root) {
  struct Opts {
    Common common;
    std::string vocab, corpus, vectors, index, queries, query_vectors;
    std::string retriever = "impact";
    std::size_t k = 10;
    std::size_t top = 100;
    std::vector<std::string> special;
    bool exclude_self = false;
    Bm25Params bm25;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("wackiness", "Per-token wackiness scores");
  add_common(sub, o->common);
  sub->add_option("--vocab", o->vocab, "Vocabulary TSV (token strings in the report)");
  sub->add_option("--corpus", o->corpus, "Tokenized corpus (lexical statistics)")->required();
  sub->add_option("--vectors", o->vectors, "Pooled document vectors");
  sub->add_option("--index", o->index, "Prebuilt impact.idx instead of --vectors for retrieval");
  sub->add_option("--queries", o->queries, "Tokenized queries; documents are the inputs if absent");
  sub->add_option("--query-vectors", o->query_vectors, "Pooled query vectors");
  sub->add_option("--retriever", o->retriever, "Ranking function of the model: impact or bm25")
      ->check(one_of({"impact", "bm25"}))->capture_default_str();
  sub->add_option("--k", o->k, "Neighbourhood size")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--top", o->top, "Rows in the top-wacky report")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--special-tokens", o->special, "Token strings never counted as original")
      ->delimiter(',');
  sub->add_flag("--exclude-self", o->exclude_self, "Drop each input from its own neighbourhood");
  sub->add_option("--k1", o->bm25.k1, "BM25 k1")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--b", o->bm25.b, "BM25 b")->check(CLI::Range(0.0, 1.0))->capture_default_str();

  Command cmd;
  cmd.app = sub;
  cmd.validate = [o] {
    require(o->queries.empty() == o->query_vectors.empty(),
            "--queries and --query-vectors go together");
    if (o->queries.empty()) require(!o->vectors.empty(), "document inputs need --vectors");
    if (o->retriever == "impact") {
      require(!o->vectors.empty() || !o->index.empty(), "impact retrieval needs --vectors or --index");
    }
    require(o->special.empty() || !o->vocab.empty(), "--special-tokens needs --vocab");
  };
  cmd.run = [o](RunContext& ctx) {
    const auto vocab = maybe_vocab(ctx, o->vocab);
    ctx.manifest.add_input(o->corpus);
    const auto corpus = load_corpus(o->corpus, ptr(vocab));
    const auto lexical = build_lexical_index(corpus);

    std::vector<SparseVector> doc_vectors;
    if (!o->vectors.empty()) {
      ctx.manifest.add_input(o->vectors);
      doc_vectors = load_pooled_vectors(o->vectors, ptr(vocab));
    }
    std::optional<ImpactIndex> impact;
    std::unique_ptr<Retriever> retriever;
    if (o->retriever == "impact") {
      if (!o->index.empty()) {
        ctx.manifest.add_input(o->index);
        impact = ImpactIndex::load(o->index);
      } else {
        impact = build_impact_index(doc_vectors);
      }
      retriever = std::make_unique<ImpactRetriever>(*impact);
    } else {
      retriever = std::make_unique<Bm25Retriever>(lexical, o->bm25);
    }

    std::vector<TokenizedInput> inputs;
    std::vector<SparseVector> vectors;
    if (!o->queries.empty()) {
      ctx.manifest.add_input(o->queries);
      ctx.manifest.add_input(o->query_vectors);
      inputs = load_corpus(o->queries, ptr(vocab));
      vectors = load_pooled_vectors(o->query_vectors, ptr(vocab));
    } else {
      inputs = corpus;
      vectors = doc_vectors;
    }

    WackinessOptions opts;
    opts.k = o->k;
    opts.special_tokens = o->special.empty() ? TokenSet{} : resolve_special(o->special, ptr(vocab));
    opts.exclude_self = o->exclude_self;
    opts.threads = o->common.threads;
    const auto run = collect_importance(inputs, vectors, *retriever, lexical, opts);
    const auto table = build_table(run);
    const Vocabulary names = vocab ? *vocab : Vocabulary{};

    emit(ctx, "wackiness.csv", [&](std::ostream& out) { write_table_csv(out, table, names); });
    emit(ctx, "top_wacky.csv", [&](std::ostream& out) {
      if (table.rows.empty()) {
        write_report_csv(out, {});
      } else {
        write_report_csv(out, top_wacky_report(table, names, o->top));
      }
    });
    emit(ctx, "importance.jsonl", [&](std::ostream& out) {
      write_importance(out, run,
                       {{"inputs", o->queries.empty() ? "documents" : "queries"},
                        {"k", std::to_string(o->k)},
                        {"retriever", o->retriever}});
    });
    fmt::print("{} inputs, {} scored tokens, {} empty rankings\n", inputs.size(),
               table.scored_count(), run.empty_rankings);
  };
  cmd.common_seed = &o->common.seed;
  cmd.common_out = &o->common.out;
  return cmd;
}

// --- curve ------------------------------------------------------------------

std::pair<std::string, std::string> split_model(const std::string& model_arg) {
  const auto eq = model_arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == model_arg.size()) {
    throw std::invalid_argument(fmt::format("'{}' is not NAME=PATH", model_arg));
  }
  const std::string name = model_arg.substr(0, eq);
  const bool plain = std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
  if (!plain) throw std::invalid_argument(fmt::format("model name '{}' must match [A-Za-z0-9_.-]+", name));
  return {name, model_arg.substr(eq + 1)};
}

Command curve_command(CLI::App& root) {
  struct Opts {
    Common common;
    std::string samples, vocab;
    std::vector<std::string> models;
    bool compare = false;
    bool strict = false;
    std::size_t bins = 100;
    std::size_t repeats = 10;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("curve", "Wackiness curve and W-AUC, or a multi-model comparison");
  add_common(sub, o->common);
  sub->add_option("--samples", o->samples, "importance.jsonl of one model");
  sub->add_flag("--compare", o->compare, "Compare the models given with --model");
  sub->add_option("--model", o->models, "NAME=importance.jsonl, repeatable")
      ->check(parsed_by([](const std::string& s) { split_model(s); }, "NAME=PATH"));
  sub->add_option("--bins", o->bins, "Number of bins")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--repeats", o->repeats, "Bootstrap resamples in compare mode")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_flag("--strict", o->strict, "Rank the whole vocabulary; unscored tokens count as 1.0");
  sub->add_option("--vocab", o->vocab, "Vocabulary TSV (its size drives --strict)");

  Command cmd;
  cmd.app = sub;
  cmd.validate = [o] {
    if (o->compare) {
      require(!o->models.empty() && o->samples.empty(), "--compare takes --model NAME=PATH, not --samples");
      std::set<std::string> names;
      for (const auto& m : o->models) {
        require(names.insert(split_model(m).first).second, "model names must be distinct");
      }
    } else {
      require(!o->samples.empty() && o->models.empty(), "curve needs --samples (or --compare with --model)");
    }
    require(!o->strict || !o->vocab.empty(), "--strict needs --vocab");
  };
  cmd.run = [o](RunContext& ctx) {
    CurveOptions curve_opts;
    if (o->strict) {
      const auto vocab = maybe_vocab(ctx, o->vocab);
      curve_opts.strict = true;
      curve_opts.vocab_size = vocab->size();
    }
    auto write_summary = [&](const std::string& file, const std::string& body) {
      emit(ctx, file, [&](std::ostream& out) { out << body; });
    };

    if (!o->compare) {
      ctx.manifest.add_input(o->samples);
      const auto table = build_table(load_importance(o->samples));
      if (table.rows.empty()) throw ValidationError("no scored tokens: every input lacked expansions");
      const auto curve = build_curve(table, o->bins, curve_opts);
      const double area = w_auc(curve);
      emit(ctx, "curve.csv", [&](std::ostream& out) { write_curve_csv(out, curve); });
      write_summary("summary.json",
                    fmt::format("{{\n  \"bins\": {},\n  \"scored_tokens\": {},\n  \"w_auc\": {}\n}}\n",
                                curve.bin_count, curve.scored_token_count, json_real(area)));
      fmt::print("W-AUC {} over {} tokens in {} bins\n", json_real(area),
                 curve.scored_token_count, curve.bin_count);
      return;
    }

    std::vector<std::pair<std::string, WackinessRun>> runs;
    for (const auto& model_arg : o->models) {
      auto [name, path] = split_model(model_arg);
      ctx.manifest.add_input(path);
      runs.emplace_back(name, load_importance(path));
    }
    CompareOptions opts;
    opts.bins = o->bins;
    opts.repeats = o->repeats;
    opts.seed = o->common.seed;
    opts.curve = curve_opts;
    opts.threads = o->common.threads;
    const auto report = compare_models(runs, opts);
    emit(ctx, "comparison.csv", [&](std::ostream& out) { write_comparison_csv(out, report); });
    emit(ctx, "pairwise.csv", [&](std::ostream& out) {
      out << "model_a,model_b,t,p_value,p_adjusted,significant\n";
      for (const auto& t : report.tests) {
        const auto t_text = std::isfinite(t.t) ? json_real(t.t) : (t.t > 0 ? "inf" : "-inf");
        out << report.models[t.a].name << ',' << report.models[t.b].name << ',' << t_text << ','
            << json_real(t.p_value) << ',' << json_real(t.p_adjusted) << ','
            << (t.significant ? "true" : "false") << '\n';
      }
    });
    for (const auto& [name, run] : runs) {
      const auto table = build_table(run);
      if (table.rows.empty()) continue;
      const auto curve = build_curve(table, o->bins, curve_opts);
      emit(ctx, "curve_" + name + ".csv", [&](std::ostream& out) { write_curve_csv(out, curve); });
    }
    for (const auto& m : report.models) {
      fmt::print("{}: W-AUC {} +/- {} (full set {}), group {}\n", m.name, json_real(m.w_auc),
                 json_real(m.two_sigma), json_real(m.full_w_auc), m.group);
    }
  };
  cmd.common_seed = &o->common.seed;
  cmd.common_out = &o->common.out;
  return cmd;
}

// --- ablate -----------------------------------------------------------------

Command ablate_command(CLI::App& root) {
  struct Opts {
    Common common;
    std::string vocab, queries, query_vectors, vectors, index, qrels, samples;
    std::vector<std::size_t> thresholds;
    std::size_t repeats = 10;
    std::vector<std::string> measures;
    std::string pool = "expansion-observed";
    std::vector<std::string> special;
    int relevance = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("ablate", "Wacky-token removal against a random-removal baseline");
  add_common(sub, o->common);
  sub->add_option("--vocab", o->vocab, "Vocabulary TSV");
  sub->add_option("--queries", o->queries, "Tokenized queries")->required();
  sub->add_option("--query-vectors", o->query_vectors, "Pooled query vectors")->required();
  sub->add_option("--vectors", o->vectors, "Pooled document vectors");
  sub->add_option("--index", o->index, "Prebuilt impact.idx instead of --vectors");
  sub->add_option("--qrels", o->qrels, "TREC qrels")->required();
  sub->add_option("--samples", o->samples, "importance.jsonl of the same model")->required();
  sub->add_option("--thresholds", o->thresholds, "Ascending removal counts")->delimiter(',');
  sub->add_option("--repeats", o->repeats, "Random-removal repeats")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--measures", o->measures, "e.g. MRR@10,Recall@1000,NDCG@10")
      ->delimiter(',')
      ->check(parsed_by([](const std::string& s) { Measure::parse(s); }, "MEASURE"));
  sub->add_option("--pool", o->pool, "Random removal pool")
      ->check(one_of({"expansion-observed", "full-vocabulary"}))->capture_default_str();
  sub->add_option("--special-tokens", o->special, "Token strings never counted as original")
      ->delimiter(',');
  sub->add_option("--relevance-threshold", o->relevance, "Minimum relevant grade")
      ->capture_default_str();

  Command cmd;
  cmd.app = sub;
  cmd.validate = [o] {
    require(o->vectors.empty() != o->index.empty(), "ablate needs exactly one of --vectors and --index");
    require(o->pool != "full-vocabulary" || !o->vocab.empty(), "--pool full-vocabulary needs --vocab");
    require(o->special.empty() || !o->vocab.empty(), "--special-tokens needs --vocab");
    for (std::size_t i = 1; i < o->thresholds.size(); ++i) {
      require(o->thresholds[i - 1] < o->thresholds[i], "--thresholds must be strictly ascending");
    }
  };
  cmd.run = [o](RunContext& ctx) {
    const auto vocab = maybe_vocab(ctx, o->vocab);
    ImpactIndex index;
    if (!o->index.empty()) {
      ctx.manifest.add_input(o->index);
      index = ImpactIndex::load(o->index);
    } else {
      ctx.manifest.add_input(o->vectors);
      index = build_impact_index(load_pooled_vectors(o->vectors, ptr(vocab)));
    }
    for (const auto* p : {&o->queries, &o->query_vectors, &o->qrels, &o->samples}) {
      ctx.manifest.add_input(*p);
    }
    const auto queries = load_corpus(o->queries, ptr(vocab));
    const auto query_vectors = load_pooled_vectors(o->query_vectors, ptr(vocab));
    const auto qrels = load_qrels(o->qrels);
    const auto table = build_table(load_importance(o->samples));

    AblationConfig cfg;
    cfg.thresholds = o->thresholds;
    cfg.repeats = o->repeats;
    cfg.seed = o->common.seed;
    if (!o->measures.empty()) {
      cfg.measures.clear();
      for (const auto& m : o->measures) cfg.measures.push_back(Measure::parse(m));
    }
    cfg.removal_pool = parse_removal_pool(o->pool);
    cfg.vocab_size = vocab ? vocab->size() : 0;
    cfg.special_tokens = o->special.empty() ? TokenSet{} : resolve_special(o->special, ptr(vocab));
    cfg.eval.relevance_threshold = o->relevance;
    cfg.threads = o->common.threads;
    const auto report = run_ablation(queries, query_vectors, index, qrels, table, cfg);

    emit(ctx, "ablation.csv", [&](std::ostream& out) { write_ablation_csv(out, report); });
    emit(ctx, "endpoints.csv", [&](std::ostream& out) { write_endpoints_csv(out, report); });
    std::vector<std::string> clamped;
    for (const auto& row : report.rows) {
      if (row.clamped) clamped.push_back(std::to_string(row.threshold));
    }
    emit(ctx, "summary.json", [&](std::ostream& out) {
      out << fmt::format(
          "{{\n  \"clamped_thresholds\": [{}],\n  \"doc_index_checksum\": {},\n"
          "  \"pool_size\": {},\n  \"removal_pool\": {},\n  \"scored_tokens\": {}\n}}\n",
          fmt::join(clamped, ", "), json_string(report.doc_index_checksum), report.pool_size,
          json_string(to_string(cfg.removal_pool)), table.scored_count());
    });
    fmt::print("{} thresholds x {} repeats over {} queries\n", report.rows.size(),
               report.repeats, queries.size());
  };
  cmd.common_seed = &o->common.seed;
  cmd.common_out = &o->common.out;
  return cmd;
}

// --- eval -------------------------------------------------------------------

Command eval_command(CLI::App& root) {
  struct Opts {
    Common common;
    std::string run, qrels;
    std::vector<std::string> measures;
    int relevance = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = root.add_subcommand("eval", "Effectiveness of a TREC run");
  add_common(sub, o->common);
  sub->add_option("--run", o->run, "TREC run file")->required();
  sub->add_option("--qrels", o->qrels, "TREC qrels")->required();
  sub->add_option("--measures", o->measures, "e.g. MRR@10,Recall@100,NDCG@10")
      ->delimiter(',')
      ->check(parsed_by([](const std::string& s) { Measure::parse(s); }, "MEASURE"));
  sub->add_option("--relevance-threshold", o->relevance, "Minimum relevant grade")
      ->capture_default_str();

  Command cmd;
  cmd.app = sub;
  cmd.validate = [] {};
  cmd.run = [o](RunContext& ctx) {
    ctx.manifest.add_input(o->run);
    ctx.manifest.add_input(o->qrels);
    const auto run = load_run(o->run);
    const auto qrels = load_qrels(o->qrels);
    std::vector<Measure> measures;
    for (const auto& m : o->measures) measures.push_back(Measure::parse(m));
    if (measures.empty()) measures = default_measures();
    EvalOptions opts;
    opts.relevance_threshold = o->relevance;
    const auto results = evaluate(run, qrels, measures, opts);
    emit(ctx, "eval.csv", [&](std::ostream& out) { write_eval_csv(out, results); });
    for (const auto& r : results) {
      fmt::print("{}\t{}\t({} queries)\n", r.measure.name(), json_real(r.mean), r.per_query.size());
    }
  };
  cmd.common_seed = &o->common.seed;
  cmd.common_out = &o->common.out;
  return cmd;
}

}  // namespace

std::vector<Command> register_commands(CLI::App& root) {
  return {synth_command(root),  index_command(root),     pool_command(root),
          search_command(root), wackiness_command(root), curve_command(root),
          ablate_command(root), eval_command(root)};
}

std::map<std::string, std::string> config_snapshot(const CLI::App& sub) {
  static const std::unordered_set<std::string> kSkipped{"help", "threads", "out", "config"};
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (kSkipped.count(name) != 0) continue;
    if (opt->count() > 0) {
      out[name] = fmt::format("{}", fmt::join(opt->results(), ","));
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

}  // namespace wackymeter::cli
