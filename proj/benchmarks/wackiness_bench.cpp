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
#include <benchmark/benchmark.h>

#include "wackymeter/curve.hpp"
#include "wackymeter/impact_index.hpp"
#include "wackymeter/synthetic.hpp"
#include "wackymeter/wackiness.hpp"

namespace wackymeter {
namespace {

struct Setup {
  SyntheticModel model;
  ImpactIndex impact;
  LexicalIndex lexicon;
  WackinessRun run;
};

const Setup& setup() {
  static const Setup s = [] {
    SyntheticConfig cfg;
    cfg.corpus_size = 5000;
    cfg.query_count = 500;
    cfg.profile = ExpansionProfile::mixed(0.5);
    Setup out{generate_synthetic_model(cfg), {}, {}, {}};
    out.impact = ImpactIndex::build(out.model.doc_vectors);
    out.lexicon = LexicalIndex::build(out.model.corpus);
    const ImpactRetriever retriever(out.impact);
    out.run = collect_importance(out.model.queries, out.model.query_vectors, retriever,
                                 out.lexicon, {});
    return out;
  }();
  return s;
}

void BM_CollectImportance(benchmark::State& state) {
  const auto& s = setup();
  const ImpactRetriever retriever(s.impact);
  WackinessOptions opts;
  opts.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        collect_importance(s.model.queries, s.model.query_vectors, retriever, s.lexicon, opts));
  }
}
BENCHMARK(BM_CollectImportance)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BuildTable(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state) benchmark::DoNotOptimize(build_table(s.run));
}
BENCHMARK(BM_BuildTable)->Unit(benchmark::kMicrosecond);

void BM_CompareModels(benchmark::State& state) {
  const auto& s = setup();
  CompareOptions opts;
  opts.repeats = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compare_models({{"a", s.run}, {"b", s.run}}, opts));
  }
}
BENCHMARK(BM_CompareModels)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace wackymeter
