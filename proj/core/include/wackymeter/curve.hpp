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
#pragma once

// Normalized wackiness curve and its area.
//
// Scored tokens are ranked by wackiness (descending, ties by ascending token
// id) and cut into B bins; bin i spans ranks [floor(i*M/B), floor((i+1)*M/B)).
// W-AUC is the mean of the bin means, i.e. a unit-width Riemann sum over a
// normalized x axis, so it lies in [0, 1].

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wackymeter/wackiness.hpp"

namespace wackymeter {

struct WackinessCurve {
  std::size_t bin_count = 0;
  std::vector<double> bin_means;
  std::size_t scored_token_count = 0;  // M, after padding in strict mode
};

struct CurveOptions {
  // Strict mode ranks the whole vocabulary: tokens without a score enter
  // with wackiness 1.0. vocab_size must then cover every scored token.
  bool strict = false;
  std::size_t vocab_size = 0;
};

// Throws std::invalid_argument for B < 1 or a table without scored tokens.
// A bin left empty (B > M) takes the score at rank floor(i*M/B), the
// value of the step curve at the bin start.
WackinessCurve build_curve(const TokenWackinessTable& table, std::size_t bins,
                           const CurveOptions& options = {});

// Same binning over a bare score list; the scores are sorted here.
WackinessCurve build_curve(std::vector<double> scores, std::size_t bins);

double w_auc(const WackinessCurve& curve);

struct ModelSummary {
  std::string name;
  double full_w_auc = 0.0;  // W-AUC of the complete input set
  double w_auc = 0.0;       // mean over bootstrap resamples
  double two_sigma = 0.0;   // 2 * sample std over resamples; 0 for one resample
  std::vector<double> resample_w_auc;
  std::string group;        // letters; models sharing a letter are not
                            // significantly different
};

struct PairwiseTest {
  std::size_t a = 0;
  std::size_t b = 0;
  double t = 0.0;
  double p_value = 1.0;     // two-sided, uncorrected
  double p_adjusted = 1.0;  // Bonferroni, capped at 1
  bool significant = false;
};

struct ComparisonReport {
  std::vector<ModelSummary> models;  // input order
  std::vector<PairwiseTest> tests;   // (a, b) with a < b
};

struct CompareOptions {
  std::size_t bins = 100;
  std::size_t repeats = 10;
  std::uint64_t seed = 7;
  double alpha = 0.05;
  CurveOptions curve;
  unsigned threads = 1;
};

// Bootstrap comparison of several models over the same inputs. Resample r
// draws |inputs| indices with replacement from a stream derived from
// (seed, r) and applies them to every model, so the W-AUC samples are
// paired. Throws ValidationError when the models' input id lists differ and
// std::invalid_argument for repeats < 1 or an empty list.
ComparisonReport compare_models(
    const std::vector<std::pair<std::string, WackinessRun>>& runs,
    const CompareOptions& options);

// Two-sided p-value of a paired t-test on equal-length samples. Zero
// variance gives 1 for identical samples and 0 otherwise; fewer than two
// pairs give 1.
std::pair<double, double> paired_t_test(const std::vector<double>& a,
                                        const std::vector<double>& b);

// Compact letter display. Models are ordered by ascending score; each
// maximal set of mutually non-different models gets a letter.
std::vector<std::string> letter_groups(const std::vector<double>& scores,
                                       const std::vector<std::vector<bool>>& different);

// bin_index,bin_mean
void write_curve_csv(std::ostream& out, const WackinessCurve& curve);
// model,w_auc,two_sigma,group
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace wackymeter
