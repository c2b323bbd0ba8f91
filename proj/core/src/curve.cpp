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
#include "wackymeter/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "wackymeter/errors.hpp"
#include "wackymeter/format.hpp"
#include "wackymeter/parallel.hpp"
#include "wackymeter/random.hpp"

namespace wackymeter {

namespace {

// Scores must already be in rank order.
WackinessCurve bin_ranked(const std::vector<double>& ranked, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("build_curve: B must be >= 1");
  if (ranked.empty()) throw std::invalid_argument("build_curve: no scored tokens");
  WackinessCurve curve;
  curve.bin_count = bins;
  curve.scored_token_count = ranked.size();
  curve.bin_means.assign(bins, 0.0);
  const std::size_t m = ranked.size();
  for (std::size_t i = 0; i < bins; ++i) {
    const std::size_t lo = i * m / bins;
    const std::size_t hi = (i + 1) * m / bins;
    if (hi == lo) {
      // Fewer tokens than bins: the step curve's value at the bin start.
      curve.bin_means[i] = std::clamp(ranked[lo], 0.0, 1.0);
      continue;
    }
    double sum = 0.0;
    for (std::size_t r = lo; r < hi; ++r) sum += ranked[r];
    curve.bin_means[i] = std::clamp(sum / static_cast<double>(hi - lo), 0.0, 1.0);
  }
  return curve;
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Bron-Kerbosch without pivoting; the model count is tiny.
void maximal_cliques(std::vector<std::size_t>& r, std::vector<std::size_t> p,
                     std::vector<std::size_t> x,
                     const std::vector<std::vector<bool>>& adj,
                     std::vector<std::vector<std::size_t>>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  while (!p.empty()) {
    const std::size_t v = p.front();
    std::vector<std::size_t> np, nx;
    for (std::size_t u : p) {
      if (u != v && adj[v][u]) np.push_back(u);
    }
    for (std::size_t u : x) {
      if (adj[v][u]) nx.push_back(u);
    }
    r.push_back(v);
    maximal_cliques(r, np, nx, adj, out);
    r.pop_back();
    p.erase(p.begin());
    x.push_back(v);
  }
}

}  // namespace

WackinessCurve build_curve(const TokenWackinessTable& table, std::size_t bins,
                           const CurveOptions& options) {
  if (table.rows.empty()) throw std::invalid_argument("build_curve: no scored tokens");
  std::vector<double> ranked;
  if (options.strict) {
    if (!table.rows.empty() && table.rows.rbegin()->first >= options.vocab_size) {
      throw std::invalid_argument("build_curve: strict mode needs the vocabulary size");
    }
    ranked.assign(options.vocab_size - table.rows.size(), 1.0);
  }
  for (const auto& [t, w] : table.ranked()) ranked.push_back(w);
  if (options.strict) std::stable_sort(ranked.begin(), ranked.end(), std::greater<>());
  return bin_ranked(ranked, bins);
}

WackinessCurve build_curve(std::vector<double> scores, std::size_t bins) {
  std::sort(scores.begin(), scores.end(), std::greater<>());
  return bin_ranked(scores, bins);
}

double w_auc(const WackinessCurve& curve) {
  if (curve.bin_means.empty()) return 0.0;
  return std::clamp(mean_of(curve.bin_means), 0.0, 1.0);
}

std::pair<double, double> paired_t_test(const std::vector<double>& a,
                                        const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("paired_t_test: samples differ in length");
  }
  if (a.size() < 2) return {0.0, 1.0};
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double mean = mean_of(d);
  const double sd = sample_std(d, mean);
  if (sd == 0.0) {
    return mean == 0.0 ? std::pair{0.0, 1.0}
                       : std::pair{std::copysign(INFINITY, mean), 0.0};
  }
  const double n = static_cast<double>(d.size());
  const double t = mean / (sd / std::sqrt(n));
  const boost::math::students_t dist(n - 1.0);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return {t, std::min(1.0, p)};
}

std::vector<std::string> letter_groups(const std::vector<double>& scores,
                                       const std::vector<std::vector<bool>>& different) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) position[order[i]] = i;

  std::vector<std::vector<bool>> same(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) same[a][b] = a != b && !different[a][b];
  }
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<std::size_t> r;
  maximal_cliques(r, order, {}, same, cliques);
  for (auto& c : cliques) {
    std::sort(c.begin(), c.end(),
              [&](std::size_t a, std::size_t b) { return position[a] < position[b]; });
  }
  std::sort(cliques.begin(), cliques.end(), [&](const auto& a, const auto& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [&](std::size_t x, std::size_t y) { return position[x] < position[y]; });
  });

  std::vector<std::string> groups(n);
  for (std::size_t c = 0; c < cliques.size(); ++c) {
    const std::string letter = c < 26 ? std::string(1, static_cast<char>('a' + c))
                                      : fmt::format("g{}", c);
    for (std::size_t m : cliques[c]) groups[m] += letter;
  }
  return groups;
}

ComparisonReport compare_models(
    const std::vector<std::pair<std::string, WackinessRun>>& runs,
    const CompareOptions& options) {
  if (runs.empty()) throw std::invalid_argument("compare_models: no models");
  if (options.repeats < 1) throw std::invalid_argument("compare_models: repeats must be >= 1");
  const auto& reference = runs.front().second.inputs;
  for (const auto& [name, run] : runs) {
    bool same = run.inputs.size() == reference.size();
    for (std::size_t i = 0; same && i < reference.size(); ++i) {
      same = run.inputs[i].input_id == reference[i].input_id;
    }
    if (!same) {
      throw ValidationError(fmt::format(
          "model '{}' was measured on different inputs than '{}'", name,
          runs.front().first));
    }
  }
  const std::size_t n = reference.size();
  if (n == 0) throw ValidationError("compare_models: models have no inputs");

  std::vector<std::vector<std::size_t>> selections(options.repeats);
  for (std::size_t r = 0; r < options.repeats; ++r) {
    Rng rng = Rng::derive(options.seed, {r});
    selections[r].resize(n);
    for (auto& idx : selections[r]) idx = static_cast<std::size_t>(rng.below(n));
  }

  const std::size_t models = runs.size();
  std::vector<double> samples(models * options.repeats, 0.0);
  parallel_for(samples.size(), options.threads, [&](std::size_t job) {
    const std::size_t m = job / options.repeats;
    const std::size_t r = job % options.repeats;
    const auto table = build_table(runs[m].second, selections[r]);
    samples[job] = table.rows.empty()
                       ? 0.0
                       : w_auc(build_curve(table, options.bins, options.curve));
  });

  ComparisonReport report;
  for (std::size_t m = 0; m < models; ++m) {
    ModelSummary s;
    s.name = runs[m].first;
    const auto full = build_table(runs[m].second);
    s.full_w_auc = full.rows.empty() ? 0.0 : w_auc(build_curve(full, options.bins, options.curve));
    s.resample_w_auc.assign(samples.begin() + static_cast<std::ptrdiff_t>(m * options.repeats),
                            samples.begin() + static_cast<std::ptrdiff_t>((m + 1) * options.repeats));
    s.w_auc = mean_of(s.resample_w_auc);
    s.two_sigma = 2.0 * sample_std(s.resample_w_auc, s.w_auc);
    report.models.push_back(std::move(s));
  }

  const double comparisons = static_cast<double>(models * (models - 1) / 2);
  std::vector<std::vector<bool>> different(models, std::vector<bool>(models, false));
  for (std::size_t a = 0; a < models; ++a) {
    for (std::size_t b = a + 1; b < models; ++b) {
      PairwiseTest t;
      t.a = a;
      t.b = b;
      std::tie(t.t, t.p_value) =
          paired_t_test(report.models[a].resample_w_auc, report.models[b].resample_w_auc);
      t.p_adjusted = std::min(1.0, t.p_value * comparisons);
      t.significant = t.p_adjusted < options.alpha;
      different[a][b] = different[b][a] = t.significant;
      report.tests.push_back(t);
    }
  }
  std::vector<double> scores;
  for (const auto& s : report.models) scores.push_back(s.w_auc);
  const auto groups = letter_groups(scores, different);
  for (std::size_t m = 0; m < models; ++m) report.models[m].group = groups[m];
  return report;
}

void write_curve_csv(std::ostream& out, const WackinessCurve& curve) {
  out << "bin_index,bin_mean\n";
  for (std::size_t i = 0; i < curve.bin_means.size(); ++i) {
    out << i << ',' << format_real(curve.bin_means[i]) << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  out << "model,w_auc,two_sigma,group\n";
  for (const auto& m : report.models) {
    out << csv_field(m.name) << ',' << format_real(m.w_auc) << ','
        << format_real(m.two_sigma) << ',' << m.group << '\n';
  }
}

}  // namespace wackymeter
