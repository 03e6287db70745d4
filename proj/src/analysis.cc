// Copyright 2026 The Compins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "compins/analysis.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>

namespace compins {

std::vector<CohortHistory> GroupHistory(const std::vector<HistoryRow>& rows) {
  std::map<std::string, std::vector<Instant>> by_cohort;
  for (const auto& row : rows) {
    if (!row.responded) continue;
    by_cohort[row.cohort.ToString()].push_back(row.submitted_at);
  }
  std::vector<CohortHistory> histories;
  histories.reserve(by_cohort.size());
  for (auto& [cohort, instants] : by_cohort) {
    std::sort(instants.begin(), instants.end());
    histories.push_back(CohortHistory{cohort, std::move(instants)});
  }
  return histories;
}

std::vector<std::pair<Instant, Instant>> ResponsePairs(const std::vector<HistoryRow>& rows) {
  std::vector<std::pair<Instant, Instant>> pairs;
  for (const auto& row : rows) {
    if (row.responded) pairs.emplace_back(row.email_at, row.submitted_at);
  }
  return pairs;
}

std::vector<ResponseCurvePoint> ResponseCurve(
    const std::vector<std::pair<Instant, Instant>>& email_response_pairs) {
  if (email_response_pairs.empty()) throw EmptyHistory("response curve of empty history");
  std::vector<std::int64_t> lapse_days;
  lapse_days.reserve(email_response_pairs.size());
  for (const auto& [email_at, submitted_at] : email_response_pairs) {
    const Duration lapse = submitted_at - email_at;
    lapse_days.push_back(lapse <= 0 ? 0 : lapse / kSecondsPerDay);
  }
  std::sort(lapse_days.begin(), lapse_days.end());
  const std::int64_t max_day = lapse_days.back();
  const std::int64_t total = static_cast<std::int64_t>(lapse_days.size());

  std::vector<ResponseCurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(max_day) + 1);
  std::size_t idx = 0;
  for (std::int64_t d = 0; d <= max_day; ++d) {
    while (idx < lapse_days.size() && lapse_days[idx] <= d) ++idx;
    curve.push_back(
        ResponseCurvePoint{d, Rational::Of(100 * static_cast<std::int64_t>(idx), total)});
  }
  return curve;
}

Rational BatchingDelayPercentile(const std::vector<Instant>& instants, int k, int percentile) {
  if (k < 1) throw Error("batch size must be >= 1");
  const std::size_t full_batches = instants.size() / static_cast<std::size_t>(k);
  if (full_batches == 0) {
    throw CohortTooSmall("cohort of " + std::to_string(instants.size()) +
                         " has no full batch of " + std::to_string(k));
  }
  std::vector<Rational> delays;
  delays.reserve(full_batches * static_cast<std::size_t>(k));
  for (std::size_t b = 0; b < full_batches; ++b) {
    const std::size_t begin = b * static_cast<std::size_t>(k);
    const Instant batch_done = instants[begin + static_cast<std::size_t>(k) - 1];
    for (std::size_t i = begin; i < begin + static_cast<std::size_t>(k); ++i) {
      delays.push_back(Rational::Of(batch_done - instants[i], kSecondsPerDay));
    }
  }
  std::sort(delays.begin(), delays.end());
  return Quantile(std::span<const Rational>(delays), percentile, 100);
}

namespace serial {

std::vector<AvailabilityPoint> CohortAvailability(const std::vector<CohortHistory>& histories,
                                                  const std::vector<int>& ks, int baseline_k) {
  std::int64_t baseline = 0;
  for (const auto& history : histories) {
    if (static_cast<int>(history.instants.size()) >= baseline_k) ++baseline;
  }
  if (baseline == 0) throw NoCohortsAtBaseline("no cohorts with at least baseline entries");

  std::vector<AvailabilityPoint> points;
  points.reserve(ks.size());
  for (int k : ks) {
    if (k < baseline_k) throw Error("threshold below baseline");
    std::int64_t available = 0;
    for (const auto& history : histories) {
      if (static_cast<int>(history.instants.size()) >= k) ++available;
    }
    points.push_back(AvailabilityPoint{k, Rational::Of(100 * available, baseline)});
  }
  return points;
}

Rational DataAvailability(const std::vector<CohortHistory>& histories, int k, int baseline_k) {
  if (k < 1) throw Error("batch size must be >= 1");
  std::int64_t released = 0;
  std::int64_t total = 0;
  for (const auto& history : histories) {
    const std::int64_t n = static_cast<std::int64_t>(history.instants.size());
    if (n < baseline_k) continue;
    released += (n / k) * k;
    total += n;
  }
  if (total == 0) throw NoCohortsAtBaseline("no cohorts with at least baseline entries");
  return Rational::Of(100 * released, total);
}

std::int64_t ClosedFormReleasedCount(const std::vector<CohortHistory>& histories, int k) {
  std::int64_t released = 0;
  for (const auto& history : histories) {
    released += (static_cast<std::int64_t>(history.instants.size()) / k) * k;
  }
  return released;
}

std::vector<Rational> BatchingDelayPercentiles(const std::vector<CohortHistory>& histories, int k,
                                               int percentile, int baseline_k) {
  std::vector<Rational> values;
  for (const auto& history : histories) {
    const int n = static_cast<int>(history.instants.size());
    if (n < baseline_k || n < k) continue;
    values.push_back(BatchingDelayPercentile(history.instants, k, percentile));
  }
  return values;
}

}  // namespace serial

std::vector<AvailabilityPoint> CohortAvailability(const std::vector<CohortHistory>& histories,
                                                  const std::vector<int>& ks, int baseline_k) {
  const std::int64_t n_cohorts = static_cast<std::int64_t>(histories.size());
  std::int64_t baseline = 0;
#pragma omp parallel for reduction(+ : baseline)
  for (std::int64_t i = 0; i < n_cohorts; ++i) {
    if (static_cast<int>(histories[static_cast<std::size_t>(i)].instants.size()) >= baseline_k) {
      ++baseline;
    }
  }
  if (baseline == 0) throw NoCohortsAtBaseline("no cohorts with at least baseline entries");

  std::vector<AvailabilityPoint> points;
  points.reserve(ks.size());
  for (int k : ks) {
    if (k < baseline_k) throw Error("threshold below baseline");
    std::int64_t available = 0;
#pragma omp parallel for reduction(+ : available)
    for (std::int64_t i = 0; i < n_cohorts; ++i) {
      if (static_cast<int>(histories[static_cast<std::size_t>(i)].instants.size()) >= k) {
        ++available;
      }
    }
    points.push_back(AvailabilityPoint{k, Rational::Of(100 * available, baseline)});
  }
  return points;
}

Rational DataAvailability(const std::vector<CohortHistory>& histories, int k, int baseline_k) {
  if (k < 1) throw Error("batch size must be >= 1");
  const std::int64_t n_cohorts = static_cast<std::int64_t>(histories.size());
  std::int64_t released = 0;
  std::int64_t total = 0;
#pragma omp parallel for reduction(+ : released, total)
  for (std::int64_t i = 0; i < n_cohorts; ++i) {
    const std::int64_t n = static_cast<std::int64_t>(histories[static_cast<std::size_t>(i)].instants.size());
    if (n < baseline_k) continue;
    released += (n / k) * k;
    total += n;
  }
  if (total == 0) throw NoCohortsAtBaseline("no cohorts with at least baseline entries");
  return Rational::Of(100 * released, total);
}

std::int64_t ClosedFormReleasedCount(const std::vector<CohortHistory>& histories, int k) {
  const std::int64_t n_cohorts = static_cast<std::int64_t>(histories.size());
  std::int64_t released = 0;
#pragma omp parallel for reduction(+ : released)
  for (std::int64_t i = 0; i < n_cohorts; ++i) {
    released +=
        (static_cast<std::int64_t>(histories[static_cast<std::size_t>(i)].instants.size()) / k) *
        k;
  }
  return released;
}

std::vector<Rational> BatchingDelayPercentiles(const std::vector<CohortHistory>& histories, int k,
                                               int percentile, int baseline_k) {
  const std::int64_t n_cohorts = static_cast<std::int64_t>(histories.size());
  // Per-cohort slots keep the aggregation order deterministic regardless of
  // thread interleaving.
  std::vector<Rational> slots(histories.size());
  std::vector<char> present(histories.size(), 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n_cohorts; ++i) {
    const auto& history = histories[static_cast<std::size_t>(i)];
    const int n = static_cast<int>(history.instants.size());
    if (n < baseline_k || n < k) continue;
    slots[static_cast<std::size_t>(i)] = BatchingDelayPercentile(history.instants, k, percentile);
    present[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<Rational> values;
  for (std::size_t i = 0; i < histories.size(); ++i) {
    if (present[i]) values.push_back(slots[i]);
  }
  return values;
}

std::vector<DelayBox> DelayBoxes(const std::vector<CohortHistory>& histories,
                                 const std::vector<int>& ks, const std::vector<int>& percentiles,
                                 int baseline_k) {
  std::vector<DelayBox> boxes;
  for (int percentile : percentiles) {
    for (int k : ks) {
      const std::vector<Rational> values =
          BatchingDelayPercentiles(histories, k, percentile, baseline_k);
      if (values.empty()) continue;
      DelayBox box;
      box.k = k;
      box.percentile = percentile;
      box.cohorts = values.size();
      box.stats = ComputeBoxStats(values);
      boxes.push_back(std::move(box));
    }
  }
  return boxes;
}

std::vector<CohortHistory> GenerateSyntheticHistories(int n_cohorts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> third(0, 2);
  std::uniform_int_distribution<int> small(3, 4);
  std::uniform_int_distribution<int> medium(5, 9);
  std::uniform_int_distribution<int> large(10, 30);
  std::uniform_int_distribution<Duration> gap(kSecondsPerHour, 21 * kSecondsPerDay);

  std::vector<CohortHistory> histories;
  histories.reserve(static_cast<std::size_t>(n_cohorts));
  const Instant start = ParseRfc3339("2016-10-01T00:00:00Z");
  for (int i = 0; i < n_cohorts; ++i) {
    int n = 0;
    switch (third(rng)) {
      case 0:
        n = small(rng);
        break;
      case 1:
        n = medium(rng);
        break;
      default:
        n = large(rng);
        break;
    }
    CohortHistory history;
    char label[32];
    std::snprintf(label, sizeof(label), "cohort-%05d", i);
    history.cohort = label;
    Instant t = start + static_cast<Duration>(i) * kSecondsPerMinute;
    for (int j = 0; j < n; ++j) {
      history.instants.push_back(t);
      t += gap(rng);
    }
    histories.push_back(std::move(history));
  }
  return histories;
}

}  // namespace compins
