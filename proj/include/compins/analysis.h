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

#ifndef COMPINS_ANALYSIS_H_
#define COMPINS_ANALYSIS_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "compins/campaign.h"
#include "compins/rational.h"
#include "compins/stats.h"
#include "compins/time.h"

namespace compins {

class EmptyHistory : public Error {
 public:
  using Error::Error;
};

class CohortTooSmall : public Error {
 public:
  using Error::Error;
};

class NoCohortsAtBaseline : public Error {
 public:
  using Error::Error;
};

// One cohort's submission instants, non-decreasing.
struct CohortHistory {
  std::string cohort;  // CohortKey::ToString() form, or any stable label
  std::vector<Instant> instants;
};

// Groups a simulation history into per-cohort submission instants (responded
// rows only), sorted by cohort label.
std::vector<CohortHistory> GroupHistory(const std::vector<HistoryRow>& rows);

struct ResponseCurvePoint {
  std::int64_t days = 0;
  Rational cum_pct;  // 0..100
};

// Cumulative percentage of responses received within d days of the email,
// for every integer d up to the maximum lapse. Throws EmptyHistory.
std::vector<ResponseCurvePoint> ResponseCurve(
    const std::vector<std::pair<Instant, Instant>>& email_response_pairs);

std::vector<std::pair<Instant, Instant>> ResponsePairs(const std::vector<HistoryRow>& rows);

struct AvailabilityPoint {
  int k = 0;
  Rational relative_pct;  // 0..100
};

// The paper's figures only consider cohorts with at least three entries.
inline constexpr int kBaselineThreshold = 3;

// Per-cohort p-th percentile (percent) of the delays introduced by batching:
// consecutive full batches of k in arrival order, each entry delayed until
// its batch's last arrival; leftovers excluded. Days, exact. Throws
// CohortTooSmall when no full batch exists.
Rational BatchingDelayPercentile(const std::vector<Instant>& instants, int k, int percentile);

// The analyses below are data-parallel across cohorts. serial:: holds the
// reference implementations; the unqualified versions run the same kernels
// under OpenMP and must agree exactly.
namespace serial {

// count(n >= k) / count(n >= baseline_k) as a percentage, per k.
std::vector<AvailabilityPoint> CohortAvailability(const std::vector<CohortHistory>& histories,
                                                  const std::vector<int>& ks,
                                                  int baseline_k = kBaselineThreshold);

// sum(floor(n/k)*k) / sum(n) as a percentage over cohorts with
// n >= baseline_k.
Rational DataAvailability(const std::vector<CohortHistory>& histories, int k,
                          int baseline_k = kBaselineThreshold);

// Released-entry count sum(floor(n/k)*k) over all cohorts; the closed form
// the live pipeline must match exactly.
std::int64_t ClosedFormReleasedCount(const std::vector<CohortHistory>& histories, int k);

// Per-cohort percentile values pooled across cohorts holding at least one
// full batch (and the baseline minimum).
std::vector<Rational> BatchingDelayPercentiles(const std::vector<CohortHistory>& histories, int k,
                                               int percentile,
                                               int baseline_k = kBaselineThreshold);

}  // namespace serial

std::vector<AvailabilityPoint> CohortAvailability(const std::vector<CohortHistory>& histories,
                                                  const std::vector<int>& ks,
                                                  int baseline_k = kBaselineThreshold);
Rational DataAvailability(const std::vector<CohortHistory>& histories, int k,
                          int baseline_k = kBaselineThreshold);
std::int64_t ClosedFormReleasedCount(const std::vector<CohortHistory>& histories, int k);
std::vector<Rational> BatchingDelayPercentiles(const std::vector<CohortHistory>& histories, int k,
                                               int percentile,
                                               int baseline_k = kBaselineThreshold);

// The paper's two-level aggregation: per-cohort percentile values, then one
// box per batch size.
struct DelayBox {
  int k = 0;
  int percentile = 0;
  std::size_t cohorts = 0;
  BoxStats stats;
};

inline const std::vector<int>& DelayPercentileSet() {
  static const std::vector<int> kSet = {10, 30, 50, 70, 90};
  return kSet;
}

std::vector<DelayBox> DelayBoxes(const std::vector<CohortHistory>& histories,
                                 const std::vector<int>& ks, const std::vector<int>& percentiles,
                                 int baseline_k = kBaselineThreshold);

// Synthetic submission histories matching the paper's stated composition:
// about one-third of cohorts with 3-4 entries, one-third with 5-9, one-third
// with 10 or more.
std::vector<CohortHistory> GenerateSyntheticHistories(int n_cohorts, std::uint64_t seed);

}  // namespace compins

#endif  // COMPINS_ANALYSIS_H_
