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

#ifndef COMPINS_INSIGHTS_H_
#define COMPINS_INSIGHTS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "compins/domain.h"
#include "compins/stats.h"
#include "compins/stores.h"

namespace compins {

struct QuantileSummary {
  Rational p10;
  Rational p50;
  Rational p90;
  std::int64_t n = 0;
};

// Quantiles of an unsorted multiset; n = size.
QuantileSummary SummarizeQuantiles(std::vector<std::int64_t> values);

enum class Provenance { kEmpirical, kSmoothed };

const char* ProvenanceName(Provenance p);

// Linear shrinkage toward the nearest ancestor with enough data: per
// percentile, w * empirical + (1-w) * ancestor with w = n/(n+tau). A cohort
// of identical values therefore never echoes its empirical percentiles.
QuantileSummary Shrink(const QuantileSummary& empirical, const QuantileSummary& ancestor,
                       std::int64_t tau);

struct SmoothResult {
  QuantileSummary summary;
  Provenance provenance = Provenance::kEmpirical;
};

// `ancestor_chain` is ordered nearest-first; the first entry with
// n >= 3*tau supplies the shrinkage target. Without one the result is the
// empirical summary flagged empirical.
SmoothResult Smooth(const std::vector<std::int64_t>& cohort_values,
                    const std::vector<std::vector<std::int64_t>>& ancestor_chain,
                    std::int64_t tau);

// Ancestor of a cohort key: drops the first present attribute in the order
// company -> industry -> experience band -> region (most identifying first).
// Ends at title-country; returns nullopt there.
std::optional<CohortKey> ParentCohort(const CohortKey& key);

struct TypeInsight {
  QuantileSummary quantiles;  // post smoothing
  Histogram histogram;        // empirical, pruned values
  Provenance provenance = Provenance::kEmpirical;
};

struct CompensationInsight {
  CohortKey cohort;
  std::string currency;
  std::map<CompType, TypeInsight> types;

  nlohmann::json ToJson() const;
  static CompensationInsight FromJson(const nlohmann::json& j);
};

struct InsightBuildOptions {
  std::int64_t tau = 10;
  int histogram_buckets = 10;
  std::string generation;  // directory name under the store root
  int config_version = 1;
  std::uint64_t seed = 0;
};

// Offline workflow: consumes the de-identified dataset and rebuilds one
// immutable insight store generation (prune -> quantiles -> smooth ->
// histogram per cohort and compensation type). Full rebuild every time, so
// bootstrapping can regenerate the store from scratch.
std::size_t BuildInsightStore(const OfflineDataset& offline, const std::filesystem::path& root,
                              const InsightBuildOptions& options);

// Read-only view over one store generation.
class InsightStore {
 public:
  static InsightStore Open(const std::filesystem::path& root, const std::string& generation);
  static std::optional<std::string> LatestGeneration(const std::filesystem::path& root);

  std::optional<CompensationInsight> Get(const CohortKey& key) const;
  std::vector<CompensationInsight> SiblingInsights(const CohortKey& key) const;
  std::size_t size() const { return by_hash_.size(); }
  const std::string& generation() const { return generation_; }

 private:
  std::string generation_;
  std::map<std::string, CompensationInsight> by_hash_;
};

// Give-to-get gate in front of the store: a member sees insights only with a
// submission inside the eligibility window, and a cohort below threshold is
// indistinguishable from one that does not exist.
class InsightQueryService {
 public:
  InsightQueryService(const InsightStore& store, const VerificationStore& verification,
                      Duration eligibility_window = 365 * kSecondsPerDay);

  // Throws NotEligible or CohortUnavailable. The JSON document carries the
  // cohort insight plus sibling insights (same title and country, other
  // regions).
  nlohmann::json Query(const CohortKey& key, const std::string& member_id, Instant now) const;

  // Operator view without the give-to-get gate (CLI `report`).
  nlohmann::json Report(const CohortKey& key) const;

 private:
  const InsightStore& store_;
  const VerificationStore& verification_;
  Duration eligibility_window_;
};

}  // namespace compins

#endif  // COMPINS_INSIGHTS_H_
