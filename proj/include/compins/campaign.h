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

#ifndef COMPINS_CAMPAIGN_H_
#define COMPINS_CAMPAIGN_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "compins/domain.h"

namespace compins {

// r2 = max(0, ceil(alpha / gamma) - r1) with gamma = s1/r1 observed in the
// first wave. Throws ZeroResponses when s1 == 0 (callers fall back to
// estimate_response_rate over similar cohorts).
std::int64_t PlanSecondWave(std::int64_t alpha, std::int64_t r1, std::int64_t s1);

struct CohortRateObservation {
  double gamma = 0;               // s1/r1
  std::int64_t responses = 0;     // weight
};

// Response-count-weighted mean of similar cohorts' observed rates. Throws
// NoSimilarCohorts on empty input.
double EstimateResponseRate(const std::vector<CohortRateObservation>& similar);

// Email response behavior: respond with probability base_rate, after a delay
// drawn from a mixture of two exponentials and a Pareto tail. The defaults
// put ~78% of responses inside one day and ~86% inside five days, with a
// multi-month tail.
struct ResponseModel {
  double base_rate = 0.3;
  double exp_short_weight = 0.8;
  Duration exp_short_mean = 8 * kSecondsPerHour;
  double exp_long_weight = 0.07;
  Duration exp_long_mean = 3 * kSecondsPerDay;
  double pareto_weight = 0.13;
  Duration pareto_min = 5 * kSecondsPerDay;
  double pareto_shape = 1.1;

  bool SampleResponds(std::mt19937_64& rng) const;
  Duration SampleDelay(std::mt19937_64& rng) const;
};

struct CampaignPlan {
  CohortKey cohort;
  std::vector<std::string> members;  // random order used for both waves
  std::int64_t alpha = 0;
  std::int64_t r1 = 0;
  std::int64_t s1 = 0;     // responses observed within the observation window
  double gamma = 0;        // s1/r1, or the similar-cohort estimate
  std::int64_t r2 = 0;
};

struct HistoryRow {
  std::string member_id;
  CohortKey cohort;
  Instant email_at = 0;
  bool responded = false;
  Instant submitted_at = 0;  // meaningful when responded

  nlohmann::json ToJson() const;
  static HistoryRow FromJson(const nlohmann::json& j);
};

struct CohortSpec {
  CohortKey cohort;
  std::vector<std::string> member_ids;
};

struct CampaignConfig {
  std::int64_t alpha = 100;          // desired responses per cohort
  std::int64_t first_wave_size = 0;  // 0: use alpha
  Duration observation_window = 7 * kSecondsPerDay;
  Instant start_time = 0;
  std::int64_t min_cohort_members = 0;  // cohorts below this are skipped
};

// Two-wave give-to-get campaign over each cohort: members randomly ordered
// with a seeded RNG, wave one of r1 emails, response rate estimated from the
// observed s1 (or from similar cohorts when s1 = 0), then r2 further emails.
// Wave membership depends only on the random order, never on attributes.
class CampaignSimulator {
 public:
  CampaignSimulator(ResponseModel model, std::uint64_t seed);

  // Returns one row per emailed member. Plans are recorded per cohort.
  std::vector<HistoryRow> Run(const std::vector<CohortSpec>& cohorts,
                              const CampaignConfig& config);

  const std::vector<CampaignPlan>& plans() const { return plans_; }

 private:
  ResponseModel model_;
  std::uint64_t seed_;
  std::vector<CampaignPlan> plans_;
};

std::vector<HistoryRow> LoadHistory(const std::filesystem::path& file);
void SaveHistory(const std::filesystem::path& file, const std::vector<HistoryRow>& rows);

}  // namespace compins

#endif  // COMPINS_CAMPAIGN_H_
