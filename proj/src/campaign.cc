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

#include "compins/campaign.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "compins/errors.h"

namespace compins {

using nlohmann::json;

std::int64_t PlanSecondWave(std::int64_t alpha, std::int64_t r1, std::int64_t s1) {
  if (r1 <= 0) throw Error("first wave must be non-empty");
  if (s1 < 0 || s1 > r1) throw Error("s1 must lie in [0, r1]");
  if (s1 == 0) throw ZeroResponses("no first-wave responses; estimate from similar cohorts");
  // ceil(alpha / (s1/r1)) - r1 = ceil(alpha*r1 / s1) - r1
  const std::int64_t target = (alpha * r1 + s1 - 1) / s1;
  return std::max<std::int64_t>(0, target - r1);
}

double EstimateResponseRate(const std::vector<CohortRateObservation>& similar) {
  double weighted = 0;
  double total = 0;
  for (const auto& obs : similar) {
    weighted += obs.gamma * static_cast<double>(obs.responses);
    total += static_cast<double>(obs.responses);
  }
  if (total <= 0) throw NoSimilarCohorts("no similar cohorts with completed first wave");
  return weighted / total;
}

namespace {

double Uniform01(std::mt19937_64& rng) {
  // 53-bit uniform in (0, 1]; never 0 so logs are safe.
  return 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

bool ResponseModel::SampleResponds(std::mt19937_64& rng) const {
  return Uniform01(rng) <= base_rate;
}

Duration ResponseModel::SampleDelay(std::mt19937_64& rng) const {
  const double u = Uniform01(rng);
  double seconds = 0;
  if (u <= exp_short_weight) {
    seconds = -static_cast<double>(exp_short_mean) * std::log(Uniform01(rng));
  } else if (u <= exp_short_weight + exp_long_weight) {
    seconds = -static_cast<double>(exp_long_mean) * std::log(Uniform01(rng));
  } else {
    seconds = static_cast<double>(pareto_min) *
              std::pow(Uniform01(rng), -1.0 / pareto_shape);
  }
  return static_cast<Duration>(seconds);
}

json HistoryRow::ToJson() const {
  json j{{"member_id", member_id},
         {"cohort_key", compins::ToJson(cohort)},
         {"email_at", FormatRfc3339(email_at)},
         {"responded", responded}};
  if (responded) j["submitted_at"] = FormatRfc3339(submitted_at);
  return j;
}

HistoryRow HistoryRow::FromJson(const json& j) {
  HistoryRow row;
  row.member_id = j.at("member_id").get<std::string>();
  row.cohort = CohortKeyFromJson(j.at("cohort_key"));
  row.email_at = ParseRfc3339(j.at("email_at").get<std::string>());
  row.responded = j.at("responded").get<bool>();
  if (row.responded) row.submitted_at = ParseRfc3339(j.at("submitted_at").get<std::string>());
  return row;
}

CampaignSimulator::CampaignSimulator(ResponseModel model, std::uint64_t seed)
    : model_(model), seed_(seed) {}

std::vector<HistoryRow> CampaignSimulator::Run(const std::vector<CohortSpec>& cohorts,
                                               const CampaignConfig& config) {
  std::vector<HistoryRow> history;
  plans_.clear();

  for (const auto& spec : cohorts) {
    if (static_cast<std::int64_t>(spec.member_ids.size()) < config.min_cohort_members) continue;

    // Per-cohort stream so cohort order never changes draws.
    std::seed_seq seq{seed_, std::hash<std::string>{}(spec.cohort.ToString())};
    std::mt19937_64 rng(seq);

    CampaignPlan plan;
    plan.cohort = spec.cohort;
    plan.alpha = config.alpha;
    plan.members = spec.member_ids;
    std::shuffle(plan.members.begin(), plan.members.end(), rng);

    const std::int64_t size = static_cast<std::int64_t>(plan.members.size());
    plan.r1 = std::min(size, config.first_wave_size > 0 ? config.first_wave_size : config.alpha);

    struct Draw {
      bool responded;
      Duration delay;
    };
    std::vector<Draw> draws(plan.members.size());
    for (auto& draw : draws) {
      draw.responded = model_.SampleResponds(rng);
      draw.delay = model_.SampleDelay(rng);
    }

    const Instant wave1_at = config.start_time;
    for (std::int64_t i = 0; i < plan.r1; ++i) {
      HistoryRow row;
      row.member_id = plan.members[static_cast<std::size_t>(i)];
      row.cohort = spec.cohort;
      row.email_at = wave1_at;
      row.responded = draws[static_cast<std::size_t>(i)].responded;
      if (row.responded) {
        row.submitted_at = wave1_at + draws[static_cast<std::size_t>(i)].delay;
        if (row.submitted_at - wave1_at <= config.observation_window) ++plan.s1;
      }
      history.push_back(std::move(row));
    }

    if (plan.s1 > 0) {
      plan.gamma = static_cast<double>(plan.s1) / static_cast<double>(plan.r1);
      plan.r2 = PlanSecondWave(plan.alpha, plan.r1, plan.s1);
    } else {
      // Borrow the rate from already-campaigned cohorts with the same title
      // in other regions.
      std::vector<CohortRateObservation> similar;
      const auto title = spec.cohort.values.find(AttributeId::kTitle);
      const auto region = spec.cohort.values.find(AttributeId::kRegion);
      for (const auto& prior : plans_) {
        if (prior.s1 <= 0 || prior.r1 <= 0) continue;
        const auto p_title = prior.cohort.values.find(AttributeId::kTitle);
        const auto p_region = prior.cohort.values.find(AttributeId::kRegion);
        if (title == spec.cohort.values.end() || p_title == prior.cohort.values.end()) continue;
        if (p_title->second != title->second) continue;
        if (region != spec.cohort.values.end() && p_region != prior.cohort.values.end() &&
            p_region->second == region->second) {
          continue;
        }
        similar.push_back(CohortRateObservation{
            static_cast<double>(prior.s1) / static_cast<double>(prior.r1), prior.s1});
      }
      try {
        plan.gamma = EstimateResponseRate(similar);
        const std::int64_t target =
            static_cast<std::int64_t>(std::ceil(static_cast<double>(plan.alpha) / plan.gamma));
        plan.r2 = std::max<std::int64_t>(0, target - plan.r1);
      } catch (const NoSimilarCohorts&) {
        plan.r2 = 0;
      }
    }
    plan.r2 = std::min(plan.r2, size - plan.r1);

    const Instant wave2_at = wave1_at + config.observation_window;
    for (std::int64_t i = plan.r1; i < plan.r1 + plan.r2; ++i) {
      HistoryRow row;
      row.member_id = plan.members[static_cast<std::size_t>(i)];
      row.cohort = spec.cohort;
      row.email_at = wave2_at;
      row.responded = draws[static_cast<std::size_t>(i)].responded;
      if (row.responded) {
        row.submitted_at = wave2_at + draws[static_cast<std::size_t>(i)].delay;
      }
      history.push_back(std::move(row));
    }

    plans_.push_back(std::move(plan));
  }
  return history;
}

std::vector<HistoryRow> LoadHistory(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open history file: " + file.string());
  std::vector<HistoryRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(HistoryRow::FromJson(json::parse(line)));
  }
  return rows;
}

void SaveHistory(const std::filesystem::path& file, const std::vector<HistoryRow>& rows) {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  std::ofstream out(file);
  if (!out) throw IoError("cannot write history file: " + file.string());
  for (const auto& row : rows) out << row.ToJson().dump() << '\n';
}

}  // namespace compins
