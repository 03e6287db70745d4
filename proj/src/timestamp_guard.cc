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

#include "compins/timestamp_guard.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "compins/bytes.h"
#include "compins/errors.h"

namespace compins {

using nlohmann::json;

json PreparedScheduleItem::ToJson() const {
  json entries_json = json::array();
  for (const auto& entry : entries) {
    entries_json.push_back(json{{"submission_id", entry.submission_id},
                                {"generalized_timestamp",
                                 compins::ToJson(entry.generalized_timestamp)}});
  }
  return json{{"batch_id", batch_id},
              {"cohort_key", compins::ToJson(cohort)},
              {"ready_at", FormatRfc3339(ready_at)},
              {"entries", entries_json}};
}

PreparedScheduleItem PreparedScheduleItem::FromJson(const json& j) {
  PreparedScheduleItem item;
  item.batch_id = j.at("batch_id").get<std::string>();
  item.cohort = CohortKeyFromJson(j.at("cohort_key"));
  item.ready_at = ParseRfc3339(j.at("ready_at").get<std::string>());
  for (const auto& entry : j.at("entries")) {
    item.entries.push_back(
        ScheduledEntry{entry.at("submission_id").get<std::string>(),
                       GeneralizedTimestampFromJson(entry.at("generalized_timestamp"))});
  }
  return item;
}

Instant RandomDelay(Instant ts, Duration max_delay, std::mt19937_64& rng) {
  if (max_delay <= 0) return ts;
  std::uniform_int_distribution<Duration> dist(0, max_delay);
  return ts + dist(rng);
}

GeneralizedTimestamp GeneralizeBatch(std::span<const Instant> timestamps) {
  if (timestamps.empty()) throw EmptyInput("generalize_batch of empty batch");
  for (TimeLevel level : TimestampHierarchy()) {
    const Instant first = Truncate(timestamps.front(), level);
    const bool all_equal = std::all_of(timestamps.begin(), timestamps.end(), [&](Instant t) {
      return Truncate(t, level) == first;
    });
    if (all_equal) return GeneralizedTimestamp{level, first};
  }
  // Even the years differ; use the latest entry so released data never
  // predates reality.
  const Instant latest = *std::max_element(timestamps.begin(), timestamps.end());
  return GeneralizedTimestamp{TimeLevel::kYear, Truncate(latest, TimeLevel::kYear)};
}

TimestampGuard::TimestampGuard(std::map<std::string, ReleasePolicy> policies, std::uint64_t seed,
                               EventBus& bus)
    : policies_(std::move(policies)), seed_(seed), bus_(bus) {}

PreparedScheduleItem TimestampGuard::Schedule(const ReleaseBatch& batch) {
  const auto policy_it = policies_.find(batch.cohort.slice_type);
  if (policy_it == policies_.end()) {
    throw ConfigError("no release policy for slice type " + batch.cohort.slice_type);
  }
  const ReleasePolicy& policy = policy_it->second;

  PreparedScheduleItem item;
  item.batch_id = batch.batch_id;
  item.cohort = batch.cohort;

  if (policy.timestamp_mode == TimestampMode::kHierarchical) {
    std::vector<Instant> timestamps;
    timestamps.reserve(batch.entries.size());
    for (const auto& entry : batch.entries) timestamps.push_back(entry.true_timestamp);
    const GeneralizedTimestamp common = GeneralizeBatch(timestamps);
    for (const auto& entry : batch.entries) {
      item.entries.push_back(ScheduledEntry{entry.submission_id, common});
    }
    // Ready as soon as the batch is complete.
    item.ready_at = *std::max_element(timestamps.begin(), timestamps.end());
  } else {
    // Per-entry independent delays, seeded by batch id so replays reproduce
    // the exact schedule.
    std::seed_seq seq{seed_, std::hash<std::string>{}(batch.batch_id)};
    std::mt19937_64 rng(seq);
    Instant ready = 0;
    for (const auto& entry : batch.entries) {
      const Instant delayed = RandomDelay(entry.true_timestamp, policy.max_random_delay, rng);
      item.entries.push_back(
          ScheduledEntry{entry.submission_id, GeneralizedTimestamp{TimeLevel::kSecond, delayed}});
      ready = std::max(ready, delayed);
    }
    item.ready_at = ready;
  }

  queue_.emplace(std::make_pair(item.ready_at, item.batch_id), item);
  return item;
}

std::vector<PreparedScheduleItem> TimestampGuard::DeliverReady(Instant now) {
  std::vector<PreparedScheduleItem> delivered;
  auto it = queue_.begin();
  while (it != queue_.end() && it->first.first <= now) {
    bus_.Publish(kTopicPreparedReady, it->second.ToJson());
    delivered.push_back(std::move(it->second));
    it = queue_.erase(it);
  }
  return delivered;
}

Instant TimestampGuard::MaxReadyTime() const {
  if (queue_.empty()) return 0;
  return queue_.rbegin()->first.first;
}

}  // namespace compins
