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

#ifndef COMPINS_TIMESTAMP_GUARD_H_
#define COMPINS_TIMESTAMP_GUARD_H_

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "compins/domain.h"
#include "compins/event_bus.h"
#include "compins/slicing_service.h"

namespace compins {

struct ScheduledEntry {
  std::string submission_id;
  GeneralizedTimestamp generalized_timestamp;
};

struct PreparedScheduleItem {
  std::string batch_id;
  CohortKey cohort;
  Instant ready_at = 0;
  std::vector<ScheduledEntry> entries;

  nlohmann::json ToJson() const;
  static PreparedScheduleItem FromJson(const nlohmann::json& j);
};

// Uniform delay in [ts, ts + max_delay]; max_delay == 0 is the identity.
Instant RandomDelay(Instant ts, Duration max_delay, std::mt19937_64& rng);

// Finest hierarchy level at which every timestamp in the batch truncates to
// the same value; falls back to (year, truncation of the latest entry) when
// even the years differ.
GeneralizedTimestamp GeneralizeBatch(std::span<const Instant> timestamps);

// The delayed job queue: replaces true timestamps of released batches per
// policy and holds each batch until its ready time on the simulated clock.
// True timestamps never leave this module.
class TimestampGuard {
 public:
  TimestampGuard(std::map<std::string, ReleasePolicy> policies, std::uint64_t seed, EventBus& bus);

  // Transforms and enqueues one batch. Queued items are immutable; later
  // policy changes do not touch them.
  PreparedScheduleItem Schedule(const ReleaseBatch& batch);

  // Publishes slices.prepared-ready for every queued item with
  // ready_at <= now, in (ready_at, batch_id) order.
  std::vector<PreparedScheduleItem> DeliverReady(Instant now);

  std::size_t QueuedCount() const { return queue_.size(); }
  Instant MaxReadyTime() const;

 private:
  std::map<std::string, ReleasePolicy> policies_;
  std::uint64_t seed_;
  EventBus& bus_;
  std::map<std::pair<Instant, std::string>, PreparedScheduleItem> queue_;
};

}  // namespace compins

#endif  // COMPINS_TIMESTAMP_GUARD_H_
