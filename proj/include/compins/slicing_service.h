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

#ifndef COMPINS_SLICING_SERVICE_H_
#define COMPINS_SLICING_SERVICE_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "compins/domain.h"
#include "compins/event_bus.h"
#include "compins/stores.h"
#include "compins/vault.h"

namespace compins {

// Attribute-only view of a submission; carries no compensation fields.
struct ChangeEvent {
  std::string submission_id;
  CanonicalAttributes attributes;
  Instant true_timestamp = 0;

  nlohmann::json ToJson() const;
  static ChangeEvent FromJson(const nlohmann::json& j);
};

struct ReleaseEntry {
  std::string submission_id;
  Instant true_timestamp = 0;
};

struct ReleaseBatch {
  std::string batch_id;
  CohortKey cohort;
  std::vector<ReleaseEntry> entries;

  nlohmann::json ToJson() const;
  static ReleaseBatch FromJson(const nlohmann::json& j);
};

// Consumes change events, maintains encrypted per-cohort pending lists and
// counters under T, and emits release batches once thresholds are met. Holds
// no compensation key and sees no compensation bytes.
class SlicingService {
 public:
  SlicingService(std::vector<SliceType> catalog, std::map<std::string, ReleasePolicy> policies,
                 SliceStateStore& state_store, DecryptKey threshold_key, EventBus& bus);

  // Appends the submission to every applicable slice, releasing batches per
  // policy; published to slices.released and returned. Duplicate deliveries
  // of the same submission are no-ops (at-least-once bus).
  std::vector<ReleaseBatch> OnEvent(const ChangeEvent& event);

  // Harness introspection; requires the threshold key held by this service.
  // Returns cohort -> (pending, released).
  std::map<CohortKey, std::pair<int, int>> SliceCounts(const std::string& slice_type) const;

  void Flush() { state_store_.Save(); }

  const std::vector<SliceType>& catalog() const { return catalog_; }

 private:
  struct SliceState {
    CohortKey cohort;
    std::vector<ReleaseEntry> pending;
    std::vector<std::string> seen_ids;  // pending + released, for dedup
    int released_count = 0;
    int batches_emitted = 0;
  };

  SliceState LoadState(const CohortKey& key) const;
  void SaveState(const SliceState& state);

  std::vector<SliceType> catalog_;
  std::map<std::string, ReleasePolicy> policies_;
  SliceStateStore& state_store_;
  DecryptKey threshold_key_;
  EncryptKey threshold_encrypt_;
  EventBus& bus_;
};

}  // namespace compins

#endif  // COMPINS_SLICING_SERVICE_H_
