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

#include "compins/slicing_service.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "compins/bytes.h"
#include "compins/errors.h"

namespace compins {

using nlohmann::json;

json ChangeEvent::ToJson() const {
  json attrs = json::object();
  for (const auto& [attr, value] : attributes) attrs[AttributeName(attr)] = value;
  return json{{"submission_id", submission_id},
              {"attributes", attrs},
              {"true_timestamp", FormatRfc3339(true_timestamp)}};
}

ChangeEvent ChangeEvent::FromJson(const json& j) {
  ChangeEvent event;
  event.submission_id = j.at("submission_id").get<std::string>();
  for (const auto& [name, value] : j.at("attributes").items()) {
    event.attributes[AttributeFromName(name)] = value.get<std::string>();
  }
  event.true_timestamp = ParseRfc3339(j.at("true_timestamp").get<std::string>());
  return event;
}

json ReleaseBatch::ToJson() const {
  json entries_json = json::array();
  for (const auto& entry : entries) {
    entries_json.push_back(json{{"submission_id", entry.submission_id},
                                {"true_timestamp", FormatRfc3339(entry.true_timestamp)}});
  }
  return json{
      {"batch_id", batch_id}, {"cohort_key", compins::ToJson(cohort)}, {"entries", entries_json}};
}

ReleaseBatch ReleaseBatch::FromJson(const json& j) {
  ReleaseBatch batch;
  batch.batch_id = j.at("batch_id").get<std::string>();
  batch.cohort = CohortKeyFromJson(j.at("cohort_key"));
  for (const auto& entry : j.at("entries")) {
    batch.entries.push_back(
        ReleaseEntry{entry.at("submission_id").get<std::string>(),
                     ParseRfc3339(entry.at("true_timestamp").get<std::string>())});
  }
  return batch;
}

SlicingService::SlicingService(std::vector<SliceType> catalog,
                               std::map<std::string, ReleasePolicy> policies,
                               SliceStateStore& state_store, DecryptKey threshold_key,
                               EventBus& bus)
    : catalog_(std::move(catalog)),
      policies_(std::move(policies)),
      state_store_(state_store),
      threshold_key_(std::move(threshold_key)),
      threshold_encrypt_(threshold_key_.ToEncryptKey()),
      bus_(bus) {
  if (threshold_key_.purpose() != KeyPurpose::kThreshold) {
    throw ConfigError("slicing service needs the threshold symmetric key");
  }
  for (const auto& slice_type : catalog_) {
    if (!policies_.contains(slice_type.name)) {
      throw ConfigError("no release policy for slice type " + slice_type.name);
    }
  }
}

SlicingService::SliceState SlicingService::LoadState(const CohortKey& key) const {
  const auto cipher = state_store_.GetCipher(key.Hash());
  if (!cipher) {
    SliceState state;
    state.cohort = key;
    return state;
  }
  Bytes plain;
  try {
    plain = threshold_key_.Decrypt(Envelope::FromBase64(*cipher));
  } catch (const AuthFailure& e) {
    throw DecryptFailure("slice state for " + key.ToString() + ": " + e.what());
  }
  const json j = json::parse(ToString(plain));
  SliceState state;
  state.cohort = CohortKeyFromJson(j.at("cohort"));
  for (const auto& entry : j.at("pending")) {
    state.pending.push_back(
        ReleaseEntry{entry.at("submission_id").get<std::string>(),
                     ParseRfc3339(entry.at("true_timestamp").get<std::string>())});
  }
  state.seen_ids = j.at("seen_ids").get<std::vector<std::string>>();
  state.released_count = j.at("released_count").get<int>();
  state.batches_emitted = j.at("batches_emitted").get<int>();
  return state;
}

void SlicingService::SaveState(const SliceState& state) {
  json pending = json::array();
  for (const auto& entry : state.pending) {
    pending.push_back(json{{"submission_id", entry.submission_id},
                           {"true_timestamp", FormatRfc3339(entry.true_timestamp)}});
  }
  const json j{{"cohort", compins::ToJson(state.cohort)},
               {"pending", pending},
               {"seen_ids", state.seen_ids},
               {"released_count", state.released_count},
               {"batches_emitted", state.batches_emitted}};
  const Envelope env = threshold_encrypt_.Encrypt(ToBytes(j.dump()), KeyPurpose::kThreshold);
  state_store_.PutCipher(state.cohort.Hash(), env.ToBase64());
}

std::vector<ReleaseBatch> SlicingService::OnEvent(const ChangeEvent& event) {
  std::vector<ReleaseBatch> emitted;
  for (const auto& slice_type : catalog_) {
    CohortKey key;
    try {
      key = CohortKeyOf(event.attributes, slice_type);
    } catch (const MissingAttribute&) {
      continue;  // this submission lacks an attribute this slice type needs
    }
    SliceState state = LoadState(key);
    if (std::find(state.seen_ids.begin(), state.seen_ids.end(), event.submission_id) !=
        state.seen_ids.end()) {
      continue;  // duplicate delivery
    }
    state.pending.push_back(ReleaseEntry{event.submission_id, event.true_timestamp});
    state.seen_ids.push_back(event.submission_id);

    const ReleasePolicy& policy = policies_.at(slice_type.name);
    for (;;) {
      const int need = state.released_count == 0 ? policy.FirstReleaseSize() : policy.batch_size;
      if (static_cast<int>(state.pending.size()) < need) break;
      ReleaseBatch batch;
      batch.cohort = key;
      batch.batch_id = key.Hash().substr(0, 16) + "-b" + std::to_string(state.batches_emitted + 1);
      batch.entries.assign(state.pending.begin(), state.pending.begin() + need);
      state.pending.erase(state.pending.begin(), state.pending.begin() + need);
      state.released_count += need;
      state.batches_emitted += 1;
      bus_.Publish(kTopicReleased, batch.ToJson());
      emitted.push_back(std::move(batch));
    }
    SaveState(state);
  }
  return emitted;
}

std::map<CohortKey, std::pair<int, int>> SlicingService::SliceCounts(
    const std::string& slice_type) const {
  std::map<CohortKey, std::pair<int, int>> counts;
  for (const std::string& hash : state_store_.CohortHashes()) {
    const auto cipher = state_store_.GetCipher(hash);
    Bytes plain;
    try {
      plain = threshold_key_.Decrypt(Envelope::FromBase64(*cipher));
    } catch (const AuthFailure& e) {
      throw DecryptFailure(std::string("slice state: ") + e.what());
    }
    const json j = json::parse(ToString(plain));
    const CohortKey key = CohortKeyFromJson(j.at("cohort"));
    if (key.slice_type != slice_type) continue;
    counts[key] = {static_cast<int>(j.at("pending").size()), j.at("released_count").get<int>()};
  }
  return counts;
}

}  // namespace compins
