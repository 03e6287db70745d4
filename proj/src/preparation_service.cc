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

#include "compins/preparation_service.h"

#include <nlohmann/json.hpp>

#include "compins/bytes.h"
#include "compins/errors.h"

namespace compins {

using nlohmann::json;

Money RoundValue(Money amount, Money granularity) {
  if (granularity <= 0) throw ValidationError("rounding granularity must be > 0");
  if (amount < 0) throw ValidationError("amounts are non-negative");
  return (2 * amount + granularity) / (2 * granularity) * granularity;
}

PreparationService::PreparationService(const Keystore& comp_keystore,
                                       SubmissionStoreReader& store, OfflineDataset& offline,
                                       QuarantineStore& quarantine,
                                       std::map<std::string, ReleasePolicy> policies,
                                       RoundingPolicy rounding, const CurrencyTable& currencies)
    : comp_keystore_(comp_keystore),
      store_(store),
      offline_(offline),
      quarantine_(quarantine),
      policies_(std::move(policies)),
      rounding_(rounding),
      currencies_(currencies) {
  if (comp_keystore_.purpose() != KeyPurpose::kCompensation) {
    throw ConfigError("preparation service needs the compensation keystore");
  }
}

const DecryptKey& PreparationService::KeyForVersion(std::uint32_t version) {
  auto it = key_cache_.find(version);
  if (it == key_cache_.end()) {
    it = key_cache_.emplace(version, comp_keystore_.LoadDecrypt(version)).first;
  }
  return it->second;
}

int PreparationService::Prepare(const PreparedScheduleItem& item) {
  if (prepared_batch_ids_.contains(item.batch_id)) return 0;  // redelivery

  const auto policy_it = policies_.find(item.cohort.slice_type);
  if (policy_it == policies_.end()) {
    throw ConfigError("no release policy for slice type " + item.cohort.slice_type);
  }
  // Threshold re-check: upstream must never hand over a short batch.
  if (static_cast<int>(item.entries.size()) < policy_it->second.batch_size) {
    QuarantinedBatch bad;
    bad.batch_id = item.batch_id;
    bad.cohort = item.cohort;
    bad.reason = "batch below policy size";
    for (const auto& entry : item.entries) bad.submission_ids.push_back(entry.submission_id);
    quarantine_.Add(bad);
    quarantined_count_ += static_cast<std::int64_t>(item.entries.size());
    prepared_batch_ids_.insert(item.batch_id);
    return 0;
  }

  const std::string& country = item.cohort.values.count(AttributeId::kCountry)
                                   ? item.cohort.values.at(AttributeId::kCountry)
                                   : std::string();
  const std::string target_currency =
      country.empty() ? std::string() : currencies_.CurrencyForCountry(country);

  // Stage everything first; the batch lands fully or not at all.
  std::vector<DeidentifiedEntry> staged;
  staged.reserve(item.entries.size());
  for (const auto& entry : item.entries) {
    const auto record = store_.Fetch(entry.submission_id);
    if (!record) {
      QuarantinedBatch bad;
      bad.batch_id = item.batch_id;
      bad.cohort = item.cohort;
      bad.reason = "submission " + entry.submission_id + " not in store";
      for (const auto& e : item.entries) bad.submission_ids.push_back(e.submission_id);
      quarantine_.Add(bad);
      quarantined_count_ += static_cast<std::int64_t>(item.entries.size());
      prepared_batch_ids_.insert(item.batch_id);
      return 0;
    }

    const Bytes plain = KeyForVersion(record->comp_envelope.key_version)
                            .Decrypt(record->comp_envelope);
    const json blob = json::parse(ToString(plain));
    CompensationData comp = CompensationFromJson(blob.at("compensation"));
    const std::int64_t stored_rate_ppm = blob.at("exchange_rate_ppm").get<std::int64_t>();

    if (!target_currency.empty() && comp.currency != target_currency) {
      const std::int64_t to_ppm = currencies_.RatePpm(target_currency);
      for (CompType type : AllCompTypes()) {
        if (const auto amount = comp.Amount(type)) {
          comp.SetAmount(type, CurrencyTable::ConvertWithRates(*amount, stored_rate_ppm, to_ppm));
        }
      }
      comp.currency = target_currency;
    }

    for (CompType type : AllCompTypes()) {
      const bool round_this = type == CompType::kBaseSalary || rounding_.round_all_types;
      if (!round_this) continue;
      if (const auto amount = comp.Amount(type)) {
        const Money granularity = type == CompType::kBaseSalary
                                      ? rounding_.base_salary_granularity
                                      : rounding_.other_granularity;
        comp.SetAmount(type, RoundValue(*amount, granularity));
      }
    }

    DeidentifiedEntry out;
    out.cohort = item.cohort;
    out.generalized_timestamp = entry.generalized_timestamp;
    out.compensation = comp;
    staged.push_back(std::move(out));
    // entry.submission_id is dropped here; nothing downstream sees it.
  }

  offline_.AppendBatch(item.cohort.slice_type, FormatDate(item.ready_at), staged);
  prepared_batch_ids_.insert(item.batch_id);
  prepared_count_ += static_cast<std::int64_t>(staged.size());
  return static_cast<int>(staged.size());
}

}  // namespace compins
