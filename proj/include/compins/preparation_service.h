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

#ifndef COMPINS_PREPARATION_SERVICE_H_
#define COMPINS_PREPARATION_SERVICE_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "compins/currency.h"
#include "compins/domain.h"
#include "compins/stores.h"
#include "compins/timestamp_guard.h"
#include "compins/vault.h"

namespace compins {

struct RoundingPolicy {
  Money base_salary_granularity = 100000;  // cents: 1,000 units
  Money other_granularity = 50000;         // cents: 500 units
  bool round_all_types = true;             // false: base salary only
};

// Nearest multiple of granularity, ties round half-up. granularity > 0,
// amount >= 0.
Money RoundValue(Money amount, Money granularity);

// Gateway to the offline system: fetches and decrypts compensation for
// released batches, converts to the cohort country currency, rounds, strips
// submission ids, and appends de-identified records. Holds C keys only.
class PreparationService {
 public:
  PreparationService(const Keystore& comp_keystore, SubmissionStoreReader& store,
                     OfflineDataset& offline, QuarantineStore& quarantine,
                     std::map<std::string, ReleasePolicy> policies, RoundingPolicy rounding,
                     const CurrencyTable& currencies);

  // Returns the number of records appended: the full batch, or zero when the
  // batch was quarantined (missing submission, short batch). Batches are
  // atomic. Throws AuthFailure if the envelope does not match the C key.
  int Prepare(const PreparedScheduleItem& item);

  std::int64_t prepared_count() const { return prepared_count_; }
  std::int64_t quarantined_count() const { return quarantined_count_; }

 private:
  const DecryptKey& KeyForVersion(std::uint32_t version);

  const Keystore& comp_keystore_;
  SubmissionStoreReader& store_;
  OfflineDataset& offline_;
  QuarantineStore& quarantine_;
  std::map<std::string, ReleasePolicy> policies_;
  RoundingPolicy rounding_;
  const CurrencyTable& currencies_;
  std::map<std::uint32_t, DecryptKey> key_cache_;
  std::set<std::string> prepared_batch_ids_;  // idempotent hand-off
  std::int64_t prepared_count_ = 0;
  std::int64_t quarantined_count_ = 0;
};

}  // namespace compins

#endif  // COMPINS_PREPARATION_SERVICE_H_
