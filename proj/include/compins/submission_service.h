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

#ifndef COMPINS_SUBMISSION_SERVICE_H_
#define COMPINS_SUBMISSION_SERVICE_H_

#include <cstdint>
#include <string>

#include "compins/currency.h"
#include "compins/domain.h"
#include "compins/event_bus.h"
#include "compins/standardizer.h"
#include "compins/stores.h"
#include "compins/vault.h"

namespace compins {

struct ResubmissionPolicy {
  enum class Mode { kFixedWindow, kProfileChange };
  Mode mode = Mode::kFixedWindow;
  Duration window = 365 * kSecondsPerDay;
};

// Sanity bounds at intake, in major units of the submission currency.
struct ValidationBounds {
  Money min_base_salary_units = 1000;
  Money max_base_salary_units = 10000000;
};

// Intake endpoint: validates, snapshots canonical attributes at submission
// time, encrypts the attribute and compensation halves under separate
// purposes, appends to the write-only store, updates recency, and emits an
// attribute-only change event. Holds public keys only.
class SubmissionService {
 public:
  SubmissionService(const Standardizer& standardizer, const CurrencyTable& currencies,
                    EncryptKey attr_public, EncryptKey comp_public, SubmissionStoreWriter& store,
                    VerificationStore& verification, EventBus& bus, ResubmissionPolicy policy,
                    ValidationBounds bounds = {});

  // Returns the new submission id. Throws ValidationError, ResubmissionDenied,
  // or Unmappable (title without a canonical form; the submission is still
  // recorded but never cohorted).
  std::string Submit(const MemberProfile& member, const CompensationData& comp, Instant now);

  bool CanResubmit(const std::string& member_id, Instant now) const;
  bool HasSubmittedWithin(const std::string& member_id, Duration window, Instant now) const;

  // The simulator's stand-in for a profile-edit stream.
  void FlagProfileChange(const std::string& member_id, Instant at);

  std::int64_t submitted_count() const { return submitted_count_; }
  std::int64_t excluded_unmappable_count() const { return excluded_unmappable_count_; }

 private:
  void Validate(const CompensationData& comp) const;

  const Standardizer& standardizer_;
  const CurrencyTable& currencies_;
  EncryptKey attr_public_;
  EncryptKey comp_public_;
  SubmissionStoreWriter& store_;
  VerificationStore& verification_;
  EventBus& bus_;
  ResubmissionPolicy policy_;
  ValidationBounds bounds_;
  std::int64_t submitted_count_ = 0;
  std::int64_t excluded_unmappable_count_ = 0;
};

}  // namespace compins

#endif  // COMPINS_SUBMISSION_SERVICE_H_
