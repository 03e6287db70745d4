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

#include "compins/submission_service.h"

#include <nlohmann/json.hpp>

#include "compins/bytes.h"
#include "compins/errors.h"

namespace compins {

using nlohmann::json;

SubmissionService::SubmissionService(const Standardizer& standardizer,
                                     const CurrencyTable& currencies, EncryptKey attr_public,
                                     EncryptKey comp_public, SubmissionStoreWriter& store,
                                     VerificationStore& verification, EventBus& bus,
                                     ResubmissionPolicy policy, ValidationBounds bounds)
    : standardizer_(standardizer),
      currencies_(currencies),
      attr_public_(std::move(attr_public)),
      comp_public_(std::move(comp_public)),
      store_(store),
      verification_(verification),
      bus_(bus),
      policy_(policy),
      bounds_(bounds) {
  if (attr_public_.purpose() != KeyPurpose::kAttributes ||
      comp_public_.purpose() != KeyPurpose::kCompensation) {
    throw ConfigError("submission service needs the attributes and compensation public keys");
  }
}

void SubmissionService::Validate(const CompensationData& comp) const {
  if (!currencies_.Has(comp.currency)) {
    throw ValidationError("currency not in the configured currency table: " + comp.currency);
  }
  if (comp.base_salary <= 0) throw ValidationError("base_salary must be > 0");
  const Money base_units = comp.base_salary / 100;
  if (base_units < bounds_.min_base_salary_units || base_units > bounds_.max_base_salary_units) {
    throw ValidationError("base_salary out of sanity bounds [" +
                          std::to_string(bounds_.min_base_salary_units) + ", " +
                          std::to_string(bounds_.max_base_salary_units) + "] units/year");
  }
  for (CompType type : AllCompTypes()) {
    if (type == CompType::kBaseSalary) continue;
    const auto amount = comp.Amount(type);
    if (amount && *amount < 0) {
      throw ValidationError(std::string(CompTypeName(type)) + " must be >= 0");
    }
  }
}

bool SubmissionService::CanResubmit(const std::string& member_id, Instant now) const {
  const auto last = verification_.LastSubmission(member_id);
  if (!last) return true;
  if (now - *last >= policy_.window) return true;
  if (policy_.mode == ResubmissionPolicy::Mode::kProfileChange) {
    const auto changed = verification_.ProfileChangedAt(member_id);
    if (changed && *changed > *last) return true;
  }
  return false;
}

bool SubmissionService::HasSubmittedWithin(const std::string& member_id, Duration window,
                                           Instant now) const {
  const auto last = verification_.LastSubmission(member_id);
  return last && now - *last <= window;
}

void SubmissionService::FlagProfileChange(const std::string& member_id, Instant at) {
  verification_.SetProfileChanged(member_id, at);
}

std::string SubmissionService::Submit(const MemberProfile& member, const CompensationData& comp,
                                      Instant now) {
  Validate(comp);
  if (!CanResubmit(member.member_id, now)) {
    throw ResubmissionDenied("member " + member.member_id +
                             " already submitted within the resubmission window");
  }

  const std::string submission_id = RandomId128();
  const std::int64_t rate_ppm = currencies_.RatePpm(comp.currency);

  // Attributes are snapshotted now; later profile edits do not reach the
  // stored envelope.
  CanonicalAttributes attrs;
  bool unmappable_title = false;
  try {
    attrs = standardizer_.Canonicalize(member);
  } catch (const Unmappable&) {
    unmappable_title = true;
  }

  json attr_blob;
  if (unmappable_title) {
    attr_blob = json{{"unmappable", true}};
  } else {
    json values = json::object();
    for (const auto& [attr, value] : attrs) values[AttributeName(attr)] = value;
    attr_blob = json{{"attributes", values}, {"exchange_rate_ppm", rate_ppm}};
  }
  const json comp_blob{{"compensation", ToJson(comp)}, {"exchange_rate_ppm", rate_ppm}};

  SubmissionRecord record;
  record.submission_id = submission_id;
  record.true_timestamp = now;
  record.attr_envelope =
      attr_public_.Encrypt(ToBytes(attr_blob.dump()), KeyPurpose::kAttributes);
  record.comp_envelope =
      comp_public_.Encrypt(ToBytes(comp_blob.dump()), KeyPurpose::kCompensation);
  store_.Append(record);
  ++submitted_count_;

  if (unmappable_title) {
    // Recorded but never cohorted: no change event, and no recency update so
    // the member can resubmit once the title maps.
    ++excluded_unmappable_count_;
    throw Unmappable("title has no canonical form: '" + member.raw_title + "'");
  }

  verification_.RecordSubmission(member.member_id, now);

  json event_attrs = json::object();
  for (const auto& [attr, value] : attrs) event_attrs[AttributeName(attr)] = value;
  bus_.Publish(kTopicSubmissions, json{{"submission_id", submission_id},
                                       {"attributes", event_attrs},
                                       {"true_timestamp", FormatRfc3339(now)}});
  return submission_id;
}

}  // namespace compins
