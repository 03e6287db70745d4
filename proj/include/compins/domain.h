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

#ifndef COMPINS_DOMAIN_H_
#define COMPINS_DOMAIN_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "compins/time.h"

namespace compins {

// All amounts are integer minor currency units (cents), per year.
using Money = std::int64_t;

enum class AttributeId : int {
  kTitle = 0,
  kCompany,
  kCountry,
  kRegion,
  kYearsExperienceBand,
  kIndustry,
  kCompanySizeBand,
};

const char* AttributeName(AttributeId id);
AttributeId AttributeFromName(const std::string& name);  // throws ParseError

// Short form used inside slice-type names ("experience", "size").
const char* AttributeComponentName(AttributeId id);

// Canonical slice-type name for an attribute set: component names joined
// with '-' in declaration order, e.g. "title-company-country-region".
std::string SliceNameForAttributes(std::vector<AttributeId> attrs);

// Profile as entered/derived from the member record; raw strings have not
// been standardized yet.
struct MemberProfile {
  std::string member_id;
  std::string raw_title;
  std::string raw_company;
  std::string raw_region;
  std::string country;  // ISO code, e.g. "US"
  int years_experience = 0;
  std::string industry;
  std::string company_size_band;
};

// Standardizer output: canonical value per attribute. Attributes that could
// not be mapped are absent.
using CanonicalAttributes = std::map<AttributeId, std::string>;

// Experience buckets: 0-2, 3-5, 6-10, 11+.
std::string ExperienceBand(int years_experience);

enum class CompType : int {
  kBaseSalary = 0,
  kAnnualBonus,
  kSignonBonus,
  kCommission,
  kStockValue,
  kTips,
};

const char* CompTypeName(CompType type);
const std::vector<CompType>& AllCompTypes();

struct CompensationData {
  std::string currency;  // ISO code
  Money base_salary = 0;
  std::optional<Money> annual_bonus;
  std::optional<Money> signon_bonus;
  std::optional<Money> commission;
  std::optional<Money> stock_value;
  std::optional<Money> tips;

  std::optional<Money> Amount(CompType type) const;
  void SetAmount(CompType type, std::optional<Money> amount);
};

struct SliceType {
  std::string name;
  std::vector<AttributeId> attributes;  // ordered; must contain title and country
};

struct CohortKey {
  std::string slice_type;
  std::map<AttributeId, std::string> values;

  // Canonical one-line form, e.g.
  // "title-country-region|title=ux-designer|country=US|region=sf-bay-area".
  std::string ToString() const;
  static CohortKey FromString(const std::string& s);  // throws ParseError
  // SHA-256 of ToString(); store key.
  std::string Hash() const;

  auto operator<=>(const CohortKey&) const = default;
};

// Pure projection of canonical attributes onto a slice type's schema.
// Throws MissingAttribute when the profile lacks a required attribute.
CohortKey CohortKeyOf(const CanonicalAttributes& attrs, const SliceType& slice_type);

enum class TimestampMode { kRandomDelay, kHierarchical };

const char* TimestampModeName(TimestampMode mode);
TimestampMode TimestampModeFromName(const std::string& name);

struct ReleasePolicy {
  std::string slice_type;
  int min_threshold = 1;
  int batch_size = 1;
  TimestampMode timestamp_mode = TimestampMode::kHierarchical;
  Duration max_random_delay = 48 * kSecondsPerHour;

  // First release waits for and emits this many entries; later releases use
  // batch_size.
  int FirstReleaseSize() const {
    return min_threshold > batch_size ? min_threshold : batch_size;
  }
};

struct GeneralizedTimestamp {
  TimeLevel level = TimeLevel::kSecond;
  Instant value = 0;
};

struct DeidentifiedEntry {
  CohortKey cohort;
  GeneralizedTimestamp generalized_timestamp;
  CompensationData compensation;  // rounded amounts, cohort-country currency
};

// JSON forms used by stores and the event journals; field names match the
// struct members, timestamps are RFC 3339 strings.
nlohmann::json ToJson(const CompensationData& comp);
CompensationData CompensationFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const CohortKey& key);
CohortKey CohortKeyFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const GeneralizedTimestamp& ts);
GeneralizedTimestamp GeneralizedTimestampFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const DeidentifiedEntry& entry);
DeidentifiedEntry DeidentifiedEntryFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const MemberProfile& profile);
MemberProfile MemberProfileFromJson(const nlohmann::json& j);

}  // namespace compins

#endif  // COMPINS_DOMAIN_H_
