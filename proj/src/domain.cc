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

#include "compins/domain.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "compins/bytes.h"
#include "compins/errors.h"

namespace compins {

using nlohmann::json;

namespace {

constexpr const char* kAttributeNames[] = {
    "title", "company", "country", "region", "years_experience_band", "industry",
    "company_size_band",
};

constexpr const char* kCompTypeNames[] = {
    "base_salary", "annual_bonus", "signon_bonus", "commission", "stock_value", "tips",
};

}  // namespace

const char* AttributeName(AttributeId id) { return kAttributeNames[static_cast<int>(id)]; }

AttributeId AttributeFromName(const std::string& name) {
  for (int i = 0; i < 7; ++i) {
    if (name == kAttributeNames[i]) return static_cast<AttributeId>(i);
  }
  throw ParseError("unknown attribute: " + name);
}

const char* AttributeComponentName(AttributeId id) {
  switch (id) {
    case AttributeId::kYearsExperienceBand:
      return "experience";
    case AttributeId::kCompanySizeBand:
      return "size";
    default:
      return AttributeName(id);
  }
}

std::string SliceNameForAttributes(std::vector<AttributeId> attrs) {
  std::sort(attrs.begin(), attrs.end());
  std::string name;
  for (AttributeId attr : attrs) {
    if (!name.empty()) name.push_back('-');
    name += AttributeComponentName(attr);
  }
  return name;
}

std::string ExperienceBand(int years_experience) {
  if (years_experience < 0) throw ValidationError("years_experience must be >= 0");
  if (years_experience <= 2) return "0-2";
  if (years_experience <= 5) return "3-5";
  if (years_experience <= 10) return "6-10";
  return "11+";
}

const char* CompTypeName(CompType type) { return kCompTypeNames[static_cast<int>(type)]; }

const std::vector<CompType>& AllCompTypes() {
  static const std::vector<CompType> kAll = {
      CompType::kBaseSalary, CompType::kAnnualBonus, CompType::kSignonBonus,
      CompType::kCommission, CompType::kStockValue,  CompType::kTips,
  };
  return kAll;
}

std::optional<Money> CompensationData::Amount(CompType type) const {
  switch (type) {
    case CompType::kBaseSalary:
      return base_salary;
    case CompType::kAnnualBonus:
      return annual_bonus;
    case CompType::kSignonBonus:
      return signon_bonus;
    case CompType::kCommission:
      return commission;
    case CompType::kStockValue:
      return stock_value;
    case CompType::kTips:
      return tips;
  }
  return std::nullopt;
}

void CompensationData::SetAmount(CompType type, std::optional<Money> amount) {
  switch (type) {
    case CompType::kBaseSalary:
      base_salary = amount.value_or(0);
      return;
    case CompType::kAnnualBonus:
      annual_bonus = amount;
      return;
    case CompType::kSignonBonus:
      signon_bonus = amount;
      return;
    case CompType::kCommission:
      commission = amount;
      return;
    case CompType::kStockValue:
      stock_value = amount;
      return;
    case CompType::kTips:
      tips = amount;
      return;
  }
}

std::string CohortKey::ToString() const {
  std::string out = slice_type;
  for (const auto& [attr, value] : values) {
    out.push_back('|');
    out += AttributeName(attr);
    out.push_back('=');
    out += value;
  }
  return out;
}

CohortKey CohortKey::FromString(const std::string& s) {
  CohortKey key;
  std::size_t pos = s.find('|');
  key.slice_type = s.substr(0, pos);
  while (pos != std::string::npos) {
    const std::size_t next = s.find('|', pos + 1);
    const std::string part =
        s.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1);
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos) throw ParseError("bad cohort key segment: " + part);
    key.values[AttributeFromName(part.substr(0, eq))] = part.substr(eq + 1);
    pos = next;
  }
  if (key.slice_type.empty()) throw ParseError("cohort key missing slice type: " + s);
  return key;
}

std::string CohortKey::Hash() const { return Sha256Hex(ToString()); }

CohortKey CohortKeyOf(const CanonicalAttributes& attrs, const SliceType& slice_type) {
  CohortKey key;
  key.slice_type = slice_type.name;
  for (AttributeId attr : slice_type.attributes) {
    auto it = attrs.find(attr);
    if (it == attrs.end() || it->second.empty()) {
      throw MissingAttribute(std::string("profile lacks attribute '") + AttributeName(attr) +
                             "' required by slice type " + slice_type.name);
    }
    key.values[attr] = it->second;
  }
  return key;
}

const char* TimestampModeName(TimestampMode mode) {
  return mode == TimestampMode::kRandomDelay ? "random_delay" : "hierarchical";
}

TimestampMode TimestampModeFromName(const std::string& name) {
  if (name == "random_delay") return TimestampMode::kRandomDelay;
  if (name == "hierarchical") return TimestampMode::kHierarchical;
  throw ParseError("unknown timestamp mode: " + name);
}

json ToJson(const CompensationData& comp) {
  json j;
  j["currency"] = comp.currency;
  j["base_salary"] = comp.base_salary;
  for (CompType type : AllCompTypes()) {
    if (type == CompType::kBaseSalary) continue;
    if (auto amount = comp.Amount(type)) j[CompTypeName(type)] = *amount;
  }
  return j;
}

CompensationData CompensationFromJson(const json& j) {
  CompensationData comp;
  comp.currency = j.at("currency").get<std::string>();
  comp.base_salary = j.at("base_salary").get<Money>();
  for (CompType type : AllCompTypes()) {
    if (type == CompType::kBaseSalary) continue;
    if (j.contains(CompTypeName(type))) {
      comp.SetAmount(type, j.at(CompTypeName(type)).get<Money>());
    }
  }
  return comp;
}

json ToJson(const CohortKey& key) {
  json values = json::object();
  for (const auto& [attr, value] : key.values) values[AttributeName(attr)] = value;
  return json{{"slice_type", key.slice_type}, {"values", values}};
}

CohortKey CohortKeyFromJson(const json& j) {
  CohortKey key;
  key.slice_type = j.at("slice_type").get<std::string>();
  for (const auto& [name, value] : j.at("values").items()) {
    key.values[AttributeFromName(name)] = value.get<std::string>();
  }
  return key;
}

json ToJson(const GeneralizedTimestamp& ts) {
  return json{{"level", TimeLevelName(ts.level)}, {"value", FormatRfc3339(ts.value)}};
}

GeneralizedTimestamp GeneralizedTimestampFromJson(const json& j) {
  GeneralizedTimestamp ts;
  ts.level = TimeLevelFromName(j.at("level").get<std::string>());
  ts.value = ParseRfc3339(j.at("value").get<std::string>());
  return ts;
}

json ToJson(const DeidentifiedEntry& entry) {
  return json{{"cohort", ToJson(entry.cohort)},
              {"generalized_timestamp", ToJson(entry.generalized_timestamp)},
              {"compensation", ToJson(entry.compensation)}};
}

DeidentifiedEntry DeidentifiedEntryFromJson(const json& j) {
  DeidentifiedEntry entry;
  entry.cohort = CohortKeyFromJson(j.at("cohort"));
  entry.generalized_timestamp = GeneralizedTimestampFromJson(j.at("generalized_timestamp"));
  entry.compensation = CompensationFromJson(j.at("compensation"));
  return entry;
}

json ToJson(const MemberProfile& profile) {
  return json{{"member_id", profile.member_id},
              {"raw_title", profile.raw_title},
              {"raw_company", profile.raw_company},
              {"raw_region", profile.raw_region},
              {"country", profile.country},
              {"years_experience", profile.years_experience},
              {"industry", profile.industry},
              {"company_size_band", profile.company_size_band}};
}

MemberProfile MemberProfileFromJson(const json& j) {
  MemberProfile p;
  p.member_id = j.at("member_id").get<std::string>();
  p.raw_title = j.at("raw_title").get<std::string>();
  p.raw_company = j.value("raw_company", "");
  p.raw_region = j.value("raw_region", "");
  p.country = j.at("country").get<std::string>();
  p.years_experience = j.value("years_experience", 0);
  p.industry = j.value("industry", "");
  p.company_size_band = j.value("company_size_band", "");
  return p;
}

}  // namespace compins
