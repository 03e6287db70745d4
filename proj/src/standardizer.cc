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

#include "compins/standardizer.h"

#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "compins/errors.h"

namespace compins {

using nlohmann::json;

std::string NormalizeForLookup(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isspace(c) || std::ispunct(c)) {
      // Punctuation separates tokens the same way whitespace does, so
      // "Sr./Staff" and "Sr Staff" normalize identically.
      pending_space = true;
    }
  }
  return out;
}

Taxonomy::Taxonomy(EntityKind kind, std::map<std::string, std::string> entries,
                   std::map<std::string, std::string> synonyms)
    : kind_(kind), entries_(std::move(entries)), synonyms_(std::move(synonyms)) {
  for (const auto& [normalized, id] : synonyms_) {
    if (!entries_.contains(id)) {
      throw ConfigError("taxonomy synonym '" + normalized + "' maps to unknown id '" + id + "'");
    }
  }
}

Taxonomy Taxonomy::FromEntries(EntityKind kind, std::map<std::string, std::string> entries,
                               std::map<std::string, std::string> synonyms) {
  // Display names always resolve to their own id.
  for (const auto& [id, display] : entries) {
    synonyms.emplace(NormalizeForLookup(display), id);
  }
  return Taxonomy(kind, std::move(entries), std::move(synonyms));
}

Taxonomy Taxonomy::Load(const std::filesystem::path& file, EntityKind kind) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open taxonomy file: " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("taxonomy file " + file.string() + ": " + e.what());
  }
  std::map<std::string, std::string> entries;
  for (const auto& entry : j.at("entries")) {
    entries[entry.at("id").get<std::string>()] = entry.at("display").get<std::string>();
  }
  std::map<std::string, std::string> synonyms;
  if (j.contains("synonyms")) {
    for (const auto& [normalized, id] : j.at("synonyms").items()) {
      synonyms[normalized] = id.get<std::string>();
    }
  }
  return FromEntries(kind, std::move(entries), std::move(synonyms));
}

std::optional<std::string> Taxonomy::Lookup(const std::string& raw) const {
  const auto it = synonyms_.find(NormalizeForLookup(raw));
  if (it == synonyms_.end()) return std::nullopt;
  return it->second;
}

std::string Taxonomy::Standardize(const std::string& raw) const {
  auto id = Lookup(raw);
  if (!id) throw Unmappable("no canonical entity for: '" + raw + "'");
  return *id;
}

const std::string& Taxonomy::DisplayName(const std::string& canonical_id) const {
  const auto it = entries_.find(canonical_id);
  if (it == entries_.end()) throw ParseError("unknown canonical id: " + canonical_id);
  return it->second;
}

Standardizer::Standardizer(Taxonomy titles, Taxonomy companies, Taxonomy regions)
    : titles_(std::move(titles)), companies_(std::move(companies)), regions_(std::move(regions)) {}

CanonicalAttributes Standardizer::Canonicalize(const MemberProfile& profile) const {
  CanonicalAttributes attrs;
  attrs[AttributeId::kTitle] = titles_.Standardize(profile.raw_title);
  if (auto company = companies_.Lookup(profile.raw_company)) {
    attrs[AttributeId::kCompany] = *company;
  }
  if (auto region = regions_.Lookup(profile.raw_region)) {
    attrs[AttributeId::kRegion] = *region;
  }
  if (!profile.country.empty()) {
    std::string country = profile.country;
    for (char& c : country) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    attrs[AttributeId::kCountry] = country;
  }
  attrs[AttributeId::kYearsExperienceBand] = ExperienceBand(profile.years_experience);
  if (!profile.industry.empty()) {
    attrs[AttributeId::kIndustry] = NormalizeForLookup(profile.industry);
  }
  if (!profile.company_size_band.empty()) {
    attrs[AttributeId::kCompanySizeBand] = NormalizeForLookup(profile.company_size_band);
  }
  return attrs;
}

}  // namespace compins
