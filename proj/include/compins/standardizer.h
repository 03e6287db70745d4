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

#ifndef COMPINS_STANDARDIZER_H_
#define COMPINS_STANDARDIZER_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "compins/domain.h"

namespace compins {

// Casefold, trim, collapse whitespace, strip punctuation. Applied to every
// string before any taxonomy lookup.
std::string NormalizeForLookup(const std::string& raw);

enum class EntityKind { kTitle, kCompany, kRegion };

// A fixed catalog of canonical entities for one entity kind, loaded from a
// versioned fixture file. Immutable after load; lookups are safe for
// concurrent readers.
class Taxonomy {
 public:
  static Taxonomy Load(const std::filesystem::path& file, EntityKind kind);
  static Taxonomy FromEntries(EntityKind kind,
                              std::map<std::string, std::string> entries,  // id -> display
                              std::map<std::string, std::string> synonyms);  // normalized -> id

  EntityKind kind() const { return kind_; }
  std::size_t size() const { return entries_.size(); }

  // Canonical id for a raw string, if the normalized form matches a synonym
  // or a canonical display name.
  std::optional<std::string> Lookup(const std::string& raw) const;

  // Throws Unmappable when Lookup fails. Raw strings are never passed
  // through; an unmapped value would otherwise form a singleton cohort.
  std::string Standardize(const std::string& raw) const;

  const std::string& DisplayName(const std::string& canonical_id) const;

 private:
  Taxonomy(EntityKind kind, std::map<std::string, std::string> entries,
           std::map<std::string, std::string> synonyms);

  EntityKind kind_;
  std::map<std::string, std::string> entries_;   // id -> display
  std::map<std::string, std::string> synonyms_;  // normalized -> id
};

// Title, company, and region taxonomies together with the band/normalization
// rules for the remaining attributes.
class Standardizer {
 public:
  Standardizer(Taxonomy titles, Taxonomy companies, Taxonomy regions);

  const Taxonomy& titles() const { return titles_; }
  const Taxonomy& companies() const { return companies_; }
  const Taxonomy& regions() const { return regions_; }

  // Maps a profile to canonical attribute values. Throws Unmappable when the
  // title cannot be standardized (a submission without a canonical title can
  // never be cohorted). Company/region that fail to map are left absent, so
  // slice types requiring them skip the submission.
  CanonicalAttributes Canonicalize(const MemberProfile& profile) const;

 private:
  Taxonomy titles_;
  Taxonomy companies_;
  Taxonomy regions_;
};

}  // namespace compins

#endif  // COMPINS_STANDARDIZER_H_
