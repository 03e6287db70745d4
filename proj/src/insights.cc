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

#include "compins/insights.h"

#include <algorithm>
#include <fstream>

#include "compins/errors.h"

namespace compins {

using nlohmann::json;

namespace {

json RationalToJson(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

Rational RationalFromJson(const json& j) {
  return Rational::Of(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
}

constexpr std::int64_t kAncestorMinFactor = 3;  // ancestor usable when n >= 3*tau

}  // namespace

QuantileSummary SummarizeQuantiles(std::vector<std::int64_t> values) {
  if (values.empty()) throw EmptyInput("quantile summary of empty input");
  std::sort(values.begin(), values.end());
  QuantileSummary summary;
  summary.n = static_cast<std::int64_t>(values.size());
  summary.p10 = Quantile(values, 10, 100);
  summary.p50 = Quantile(values, 50, 100);
  summary.p90 = Quantile(values, 90, 100);
  return summary;
}

const char* ProvenanceName(Provenance p) {
  return p == Provenance::kEmpirical ? "empirical" : "smoothed";
}

QuantileSummary Shrink(const QuantileSummary& empirical, const QuantileSummary& ancestor,
                       std::int64_t tau) {
  const Rational w = Rational::Of(empirical.n, empirical.n + tau);
  const Rational one_minus_w = Rational(1) - w;
  QuantileSummary out;
  out.n = empirical.n;
  out.p10 = w * empirical.p10 + one_minus_w * ancestor.p10;
  out.p50 = w * empirical.p50 + one_minus_w * ancestor.p50;
  out.p90 = w * empirical.p90 + one_minus_w * ancestor.p90;
  return out;
}

SmoothResult Smooth(const std::vector<std::int64_t>& cohort_values,
                    const std::vector<std::vector<std::int64_t>>& ancestor_chain,
                    std::int64_t tau) {
  if (cohort_values.empty()) throw EmptyInput("smooth of empty cohort");
  SmoothResult result;
  const QuantileSummary empirical = SummarizeQuantiles(cohort_values);
  for (const auto& ancestor_values : ancestor_chain) {
    if (static_cast<std::int64_t>(ancestor_values.size()) < kAncestorMinFactor * tau) continue;
    const QuantileSummary ancestor = SummarizeQuantiles(ancestor_values);
    result.summary = Shrink(empirical, ancestor, tau);
    result.provenance = Provenance::kSmoothed;
    return result;
  }
  result.summary = empirical;
  result.provenance = Provenance::kEmpirical;
  return result;
}

std::optional<CohortKey> ParentCohort(const CohortKey& key) {
  static const AttributeId kDropOrder[] = {
      AttributeId::kCompany,
      AttributeId::kIndustry,
      AttributeId::kYearsExperienceBand,
      AttributeId::kRegion,
  };
  for (AttributeId drop : kDropOrder) {
    if (!key.values.contains(drop)) continue;
    CohortKey parent;
    parent.values = key.values;
    parent.values.erase(drop);
    std::vector<AttributeId> attrs;
    for (const auto& [attr, value] : parent.values) attrs.push_back(attr);
    parent.slice_type = SliceNameForAttributes(attrs);
    return parent;
  }
  return std::nullopt;
}

json CompensationInsight::ToJson() const {
  json types_json = json::object();
  for (const auto& [type, insight] : types) {
    types_json[CompTypeName(type)] =
        json{{"provenance", ProvenanceName(insight.provenance)},
             {"n", insight.quantiles.n},
             {"quantiles",
              json{{"p10", RationalToJson(insight.quantiles.p10)},
                   {"p50", RationalToJson(insight.quantiles.p50)},
                   {"p90", RationalToJson(insight.quantiles.p90)}}},
             {"histogram", json{{"bucket_edges", insight.histogram.bucket_edges},
                                {"counts", insight.histogram.counts}}}};
  }
  return json{{"cohort", compins::ToJson(cohort)}, {"currency", currency}, {"types", types_json}};
}

CompensationInsight CompensationInsight::FromJson(const json& j) {
  CompensationInsight out;
  out.cohort = CohortKeyFromJson(j.at("cohort"));
  out.currency = j.at("currency").get<std::string>();
  for (const auto& [name, t] : j.at("types").items()) {
    TypeInsight insight;
    insight.provenance = t.at("provenance").get<std::string>() == "smoothed"
                             ? Provenance::kSmoothed
                             : Provenance::kEmpirical;
    insight.quantiles.n = t.at("n").get<std::int64_t>();
    insight.quantiles.p10 = RationalFromJson(t.at("quantiles").at("p10"));
    insight.quantiles.p50 = RationalFromJson(t.at("quantiles").at("p50"));
    insight.quantiles.p90 = RationalFromJson(t.at("quantiles").at("p90"));
    insight.histogram.bucket_edges =
        t.at("histogram").at("bucket_edges").get<std::vector<std::int64_t>>();
    insight.histogram.counts = t.at("histogram").at("counts").get<std::vector<std::int64_t>>();
    for (CompType type : AllCompTypes()) {
      if (name == CompTypeName(type)) out.types[type] = std::move(insight);
    }
  }
  return out;
}

namespace {

using TypeValues = std::map<CompType, std::vector<std::int64_t>>;

// Values of the pooling partition projected onto one ancestor attribute set,
// keyed by the projected cohort key string.
using Projection = std::map<std::string, TypeValues>;

std::string ProjectKeyString(const CohortKey& key, const std::vector<AttributeId>& attrs) {
  std::string out;
  for (AttributeId attr : attrs) {
    const auto it = key.values.find(attr);
    if (it == key.values.end()) return {};
    out += AttributeName(attr);
    out.push_back('=');
    out += it->second;
    out.push_back('|');
  }
  return out;
}

}  // namespace

std::size_t BuildInsightStore(const OfflineDataset& offline, const std::filesystem::path& root,
                              const InsightBuildOptions& options) {
  const std::vector<DeidentifiedEntry> entries = offline.ReadAll();

  // Group values per cohort and compensation type.
  std::map<CohortKey, TypeValues> cohorts;
  std::map<CohortKey, std::string> cohort_currency;
  for (const auto& entry : entries) {
    auto& per_type = cohorts[entry.cohort];
    cohort_currency[entry.cohort] = entry.compensation.currency;
    for (CompType type : AllCompTypes()) {
      if (const auto amount = entry.compensation.Amount(type)) {
        per_type[type].push_back(*amount);
      }
    }
  }

  // The least restrictive partition present supplies ancestor pools; each
  // submission appears in it exactly once.
  std::string pooling_type;
  std::size_t pooling_attr_count = SIZE_MAX;
  for (const auto& [key, per_type] : cohorts) {
    if (key.values.size() < pooling_attr_count) {
      pooling_attr_count = key.values.size();
      pooling_type = key.slice_type;
    }
  }

  // Ancestor attribute sets reachable from any cohort in the dataset.
  std::vector<std::vector<AttributeId>> ancestor_sets;
  for (const auto& [key, per_type] : cohorts) {
    auto current = ParentCohort(key);
    while (current) {
      std::vector<AttributeId> attrs;
      for (const auto& [attr, value] : current->values) attrs.push_back(attr);
      if (std::find(ancestor_sets.begin(), ancestor_sets.end(), attrs) == ancestor_sets.end()) {
        ancestor_sets.push_back(attrs);
      }
      current = ParentCohort(*current);
    }
  }

  std::map<std::vector<AttributeId>, Projection> projections;
  for (const auto& attrs : ancestor_sets) {
    Projection& projection = projections[attrs];
    for (const auto& entry : entries) {
      if (entry.cohort.slice_type != pooling_type) continue;
      const std::string pkey = ProjectKeyString(entry.cohort, attrs);
      if (pkey.empty()) continue;
      auto& per_type = projection[pkey];
      for (CompType type : AllCompTypes()) {
        if (const auto amount = entry.compensation.Amount(type)) {
          per_type[type].push_back(*amount);
        }
      }
    }
  }

  const std::filesystem::path dir = root / options.generation;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);

  std::map<std::string, json> lines;  // key_hash -> document, sorted
  for (const auto& [key, per_type] : cohorts) {
    CompensationInsight insight;
    insight.cohort = key;
    insight.currency = cohort_currency[key];
    for (const auto& [type, raw_values] : per_type) {
      if (raw_values.empty()) continue;
      const std::vector<std::int64_t> pruned = PruneOutliers(raw_values);

      // Nearest-first ancestor value pools for this type.
      std::vector<std::vector<std::int64_t>> chain;
      auto current = ParentCohort(key);
      while (current) {
        std::vector<AttributeId> attrs;
        for (const auto& [attr, value] : current->values) attrs.push_back(attr);
        const auto proj_it = projections.find(attrs);
        if (proj_it != projections.end()) {
          const auto pool_it = proj_it->second.find(ProjectKeyString(*current, attrs));
          if (pool_it != proj_it->second.end()) {
            const auto type_it = pool_it->second.find(type);
            if (type_it != pool_it->second.end()) {
              chain.push_back(PruneOutliers(type_it->second));
            }
          }
        }
        current = ParentCohort(*current);
      }

      const SmoothResult smoothed = Smooth(pruned, chain, options.tau);
      TypeInsight type_insight;
      type_insight.quantiles = smoothed.summary;
      type_insight.provenance = smoothed.provenance;
      type_insight.histogram = BuildHistogram(pruned, options.histogram_buckets);
      insight.types[type] = std::move(type_insight);
    }
    lines[key.Hash()] = insight.ToJson();
  }

  {
    std::ofstream out(dir / "store.jsonl");
    if (!out) throw IoError("cannot write insight store: " + (dir / "store.jsonl").string());
    for (const auto& [hash, doc] : lines) {
      out << json{{"key_hash", hash}, {"insight", doc}}.dump() << '\n';
    }
  }
  {
    std::ofstream out(dir / "manifest.json");
    out << json{{"generation", options.generation},
                {"config_version", options.config_version},
                {"seed", options.seed},
                {"cohorts", lines.size()}}
               .dump(2)
        << '\n';
  }
  return lines.size();
}

InsightStore InsightStore::Open(const std::filesystem::path& root, const std::string& generation) {
  InsightStore store;
  store.generation_ = generation;
  const std::filesystem::path file = root / generation / "store.jsonl";
  std::ifstream in(file);
  if (!in) throw IoError("cannot open insight store: " + file.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    store.by_hash_[j.at("key_hash").get<std::string>()] =
        CompensationInsight::FromJson(j.at("insight"));
  }
  return store;
}

std::optional<std::string> InsightStore::LatestGeneration(const std::filesystem::path& root) {
  if (!std::filesystem::exists(root)) return std::nullopt;
  std::vector<std::string> generations;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "store.jsonl")) {
      generations.push_back(entry.path().filename().string());
    }
  }
  if (generations.empty()) return std::nullopt;
  return *std::max_element(generations.begin(), generations.end());
}

std::optional<CompensationInsight> InsightStore::Get(const CohortKey& key) const {
  const auto it = by_hash_.find(key.Hash());
  if (it == by_hash_.end()) return std::nullopt;
  return it->second;
}

std::vector<CompensationInsight> InsightStore::SiblingInsights(const CohortKey& key) const {
  std::vector<CompensationInsight> siblings;
  const auto title = key.values.find(AttributeId::kTitle);
  const auto country = key.values.find(AttributeId::kCountry);
  const auto region = key.values.find(AttributeId::kRegion);
  if (title == key.values.end() || country == key.values.end() || region == key.values.end()) {
    return siblings;
  }
  for (const auto& [hash, insight] : by_hash_) {
    const auto& other = insight.cohort;
    if (other.slice_type != key.slice_type) continue;
    const auto o_title = other.values.find(AttributeId::kTitle);
    const auto o_country = other.values.find(AttributeId::kCountry);
    const auto o_region = other.values.find(AttributeId::kRegion);
    if (o_title == other.values.end() || o_country == other.values.end() ||
        o_region == other.values.end()) {
      continue;
    }
    if (o_title->second == title->second && o_country->second == country->second &&
        o_region->second != region->second) {
      siblings.push_back(insight);
    }
  }
  return siblings;
}

InsightQueryService::InsightQueryService(const InsightStore& store,
                                         const VerificationStore& verification,
                                         Duration eligibility_window)
    : store_(store), verification_(verification), eligibility_window_(eligibility_window) {}

json InsightQueryService::Report(const CohortKey& key) const {
  const auto insight = store_.Get(key);
  if (!insight) {
    // Below threshold and nonexistent cohorts are indistinguishable here.
    throw CohortUnavailable("no insight for cohort " + key.ToString());
  }
  json doc{{"cohort", compins::ToJson(key)}, {"insight", insight->ToJson()}};
  json siblings = json::array();
  for (const auto& sibling : store_.SiblingInsights(key)) {
    siblings.push_back(sibling.ToJson());
  }
  doc["siblings"] = siblings;
  return doc;
}

json InsightQueryService::Query(const CohortKey& key, const std::string& member_id,
                                Instant now) const {
  const auto last = verification_.LastSubmission(member_id);
  if (!last || now - *last > eligibility_window_) {
    throw NotEligible("member " + member_id +
                      " has no compensation submission within the eligibility window");
  }
  return Report(key);
}

}  // namespace compins
