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

#include "compins/stores.h"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "compins/errors.h"

namespace compins {

using nlohmann::json;

namespace {

json RecordToJson(const SubmissionRecord& record) {
  return json{{"submission_id", record.submission_id},
              {"attr_envelope", record.attr_envelope.ToBase64()},
              {"comp_envelope", record.comp_envelope.ToBase64()},
              {"true_timestamp", FormatRfc3339(record.true_timestamp)}};
}

SubmissionRecord RecordFromJson(const json& j) {
  SubmissionRecord record;
  record.submission_id = j.at("submission_id").get<std::string>();
  record.attr_envelope = Envelope::FromBase64(j.at("attr_envelope").get<std::string>());
  record.comp_envelope = Envelope::FromBase64(j.at("comp_envelope").get<std::string>());
  record.true_timestamp = ParseRfc3339(j.at("true_timestamp").get<std::string>());
  return record;
}

std::vector<SubmissionRecord> LoadRecords(const std::filesystem::path& file) {
  std::vector<SubmissionRecord> records;
  std::ifstream in(file);
  if (!in) return records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(RecordFromJson(json::parse(line)));
  }
  return records;
}

void EnsureParentDir(const std::filesystem::path& file) {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
}

}  // namespace

SubmissionStoreWriter::SubmissionStoreWriter(std::filesystem::path file) : file_(std::move(file)) {
  EnsureParentDir(file_);
}

void SubmissionStoreWriter::Append(const SubmissionRecord& record) {
  std::ofstream out(file_, std::ios::app);
  if (!out) throw IoError("cannot append to submission store: " + file_.string());
  out << RecordToJson(record).dump() << '\n';
  if (!out) throw IoError("short write to submission store: " + file_.string());
}

SubmissionStoreReader::SubmissionStoreReader(std::filesystem::path file, ReadCredential credential)
    : file_(std::move(file)), credential_(std::move(credential)) {}

void SubmissionStoreReader::Refresh() {
  index_.clear();
  for (auto& record : LoadRecords(file_)) {
    index_.emplace(record.submission_id, std::move(record));
  }
}

std::optional<SubmissionRecord> SubmissionStoreReader::Fetch(const std::string& submission_id) {
  auto it = index_.find(submission_id);
  if (it == index_.end()) {
    Refresh();
    it = index_.find(submission_id);
    if (it == index_.end()) return std::nullopt;
  }
  return it->second;
}

std::size_t SubmissionStoreReader::Count() {
  Refresh();
  return index_.size();
}

std::vector<std::string> SubmissionStoreReader::AllIds() {
  Refresh();
  std::vector<std::string> ids;
  ids.reserve(index_.size());
  for (const auto& [id, record] : index_) ids.push_back(id);
  return ids;
}

SubmissionStoreAdmin::SubmissionStoreAdmin(std::filesystem::path file) : file_(std::move(file)) {
  records_ = LoadRecords(file_);
  for (std::size_t i = 0; i < records_.size(); ++i) {
    by_id_[records_[i].submission_id] = i;
  }
}

std::vector<std::string> SubmissionStoreAdmin::EnvelopeIds(KeyPurpose purpose) {
  std::vector<std::string> ids;
  ids.reserve(records_.size());
  for (const auto& record : records_) {
    const Envelope& env =
        purpose == KeyPurpose::kAttributes ? record.attr_envelope : record.comp_envelope;
    if (env.purpose == purpose) ids.push_back(record.submission_id);
  }
  return ids;
}

Envelope SubmissionStoreAdmin::GetEnvelope(const std::string& id, KeyPurpose purpose) {
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) throw MissingSubmission("no submission " + id);
  const SubmissionRecord& record = records_[it->second];
  return purpose == KeyPurpose::kAttributes ? record.attr_envelope : record.comp_envelope;
}

void SubmissionStoreAdmin::PutEnvelope(const std::string& id, KeyPurpose purpose,
                                       const Envelope& envelope) {
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) throw MissingSubmission("no submission " + id);
  SubmissionRecord& record = records_[it->second];
  if (purpose == KeyPurpose::kAttributes) {
    record.attr_envelope = envelope;
  } else {
    record.comp_envelope = envelope;
  }
}

void SubmissionStoreAdmin::FlushEnvelopes() {
  EnsureParentDir(file_);
  const std::filesystem::path tmp = file_.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("cannot write submission store: " + tmp.string());
    for (const auto& record : records_) {
      out << RecordToJson(record).dump() << '\n';
    }
    if (!out) throw IoError("short write to submission store: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file_, ec);
  if (ec) throw IoError("cannot replace submission store: " + file_.string());
}

VerificationStore::VerificationStore(std::filesystem::path file) : file_(std::move(file)) {
  std::ifstream in(file_);
  if (!in) return;
  json j;
  in >> j;
  for (const auto& [member_id, row] : j.items()) {
    Row r;
    if (row.contains("last_submission_at")) {
      r.last_submission_at = ParseRfc3339(row.at("last_submission_at").get<std::string>());
    }
    if (row.contains("profile_changed_at")) {
      r.profile_changed_at = ParseRfc3339(row.at("profile_changed_at").get<std::string>());
    }
    rows_[member_id] = r;
  }
}

std::optional<Instant> VerificationStore::LastSubmission(const std::string& member_id) const {
  const auto it = rows_.find(member_id);
  if (it == rows_.end()) return std::nullopt;
  return it->second.last_submission_at;
}

void VerificationStore::RecordSubmission(const std::string& member_id, Instant at) {
  rows_[member_id].last_submission_at = at;
}

void VerificationStore::SetProfileChanged(const std::string& member_id, Instant at) {
  rows_[member_id].profile_changed_at = at;
}

std::optional<Instant> VerificationStore::ProfileChangedAt(const std::string& member_id) const {
  const auto it = rows_.find(member_id);
  if (it == rows_.end()) return std::nullopt;
  return it->second.profile_changed_at;
}

void VerificationStore::Save() const {
  EnsureParentDir(file_);
  json j = json::object();
  for (const auto& [member_id, row] : rows_) {
    json r = json::object();
    if (row.last_submission_at) r["last_submission_at"] = FormatRfc3339(*row.last_submission_at);
    if (row.profile_changed_at) r["profile_changed_at"] = FormatRfc3339(*row.profile_changed_at);
    j[member_id] = r;
  }
  std::ofstream out(file_);
  if (!out) throw IoError("cannot write verification store: " + file_.string());
  out << j.dump(2) << '\n';
}

SliceStateStore::SliceStateStore(std::filesystem::path file) : file_(std::move(file)) {
  std::ifstream in(file_);
  if (!in) return;
  json j;
  in >> j;
  for (const auto& [hash, cipher] : j.items()) {
    cipher_by_hash_[hash] = cipher.get<std::string>();
  }
}

std::optional<std::string> SliceStateStore::GetCipher(const std::string& cohort_hash) const {
  const auto it = cipher_by_hash_.find(cohort_hash);
  if (it == cipher_by_hash_.end()) return std::nullopt;
  return it->second;
}

void SliceStateStore::PutCipher(const std::string& cohort_hash, const std::string& envelope_b64) {
  cipher_by_hash_[cohort_hash] = envelope_b64;
}

std::vector<std::string> SliceStateStore::CohortHashes() const {
  std::vector<std::string> hashes;
  hashes.reserve(cipher_by_hash_.size());
  for (const auto& [hash, cipher] : cipher_by_hash_) hashes.push_back(hash);
  return hashes;
}

void SliceStateStore::Save() const {
  EnsureParentDir(file_);
  json j = json::object();
  for (const auto& [hash, cipher] : cipher_by_hash_) j[hash] = cipher;
  std::ofstream out(file_);
  if (!out) throw IoError("cannot write slice state store: " + file_.string());
  out << j.dump() << '\n';
}

std::vector<std::string> SliceStateStore::EnvelopeIds(KeyPurpose purpose) {
  if (purpose != KeyPurpose::kThreshold) return {};
  return CohortHashes();
}

Envelope SliceStateStore::GetEnvelope(const std::string& id, KeyPurpose purpose) {
  if (purpose != KeyPurpose::kThreshold) throw ConfigError("slice state holds threshold data only");
  const auto cipher = GetCipher(id);
  if (!cipher) throw DecryptFailure("no slice state for " + id);
  return Envelope::FromBase64(*cipher);
}

void SliceStateStore::PutEnvelope(const std::string& id, KeyPurpose purpose,
                                  const Envelope& envelope) {
  if (purpose != KeyPurpose::kThreshold) throw ConfigError("slice state holds threshold data only");
  PutCipher(id, envelope.ToBase64());
}

void SliceStateStore::FlushEnvelopes() { Save(); }

OfflineDataset::OfflineDataset(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
}

void OfflineDataset::AppendBatch(const std::string& slice_type, const std::string& release_date,
                                 const std::vector<DeidentifiedEntry>& entries) {
  const std::filesystem::path dir = root_ / slice_type;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path file = dir / (release_date + ".jsonl");
  std::string block;
  for (const auto& entry : entries) {
    block += ToJson(entry).dump();
    block.push_back('\n');
  }
  std::ofstream out(file, std::ios::app);
  if (!out) throw IoError("cannot append to offline partition: " + file.string());
  out << block;
  out.flush();
  if (!out) throw IoError("short write to offline partition: " + file.string());
}

std::vector<DeidentifiedEntry> OfflineDataset::ReadAll() const {
  std::vector<DeidentifiedEntry> entries;
  if (!std::filesystem::exists(root_)) return entries;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      entries.push_back(DeidentifiedEntryFromJson(json::parse(line)));
    }
  }
  return entries;
}

std::vector<DeidentifiedEntry> OfflineDataset::ReadSliceType(const std::string& slice_type) const {
  std::vector<DeidentifiedEntry> entries;
  for (auto& entry : ReadAll()) {
    if (entry.cohort.slice_type == slice_type) entries.push_back(std::move(entry));
  }
  return entries;
}

std::size_t OfflineDataset::CountAll() const { return ReadAll().size(); }

QuarantineStore::QuarantineStore(std::filesystem::path file) : file_(std::move(file)) {
  EnsureParentDir(file_);
}

void QuarantineStore::Add(const QuarantinedBatch& batch) {
  json j{{"batch_id", batch.batch_id},
         {"cohort", ToJson(batch.cohort)},
         {"reason", batch.reason},
         {"submission_ids", batch.submission_ids}};
  std::ofstream out(file_, std::ios::app);
  if (!out) throw IoError("cannot append to quarantine: " + file_.string());
  out << j.dump() << '\n';
}

std::vector<QuarantinedBatch> QuarantineStore::ReadAll() const {
  std::vector<QuarantinedBatch> batches;
  std::ifstream in(file_);
  if (!in) return batches;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    QuarantinedBatch batch;
    batch.batch_id = j.at("batch_id").get<std::string>();
    batch.cohort = CohortKeyFromJson(j.at("cohort"));
    batch.reason = j.at("reason").get<std::string>();
    batch.submission_ids = j.at("submission_ids").get<std::vector<std::string>>();
    batches.push_back(std::move(batch));
  }
  return batches;
}

std::size_t QuarantineStore::EntryCount() const {
  std::size_t count = 0;
  for (const auto& batch : ReadAll()) count += batch.submission_ids.size();
  return count;
}

}  // namespace compins
