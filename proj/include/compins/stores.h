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

#ifndef COMPINS_STORES_H_
#define COMPINS_STORES_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "compins/domain.h"
#include "compins/vault.h"

namespace compins {

// One member submission at rest: both halves encrypted under different
// purposes, identifiers opaque.
struct SubmissionRecord {
  std::string submission_id;  // 128-bit random, never derived from member_id
  Envelope attr_envelope;     // purpose = attributes
  Envelope comp_envelope;     // purpose = compensation
  Instant true_timestamp = 0;
};

// Append-only handle used by the submission service. Deliberately exposes no
// fetch/scan/update surface; reading requires a ReadCredential.
class SubmissionStoreWriter {
 public:
  explicit SubmissionStoreWriter(std::filesystem::path file);
  void Append(const SubmissionRecord& record);
  const std::filesystem::path& file() const { return file_; }

 private:
  std::filesystem::path file_;
};

// Capability token for read access to the submission store. Only the
// preparation side of the pipeline constructs one.
class ReadCredential {
 public:
  static ReadCredential ForService(std::string service_name) {
    return ReadCredential(std::move(service_name));
  }
  const std::string& service_name() const { return service_name_; }

 private:
  explicit ReadCredential(std::string service_name) : service_name_(std::move(service_name)) {}
  std::string service_name_;
};

class SubmissionStoreReader {
 public:
  SubmissionStoreReader(std::filesystem::path file, ReadCredential credential);

  std::optional<SubmissionRecord> Fetch(const std::string& submission_id);
  std::size_t Count();
  std::vector<std::string> AllIds();

 private:
  void Refresh();

  std::filesystem::path file_;
  ReadCredential credential_;
  std::map<std::string, SubmissionRecord> index_;
};

// Full-access handle for maintenance (key rotation). Implements the
// EnvelopeStore rotation surface over both envelope columns.
class SubmissionStoreAdmin : public EnvelopeStore {
 public:
  explicit SubmissionStoreAdmin(std::filesystem::path file);

  std::vector<std::string> EnvelopeIds(KeyPurpose purpose) override;
  Envelope GetEnvelope(const std::string& id, KeyPurpose purpose) override;
  void PutEnvelope(const std::string& id, KeyPurpose purpose, const Envelope& envelope) override;
  void FlushEnvelopes() override;

 private:
  std::filesystem::path file_;
  std::vector<SubmissionRecord> records_;
  std::map<std::string, std::size_t> by_id_;
};

// Recency-only record powering give-to-get and resubmission limits. Holds no
// compensation data and no submission ids.
class VerificationStore {
 public:
  explicit VerificationStore(std::filesystem::path file);

  std::optional<Instant> LastSubmission(const std::string& member_id) const;
  void RecordSubmission(const std::string& member_id, Instant at);
  void SetProfileChanged(const std::string& member_id, Instant at);
  std::optional<Instant> ProfileChangedAt(const std::string& member_id) const;

  void Save() const;

 private:
  struct Row {
    std::optional<Instant> last_submission_at;
    std::optional<Instant> profile_changed_at;
  };
  std::filesystem::path file_;
  std::map<std::string, Row> rows_;
};

// Per-cohort counters and pending submission lists, persisted encrypted
// under the threshold symmetric key and keyed by hash(CohortKey). Also a
// rotation surface for T.
class SliceStateStore : public EnvelopeStore {
 public:
  explicit SliceStateStore(std::filesystem::path file);

  std::optional<std::string> GetCipher(const std::string& cohort_hash) const;
  void PutCipher(const std::string& cohort_hash, const std::string& envelope_b64);
  std::vector<std::string> CohortHashes() const;

  void Save() const;

  std::vector<std::string> EnvelopeIds(KeyPurpose purpose) override;
  Envelope GetEnvelope(const std::string& id, KeyPurpose purpose) override;
  void PutEnvelope(const std::string& id, KeyPurpose purpose, const Envelope& envelope) override;
  void FlushEnvelopes() override;

 private:
  std::filesystem::path file_;
  std::map<std::string, std::string> cipher_by_hash_;
};

// De-identified landing zone: JSON-lines partitioned by slice type and
// release date. Batches append atomically (all lines in one write).
class OfflineDataset {
 public:
  explicit OfflineDataset(std::filesystem::path root);

  void AppendBatch(const std::string& slice_type, const std::string& release_date,
                   const std::vector<DeidentifiedEntry>& entries);

  std::vector<DeidentifiedEntry> ReadAll() const;
  std::vector<DeidentifiedEntry> ReadSliceType(const std::string& slice_type) const;
  std::size_t CountAll() const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

struct QuarantinedBatch {
  std::string batch_id;
  CohortKey cohort;
  std::string reason;
  std::vector<std::string> submission_ids;
};

class QuarantineStore {
 public:
  explicit QuarantineStore(std::filesystem::path file);
  void Add(const QuarantinedBatch& batch);
  std::vector<QuarantinedBatch> ReadAll() const;
  std::size_t EntryCount() const;

 private:
  std::filesystem::path file_;
};

}  // namespace compins

#endif  // COMPINS_STORES_H_
