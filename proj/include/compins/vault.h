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

#ifndef COMPINS_VAULT_H_
#define COMPINS_VAULT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "compins/bytes.h"
#include "compins/time.h"

typedef struct evp_pkey_st EVP_PKEY;

namespace compins {

// M keys protect member attributes, C keys protect compensation data, T is
// the symmetric key for the threshold store. Each purpose lives in its own
// keystore file so no single service ever holds both private halves.
enum class KeyPurpose : std::uint8_t {
  kAttributes = 1,
  kCompensation = 2,
  kThreshold = 3,
};

const char* PurposeName(KeyPurpose purpose);
KeyPurpose PurposeFromName(const std::string& name);

// Hybrid envelope: a fresh 256-bit data key wrapped under the purpose key
// (RSA-2048-OAEP for asymmetric purposes, AES-256-GCM under T for the
// threshold purpose), and the payload under the data key with AES-256-GCM.
struct Envelope {
  KeyPurpose purpose = KeyPurpose::kAttributes;
  std::uint32_t key_version = 0;
  Bytes wrapped_key;
  Bytes ciphertext;  // iv(12) || body || tag(16)

  // Length-prefixed binary: purpose(1) | version(4 BE) | len(4 BE)+wrapped |
  // len(4 BE)+ciphertext.
  Bytes Serialize() const;
  static Envelope Deserialize(std::span<const std::uint8_t> data);  // throws ParseError

  std::string ToBase64() const;
  static Envelope FromBase64(const std::string& encoded);
};

// Encrypt-only half of an asymmetric purpose key, or the symmetric threshold
// key when the purpose is kThreshold (symmetric keys have no public half and
// the same material encrypts and decrypts).
class EncryptKey {
 public:
  KeyPurpose purpose() const { return purpose_; }
  std::uint32_t version() const { return version_; }

  Envelope Encrypt(std::span<const std::uint8_t> payload, KeyPurpose declared_purpose) const;

 private:
  friend class Keystore;
  friend class DecryptKey;
  EncryptKey(KeyPurpose purpose, std::uint32_t version, std::shared_ptr<EVP_PKEY> rsa_public,
             Bytes symmetric);

  KeyPurpose purpose_;
  std::uint32_t version_;
  std::shared_ptr<EVP_PKEY> rsa_public_;  // null for threshold purpose
  Bytes symmetric_;                       // empty for asymmetric purposes
};

// Decrypt-capable key: RSA private key or the threshold symmetric key.
class DecryptKey {
 public:
  KeyPurpose purpose() const { return purpose_; }
  std::uint32_t version() const { return version_; }

  Bytes Decrypt(const Envelope& envelope) const;  // throws AuthFailure

  // Re-wraps an envelope's data key under `next` without touching the
  // payload ciphertext. Used by key rotation.
  Envelope Rewrap(const Envelope& envelope, const EncryptKey& next) const;

  EncryptKey ToEncryptKey() const;

 private:
  friend class Keystore;
  DecryptKey(KeyPurpose purpose, std::uint32_t version, std::shared_ptr<EVP_PKEY> rsa_pair,
             Bytes symmetric);

  Bytes UnwrapDataKey(const Envelope& envelope) const;

  KeyPurpose purpose_;
  std::uint32_t version_;
  std::shared_ptr<EVP_PKEY> rsa_pair_;
  Bytes symmetric_;
};

// One purpose's versioned key material in a passphrase-protected JSON file.
// Entries: {purpose, version, created_at, material: base64, retired}.
class Keystore {
 public:
  Keystore(std::filesystem::path file, KeyPurpose purpose, std::string passphrase);

  // Fresh key material at version = current + 1 (or 1), persisted.
  // Asymmetric purposes get an RSA-2048 pair, threshold a 256-bit key.
  std::uint32_t Generate(Instant now);

  bool HasKeys() const { return !versions_.empty(); }
  std::uint32_t CurrentVersion() const;

  EncryptKey LoadEncrypt(std::optional<std::uint32_t> version = std::nullopt) const;
  DecryptKey LoadDecrypt(std::optional<std::uint32_t> version = std::nullopt) const;

  void MarkRetired(std::uint32_t version);
  bool IsRetired(std::uint32_t version) const;

  // Writes {purpose, version, spki: base64} for distribution to encrypt-only
  // services. Asymmetric purposes only.
  void ExportPublic(const std::filesystem::path& out_file) const;
  static EncryptKey LoadPublic(const std::filesystem::path& file);

  const std::filesystem::path& file() const { return file_; }
  KeyPurpose purpose() const { return purpose_; }

 private:
  struct Entry {
    Instant created_at = 0;
    Bytes material;  // decrypted: PKCS8 DER for RSA, raw 32 bytes for threshold
    bool retired = false;
  };

  void Load();
  void Persist() const;

  std::filesystem::path file_;
  KeyPurpose purpose_;
  std::string passphrase_;
  std::map<std::uint32_t, Entry> versions_;
};

// Rotation surface: any store holding envelopes addressable by id.
class EnvelopeStore {
 public:
  virtual ~EnvelopeStore() = default;
  virtual std::vector<std::string> EnvelopeIds(KeyPurpose purpose) = 0;
  virtual Envelope GetEnvelope(const std::string& id, KeyPurpose purpose) = 0;
  virtual void PutEnvelope(const std::string& id, KeyPurpose purpose, const Envelope& envelope) = 0;
  virtual void FlushEnvelopes() = 0;
};

struct RotateOptions {
  // Progress marker beside the store; rotation resumes from it after a
  // failure and removes it on completion.
  std::filesystem::path marker_file;
  // Test hook: abort after this many re-wraps (-1 = never).
  int fail_after = -1;
};

// Re-wraps every envelope of `purpose` in `store` under a fresh key version;
// old version is marked retired. Throws PartialRotation listing the ids not
// yet re-encrypted when interrupted; re-running resumes.
std::uint32_t Rotate(KeyPurpose purpose, EnvelopeStore& store, Keystore& keystore, Instant now,
                     const RotateOptions& options);

}  // namespace compins

#endif  // COMPINS_VAULT_H_
