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

#include "compins/vault.h"

#include <openssl/evp.h>
#include <openssl/rsa.h>

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "compins/errors.h"

namespace compins {

using nlohmann::json;

namespace {

constexpr std::size_t kDataKeyBytes = 32;
constexpr std::size_t kGcmIvBytes = 12;
constexpr std::size_t kGcmTagBytes = 16;
constexpr std::size_t kKeystoreSaltBytes = 16;
constexpr int kPbkdf2Iterations = 10000;

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct CtxDeleter {
  void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};

using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, CtxDeleter>;
using CipherCtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

std::shared_ptr<EVP_PKEY> GenerateRsa2048() {
  PkeyCtxPtr ctx(EVP_PKEY_CTX_new_id(EVP_PKEY_RSA, nullptr));
  if (!ctx || EVP_PKEY_keygen_init(ctx.get()) <= 0 ||
      EVP_PKEY_CTX_set_rsa_keygen_bits(ctx.get(), 2048) <= 0) {
    throw Error("RSA keygen init failed");
  }
  EVP_PKEY* raw = nullptr;
  if (EVP_PKEY_keygen(ctx.get(), &raw) <= 0) throw Error("RSA keygen failed");
  return std::shared_ptr<EVP_PKEY>(raw, PkeyDeleter());
}

Bytes PrivateKeyDer(EVP_PKEY* key) {
  const int len = i2d_PrivateKey(key, nullptr);
  if (len <= 0) throw Error("private key serialization failed");
  Bytes out(static_cast<std::size_t>(len));
  unsigned char* p = out.data();
  i2d_PrivateKey(key, &p);
  return out;
}

std::shared_ptr<EVP_PKEY> PrivateKeyFromDer(std::span<const std::uint8_t> der) {
  const unsigned char* p = der.data();
  EVP_PKEY* raw = d2i_PrivateKey(EVP_PKEY_RSA, nullptr, &p, static_cast<long>(der.size()));
  if (raw == nullptr) throw ParseError("cannot parse RSA private key");
  return std::shared_ptr<EVP_PKEY>(raw, PkeyDeleter());
}

Bytes PublicKeyDer(EVP_PKEY* key) {
  const int len = i2d_PUBKEY(key, nullptr);
  if (len <= 0) throw Error("public key serialization failed");
  Bytes out(static_cast<std::size_t>(len));
  unsigned char* p = out.data();
  i2d_PUBKEY(key, &p);
  return out;
}

std::shared_ptr<EVP_PKEY> PublicKeyFromDer(std::span<const std::uint8_t> der) {
  const unsigned char* p = der.data();
  EVP_PKEY* raw = d2i_PUBKEY(nullptr, &p, static_cast<long>(der.size()));
  if (raw == nullptr) throw ParseError("cannot parse RSA public key");
  return std::shared_ptr<EVP_PKEY>(raw, PkeyDeleter());
}

Bytes RsaOaepWrap(EVP_PKEY* public_key, std::span<const std::uint8_t> data_key) {
  PkeyCtxPtr ctx(EVP_PKEY_CTX_new(public_key, nullptr));
  if (!ctx || EVP_PKEY_encrypt_init(ctx.get()) <= 0 ||
      EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_OAEP_PADDING) <= 0 ||
      EVP_PKEY_CTX_set_rsa_oaep_md(ctx.get(), EVP_sha256()) <= 0) {
    throw Error("OAEP wrap init failed");
  }
  std::size_t out_len = 0;
  if (EVP_PKEY_encrypt(ctx.get(), nullptr, &out_len, data_key.data(), data_key.size()) <= 0) {
    throw Error("OAEP wrap sizing failed");
  }
  Bytes out(out_len);
  if (EVP_PKEY_encrypt(ctx.get(), out.data(), &out_len, data_key.data(), data_key.size()) <= 0) {
    throw Error("OAEP wrap failed");
  }
  out.resize(out_len);
  return out;
}

Bytes RsaOaepUnwrap(EVP_PKEY* key_pair, std::span<const std::uint8_t> wrapped) {
  PkeyCtxPtr ctx(EVP_PKEY_CTX_new(key_pair, nullptr));
  if (!ctx || EVP_PKEY_decrypt_init(ctx.get()) <= 0 ||
      EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_OAEP_PADDING) <= 0 ||
      EVP_PKEY_CTX_set_rsa_oaep_md(ctx.get(), EVP_sha256()) <= 0) {
    throw Error("OAEP unwrap init failed");
  }
  std::size_t out_len = 0;
  if (EVP_PKEY_decrypt(ctx.get(), nullptr, &out_len, wrapped.data(), wrapped.size()) <= 0) {
    throw AuthFailure("key unwrap failed");
  }
  Bytes out(out_len);
  if (EVP_PKEY_decrypt(ctx.get(), out.data(), &out_len, wrapped.data(), wrapped.size()) <= 0) {
    throw AuthFailure("key unwrap failed");
  }
  out.resize(out_len);
  if (out.size() != kDataKeyBytes) throw AuthFailure("unwrapped key has wrong size");
  return out;
}

// iv(12) || body || tag(16)
Bytes AesGcmEncrypt(std::span<const std::uint8_t> key, std::span<const std::uint8_t> plaintext,
                    std::span<const std::uint8_t> aad) {
  const Bytes iv = RandomBytes(kGcmIvBytes);
  CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), iv.data()) != 1) {
    throw Error("GCM encrypt init failed");
  }
  int len = 0;
  if (!aad.empty() &&
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1) {
    throw Error("GCM aad failed");
  }
  Bytes out(kGcmIvBytes + plaintext.size() + kGcmTagBytes);
  std::copy(iv.begin(), iv.end(), out.begin());
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(ctx.get(), out.data() + kGcmIvBytes, &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1) {
    throw Error("GCM encrypt failed");
  }
  int final_len = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + kGcmIvBytes + plaintext.size(), &final_len) !=
      1) {
    throw Error("GCM finalize failed");
  }
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kGcmTagBytes,
                          out.data() + kGcmIvBytes + plaintext.size()) != 1) {
    throw Error("GCM tag failed");
  }
  return out;
}

Bytes AesGcmDecrypt(std::span<const std::uint8_t> key, std::span<const std::uint8_t> blob,
                    std::span<const std::uint8_t> aad) {
  if (blob.size() < kGcmIvBytes + kGcmTagBytes) throw AuthFailure("ciphertext too short");
  const std::size_t body_len = blob.size() - kGcmIvBytes - kGcmTagBytes;
  CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx ||
      EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), blob.data()) != 1) {
    throw Error("GCM decrypt init failed");
  }
  int len = 0;
  if (!aad.empty() &&
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1) {
    throw Error("GCM aad failed");
  }
  Bytes out(body_len);
  if (body_len > 0 && EVP_DecryptUpdate(ctx.get(), out.data(), &len, blob.data() + kGcmIvBytes,
                                        static_cast<int>(body_len)) != 1) {
    throw AuthFailure("authenticated decryption failed");
  }
  Bytes tag(blob.end() - kGcmTagBytes, blob.end());
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kGcmTagBytes, tag.data()) != 1) {
    throw Error("GCM set tag failed");
  }
  int final_len = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + body_len, &final_len) != 1) {
    throw AuthFailure("authenticated decryption failed");
  }
  return out;
}

Bytes PayloadAad(KeyPurpose purpose) { return Bytes{static_cast<std::uint8_t>(purpose)}; }

Bytes WrapAad(KeyPurpose purpose, std::uint32_t version) {
  return Bytes{static_cast<std::uint8_t>(purpose), static_cast<std::uint8_t>(version >> 24),
               static_cast<std::uint8_t>(version >> 16), static_cast<std::uint8_t>(version >> 8),
               static_cast<std::uint8_t>(version)};
}

Bytes DeriveKeystoreKey(const std::string& passphrase, std::span<const std::uint8_t> salt) {
  Bytes key(kDataKeyBytes);
  if (PKCS5_PBKDF2_HMAC(passphrase.data(), static_cast<int>(passphrase.size()), salt.data(),
                        static_cast<int>(salt.size()), kPbkdf2Iterations, EVP_sha256(),
                        static_cast<int>(key.size()), key.data()) != 1) {
    throw Error("PBKDF2 failed");
  }
  return key;
}

void AppendU32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t ReadU32(std::span<const std::uint8_t> data, std::size_t& pos) {
  if (pos + 4 > data.size()) throw ParseError("truncated envelope");
  const std::uint32_t v = (static_cast<std::uint32_t>(data[pos]) << 24) |
                          (static_cast<std::uint32_t>(data[pos + 1]) << 16) |
                          (static_cast<std::uint32_t>(data[pos + 2]) << 8) |
                          static_cast<std::uint32_t>(data[pos + 3]);
  pos += 4;
  return v;
}

}  // namespace

const char* PurposeName(KeyPurpose purpose) {
  switch (purpose) {
    case KeyPurpose::kAttributes:
      return "attributes";
    case KeyPurpose::kCompensation:
      return "compensation";
    case KeyPurpose::kThreshold:
      return "threshold";
  }
  return "?";
}

KeyPurpose PurposeFromName(const std::string& name) {
  if (name == "attributes") return KeyPurpose::kAttributes;
  if (name == "compensation") return KeyPurpose::kCompensation;
  if (name == "threshold") return KeyPurpose::kThreshold;
  throw ParseError("unknown key purpose: " + name);
}

Bytes Envelope::Serialize() const {
  Bytes out;
  out.reserve(1 + 4 + 4 + wrapped_key.size() + 4 + ciphertext.size());
  out.push_back(static_cast<std::uint8_t>(purpose));
  AppendU32(out, key_version);
  AppendU32(out, static_cast<std::uint32_t>(wrapped_key.size()));
  out.insert(out.end(), wrapped_key.begin(), wrapped_key.end());
  AppendU32(out, static_cast<std::uint32_t>(ciphertext.size()));
  out.insert(out.end(), ciphertext.begin(), ciphertext.end());
  return out;
}

Envelope Envelope::Deserialize(std::span<const std::uint8_t> data) {
  if (data.size() < 13) throw ParseError("truncated envelope");
  Envelope env;
  std::size_t pos = 0;
  const std::uint8_t purpose_byte = data[pos++];
  if (purpose_byte < 1 || purpose_byte > 3) throw ParseError("bad envelope purpose");
  env.purpose = static_cast<KeyPurpose>(purpose_byte);
  env.key_version = ReadU32(data, pos);
  const std::uint32_t wk_len = ReadU32(data, pos);
  if (pos + wk_len > data.size()) throw ParseError("truncated envelope");
  env.wrapped_key.assign(data.begin() + static_cast<std::ptrdiff_t>(pos),
                         data.begin() + static_cast<std::ptrdiff_t>(pos + wk_len));
  pos += wk_len;
  const std::uint32_t ct_len = ReadU32(data, pos);
  if (pos + ct_len != data.size()) throw ParseError("envelope length mismatch");
  env.ciphertext.assign(data.begin() + static_cast<std::ptrdiff_t>(pos), data.end());
  return env;
}

std::string Envelope::ToBase64() const { return Base64Encode(Serialize()); }

Envelope Envelope::FromBase64(const std::string& encoded) {
  return Deserialize(Base64Decode(encoded));
}

EncryptKey::EncryptKey(KeyPurpose purpose, std::uint32_t version,
                       std::shared_ptr<EVP_PKEY> rsa_public, Bytes symmetric)
    : purpose_(purpose),
      version_(version),
      rsa_public_(std::move(rsa_public)),
      symmetric_(std::move(symmetric)) {}

Envelope EncryptKey::Encrypt(std::span<const std::uint8_t> payload,
                             KeyPurpose declared_purpose) const {
  if (declared_purpose != purpose_) {
    throw PurposeMismatch(std::string("key purpose ") + PurposeName(purpose_) +
                          " does not match declared purpose " + PurposeName(declared_purpose));
  }
  const Bytes data_key = RandomBytes(kDataKeyBytes);
  Envelope env;
  env.purpose = purpose_;
  env.key_version = version_;
  if (rsa_public_) {
    env.wrapped_key = RsaOaepWrap(rsa_public_.get(), data_key);
  } else {
    env.wrapped_key = AesGcmEncrypt(symmetric_, data_key, WrapAad(purpose_, version_));
  }
  env.ciphertext = AesGcmEncrypt(data_key, payload, PayloadAad(purpose_));
  return env;
}

DecryptKey::DecryptKey(KeyPurpose purpose, std::uint32_t version,
                       std::shared_ptr<EVP_PKEY> rsa_pair, Bytes symmetric)
    : purpose_(purpose),
      version_(version),
      rsa_pair_(std::move(rsa_pair)),
      symmetric_(std::move(symmetric)) {}

Bytes DecryptKey::UnwrapDataKey(const Envelope& envelope) const {
  if (envelope.purpose != purpose_ || envelope.key_version != version_) {
    throw AuthFailure(std::string("envelope (") + PurposeName(envelope.purpose) + " v" +
                      std::to_string(envelope.key_version) + ") does not match key (" +
                      PurposeName(purpose_) + " v" + std::to_string(version_) + ")");
  }
  if (rsa_pair_) return RsaOaepUnwrap(rsa_pair_.get(), envelope.wrapped_key);
  return AesGcmDecrypt(symmetric_, envelope.wrapped_key, WrapAad(purpose_, version_));
}

Bytes DecryptKey::Decrypt(const Envelope& envelope) const {
  const Bytes data_key = UnwrapDataKey(envelope);
  return AesGcmDecrypt(data_key, envelope.ciphertext, PayloadAad(envelope.purpose));
}

Envelope DecryptKey::Rewrap(const Envelope& envelope, const EncryptKey& next) const {
  if (next.purpose() != purpose_) throw PurposeMismatch("rotation across purposes");
  const Bytes data_key = UnwrapDataKey(envelope);
  Envelope out = envelope;
  out.key_version = next.version();
  if (next.rsa_public_) {
    out.wrapped_key = RsaOaepWrap(next.rsa_public_.get(), data_key);
  } else {
    out.wrapped_key = AesGcmEncrypt(next.symmetric_, data_key, WrapAad(purpose_, next.version()));
  }
  return out;
}

EncryptKey DecryptKey::ToEncryptKey() const {
  if (rsa_pair_) {
    // Round-trip through DER to drop the private components.
    return EncryptKey(purpose_, version_, PublicKeyFromDer(PublicKeyDer(rsa_pair_.get())), {});
  }
  return EncryptKey(purpose_, version_, nullptr, symmetric_);
}

Keystore::Keystore(std::filesystem::path file, KeyPurpose purpose, std::string passphrase)
    : file_(std::move(file)), purpose_(purpose), passphrase_(std::move(passphrase)) {
  Load();
}

void Keystore::Load() {
  std::ifstream in(file_);
  if (!in) return;  // fresh store
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("keystore " + file_.string() + ": " + e.what());
  }
  for (const auto& item : j) {
    if (PurposeFromName(item.at("purpose").get<std::string>()) != purpose_) {
      throw ConfigError("keystore " + file_.string() + " holds a different purpose");
    }
    const auto version = item.at("version").get<std::uint32_t>();
    Entry entry;
    entry.created_at = ParseRfc3339(item.at("created_at").get<std::string>());
    entry.retired = item.at("retired").get<bool>();
    const Bytes blob = Base64Decode(item.at("material").get<std::string>());
    if (blob.size() < kKeystoreSaltBytes) throw ParseError("keystore material too short");
    const std::span<const std::uint8_t> salt(blob.data(), kKeystoreSaltBytes);
    const Bytes key = DeriveKeystoreKey(passphrase_, salt);
    try {
      entry.material = AesGcmDecrypt(
          key, std::span<const std::uint8_t>(blob.data() + kKeystoreSaltBytes,
                                             blob.size() - kKeystoreSaltBytes),
          WrapAad(purpose_, version));
    } catch (const AuthFailure&) {
      throw AuthFailure("wrong passphrase for keystore " + file_.string());
    }
    versions_[version] = std::move(entry);
  }
}

void Keystore::Persist() const {
  json j = json::array();
  for (const auto& [version, entry] : versions_) {
    const Bytes salt = RandomBytes(kKeystoreSaltBytes);
    const Bytes key = DeriveKeystoreKey(passphrase_, salt);
    Bytes blob = salt;
    const Bytes sealed = AesGcmEncrypt(key, entry.material, WrapAad(purpose_, version));
    blob.insert(blob.end(), sealed.begin(), sealed.end());
    j.push_back(json{{"purpose", PurposeName(purpose_)},
                     {"version", version},
                     {"created_at", FormatRfc3339(entry.created_at)},
                     {"material", Base64Encode(blob)},
                     {"retired", entry.retired}});
  }
  std::error_code ec;
  std::filesystem::create_directories(file_.parent_path(), ec);
  const std::filesystem::path tmp = file_.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw KeystoreWriteError("cannot write keystore: " + tmp.string());
    out << j.dump(2) << '\n';
    if (!out) throw KeystoreWriteError("short write to keystore: " + tmp.string());
  }
  std::filesystem::rename(tmp, file_, ec);
  if (ec) throw KeystoreWriteError("cannot replace keystore: " + file_.string());
}

std::uint32_t Keystore::Generate(Instant now) {
  const std::uint32_t version = versions_.empty() ? 1 : versions_.rbegin()->first + 1;
  Entry entry;
  entry.created_at = now;
  if (purpose_ == KeyPurpose::kThreshold) {
    entry.material = RandomBytes(kDataKeyBytes);
  } else {
    entry.material = PrivateKeyDer(GenerateRsa2048().get());
  }
  versions_[version] = std::move(entry);
  Persist();
  return version;
}

std::uint32_t Keystore::CurrentVersion() const {
  if (versions_.empty()) throw ConfigError("keystore has no keys: " + file_.string());
  return versions_.rbegin()->first;
}

EncryptKey Keystore::LoadEncrypt(std::optional<std::uint32_t> version) const {
  return LoadDecrypt(version).ToEncryptKey();
}

DecryptKey Keystore::LoadDecrypt(std::optional<std::uint32_t> version) const {
  const std::uint32_t v = version.value_or(CurrentVersion());
  const auto it = versions_.find(v);
  if (it == versions_.end()) {
    throw ConfigError("keystore " + file_.string() + " has no version " + std::to_string(v));
  }
  if (purpose_ == KeyPurpose::kThreshold) {
    return DecryptKey(purpose_, v, nullptr, it->second.material);
  }
  return DecryptKey(purpose_, v, PrivateKeyFromDer(it->second.material), {});
}

void Keystore::MarkRetired(std::uint32_t version) {
  const auto it = versions_.find(version);
  if (it == versions_.end()) return;
  it->second.retired = true;
  Persist();
}

bool Keystore::IsRetired(std::uint32_t version) const {
  const auto it = versions_.find(version);
  return it != versions_.end() && it->second.retired;
}

void Keystore::ExportPublic(const std::filesystem::path& out_file) const {
  if (purpose_ == KeyPurpose::kThreshold) {
    throw ConfigError("threshold key has no public half");
  }
  const std::uint32_t version = CurrentVersion();
  const auto& entry = versions_.at(version);
  const auto pair = PrivateKeyFromDer(entry.material);
  json j{{"purpose", PurposeName(purpose_)},
         {"version", version},
         {"spki", Base64Encode(PublicKeyDer(pair.get()))}};
  std::error_code ec;
  std::filesystem::create_directories(out_file.parent_path(), ec);
  std::ofstream out(out_file);
  if (!out) throw KeystoreWriteError("cannot write public key file: " + out_file.string());
  out << j.dump(2) << '\n';
}

EncryptKey Keystore::LoadPublic(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open public key file: " + file.string());
  json j;
  in >> j;
  const KeyPurpose purpose = PurposeFromName(j.at("purpose").get<std::string>());
  return EncryptKey(purpose, j.at("version").get<std::uint32_t>(),
                    PublicKeyFromDer(Base64Decode(j.at("spki").get<std::string>())), {});
}

std::uint32_t Rotate(KeyPurpose purpose, EnvelopeStore& store, Keystore& keystore, Instant now,
                     const RotateOptions& options) {
  if (keystore.purpose() != purpose) throw ConfigError("keystore purpose mismatch in rotation");

  // Resume an interrupted rotation instead of minting yet another version.
  std::uint32_t from_version = 0;
  std::uint32_t to_version = 0;
  if (!options.marker_file.empty() && std::filesystem::exists(options.marker_file)) {
    std::ifstream in(options.marker_file);
    json marker;
    in >> marker;
    if (PurposeFromName(marker.at("purpose").get<std::string>()) == purpose) {
      from_version = marker.at("from_version").get<std::uint32_t>();
      to_version = marker.at("to_version").get<std::uint32_t>();
    }
  }
  if (to_version == 0) {
    from_version = keystore.CurrentVersion();
    to_version = keystore.Generate(now);
    if (!options.marker_file.empty()) {
      json marker{{"purpose", PurposeName(purpose)},
                  {"from_version", from_version},
                  {"to_version", to_version}};
      std::ofstream out(options.marker_file);
      out << marker.dump() << '\n';
    }
  }

  const DecryptKey old_key = keystore.LoadDecrypt(from_version);
  const EncryptKey new_key = keystore.LoadEncrypt(to_version);

  const std::vector<std::string> ids = store.EnvelopeIds(purpose);
  int done = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Envelope env = store.GetEnvelope(ids[i], purpose);
    if (env.key_version == to_version) continue;  // already rotated
    if (options.fail_after >= 0 && done >= options.fail_after) {
      store.FlushEnvelopes();
      throw PartialRotation(
          "rotation interrupted after " + std::to_string(done) + " envelopes",
          std::vector<std::string>(ids.begin() + static_cast<std::ptrdiff_t>(i), ids.end()));
    }
    store.PutEnvelope(ids[i], purpose, old_key.Rewrap(env, new_key));
    ++done;
  }
  store.FlushEnvelopes();
  keystore.MarkRetired(old_key.version());
  if (!options.marker_file.empty()) {
    std::error_code ec;
    std::filesystem::remove(options.marker_file, ec);
  }
  return to_version;
}

}  // namespace compins
