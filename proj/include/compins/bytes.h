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

#ifndef COMPINS_BYTES_H_
#define COMPINS_BYTES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace compins {

using Bytes = std::vector<std::uint8_t>;

std::string Sha256Hex(std::span<const std::uint8_t> data);
std::string Sha256Hex(const std::string& data);

std::string Base64Encode(std::span<const std::uint8_t> data);
Bytes Base64Decode(const std::string& encoded);  // throws ParseError

// CSPRNG bytes (OpenSSL RAND_bytes).
Bytes RandomBytes(std::size_t n);

// 128-bit random identifier as 32 hex chars.
std::string RandomId128();

inline Bytes ToBytes(const std::string& s) { return Bytes(s.begin(), s.end()); }
inline std::string ToString(std::span<const std::uint8_t> b) {
  return std::string(b.begin(), b.end());
}

}  // namespace compins

#endif  // COMPINS_BYTES_H_
