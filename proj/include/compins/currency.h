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

#ifndef COMPINS_CURRENCY_H_
#define COMPINS_CURRENCY_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "compins/domain.h"

namespace compins {

// Static exchange-rate fixture. Rates are integer millionths of the
// reference currency per unit, so conversion stays in integer arithmetic.
class CurrencyTable {
 public:
  static CurrencyTable Load(const std::filesystem::path& file);
  static CurrencyTable FromRates(std::map<std::string, std::int64_t> rates_ppm,
                                 std::map<std::string, std::string> country_currency);

  bool Has(const std::string& currency) const { return rates_ppm_.contains(currency); }
  std::int64_t RatePpm(const std::string& currency) const;  // throws ValidationError
  const std::string& CurrencyForCountry(const std::string& country) const;

  // amount * from_ppm / to_ppm, rounded half-up.
  static Money ConvertWithRates(Money amount, std::int64_t from_ppm, std::int64_t to_ppm);
  Money Convert(Money amount, const std::string& from_currency,
                const std::string& to_currency) const;

 private:
  std::map<std::string, std::int64_t> rates_ppm_;
  std::map<std::string, std::string> country_currency_;
};

}  // namespace compins

#endif  // COMPINS_CURRENCY_H_
