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

#include "compins/currency.h"

#include <fstream>

#include <nlohmann/json.hpp>

#include "compins/errors.h"

namespace compins {

using nlohmann::json;

CurrencyTable CurrencyTable::Load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open currency table: " + file.string());
  json j;
  in >> j;
  std::map<std::string, std::int64_t> rates;
  for (const auto& [code, rate] : j.at("rates_ppm").items()) {
    rates[code] = rate.get<std::int64_t>();
  }
  std::map<std::string, std::string> country_currency;
  for (const auto& [country, code] : j.at("country_currency").items()) {
    country_currency[country] = code.get<std::string>();
  }
  return FromRates(std::move(rates), std::move(country_currency));
}

CurrencyTable CurrencyTable::FromRates(std::map<std::string, std::int64_t> rates_ppm,
                                       std::map<std::string, std::string> country_currency) {
  CurrencyTable table;
  table.rates_ppm_ = std::move(rates_ppm);
  table.country_currency_ = std::move(country_currency);
  for (const auto& [country, code] : table.country_currency_) {
    if (!table.rates_ppm_.contains(code)) {
      throw ConfigError("country " + country + " maps to unknown currency " + code);
    }
  }
  return table;
}

std::int64_t CurrencyTable::RatePpm(const std::string& currency) const {
  const auto it = rates_ppm_.find(currency);
  if (it == rates_ppm_.end()) {
    throw ValidationError("currency not in the configured currency table: " + currency);
  }
  return it->second;
}

const std::string& CurrencyTable::CurrencyForCountry(const std::string& country) const {
  const auto it = country_currency_.find(country);
  if (it == country_currency_.end()) {
    throw ValidationError("no currency configured for country: " + country);
  }
  return it->second;
}

Money CurrencyTable::ConvertWithRates(Money amount, std::int64_t from_ppm, std::int64_t to_ppm) {
  if (from_ppm <= 0 || to_ppm <= 0) throw ValidationError("exchange rate must be positive");
  if (from_ppm == to_ppm) return amount;
  const __int128 scaled = static_cast<__int128>(amount) * from_ppm;
  const __int128 rounded = (2 * scaled + to_ppm) / (2 * static_cast<__int128>(to_ppm));
  return static_cast<Money>(rounded);
}

Money CurrencyTable::Convert(Money amount, const std::string& from_currency,
                             const std::string& to_currency) const {
  return ConvertWithRates(amount, RatePpm(from_currency), RatePpm(to_currency));
}

}  // namespace compins
