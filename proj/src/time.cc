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

#include "compins/time.h"

#include <cstdio>

#include "compins/errors.h"

namespace compins {

namespace {

// Floor division/modulo for possibly negative instants.
std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t FloorMod(std::int64_t a, std::int64_t b) { return a - FloorDiv(a, b) * b; }

}  // namespace

const std::vector<TimeLevel>& TimestampHierarchy() {
  static const std::vector<TimeLevel> kLevels = {
      TimeLevel::kSecond, TimeLevel::kMinute, TimeLevel::kHour, TimeLevel::kDate,
      TimeLevel::kWeek,   TimeLevel::kMonth,  TimeLevel::kYear,
  };
  return kLevels;
}

const char* TimeLevelName(TimeLevel level) {
  switch (level) {
    case TimeLevel::kSecond:
      return "second";
    case TimeLevel::kMinute:
      return "minute";
    case TimeLevel::kHour:
      return "hour";
    case TimeLevel::kDate:
      return "date";
    case TimeLevel::kWeek:
      return "week";
    case TimeLevel::kMonth:
      return "month";
    case TimeLevel::kYear:
      return "year";
  }
  return "?";
}

TimeLevel TimeLevelFromName(const std::string& name) {
  for (TimeLevel level : TimestampHierarchy()) {
    if (name == TimeLevelName(level)) return level;
  }
  throw ParseError("unknown timestamp level: " + name);
}

// Days-from-civil and the inverse follow the standard proleptic Gregorian
// era arithmetic.
std::int64_t DaysFromCivil(int year, int month, int day) {
  year -= month <= 2;
  const std::int64_t era = (year >= 0 ? year : year - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(year - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(day) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilTime CivilFromDays(std::int64_t days) {
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(days - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  CivilTime c;
  c.year = static_cast<int>(y + (m <= 2));
  c.month = static_cast<int>(m);
  c.day = static_cast<int>(d);
  return c;
}

CivilTime ToCivil(Instant t) {
  const std::int64_t days = FloorDiv(t, kSecondsPerDay);
  const std::int64_t sod = FloorMod(t, kSecondsPerDay);
  CivilTime c = CivilFromDays(days);
  c.hour = static_cast<int>(sod / 3600);
  c.minute = static_cast<int>((sod % 3600) / 60);
  c.second = static_cast<int>(sod % 60);
  return c;
}

Instant FromCivil(const CivilTime& c) {
  return DaysFromCivil(c.year, c.month, c.day) * kSecondsPerDay + c.hour * 3600 + c.minute * 60 +
         c.second;
}

int WeekdayMondayZero(std::int64_t days_since_epoch) {
  // 1970-01-01 was a Thursday.
  return static_cast<int>(FloorMod(days_since_epoch + 3, 7));
}

Instant Truncate(Instant t, TimeLevel level) {
  switch (level) {
    case TimeLevel::kSecond:
      return t;
    case TimeLevel::kMinute:
      return FloorDiv(t, kSecondsPerMinute) * kSecondsPerMinute;
    case TimeLevel::kHour:
      return FloorDiv(t, kSecondsPerHour) * kSecondsPerHour;
    case TimeLevel::kDate:
      return FloorDiv(t, kSecondsPerDay) * kSecondsPerDay;
    case TimeLevel::kWeek: {
      const std::int64_t days = FloorDiv(t, kSecondsPerDay);
      return (days - WeekdayMondayZero(days)) * kSecondsPerDay;
    }
    case TimeLevel::kMonth: {
      CivilTime c = ToCivil(t);
      return DaysFromCivil(c.year, c.month, 1) * kSecondsPerDay;
    }
    case TimeLevel::kYear: {
      CivilTime c = ToCivil(t);
      return DaysFromCivil(c.year, 1, 1) * kSecondsPerDay;
    }
  }
  return t;
}

std::string FormatRfc3339(Instant t) {
  CivilTime c = ToCivil(t);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day, c.hour,
                c.minute, c.second);
  return buf;
}

Instant ParseRfc3339(const std::string& s) {
  CivilTime c;
  char zone = '\0';
  if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d%c", &c.year, &c.month, &c.day, &c.hour, &c.minute,
                  &c.second, &zone) != 7 ||
      zone != 'Z') {
    throw ParseError("not an RFC 3339 UTC timestamp: " + s);
  }
  if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31 || c.hour < 0 || c.hour > 23 ||
      c.minute < 0 || c.minute > 59 || c.second < 0 || c.second > 60) {
    throw ParseError("timestamp field out of range: " + s);
  }
  return FromCivil(c);
}

std::string FormatDate(Instant t) {
  CivilTime c = ToCivil(t);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
  return buf;
}

}  // namespace compins
