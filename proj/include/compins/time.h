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

#ifndef COMPINS_TIME_H_
#define COMPINS_TIME_H_

#include <cstdint>
#include <string>
#include <vector>

namespace compins {

// Instants are UTC seconds since the Unix epoch. Second resolution is the
// finest granularity anywhere in the pipeline.
using Instant = std::int64_t;
using Duration = std::int64_t;  // seconds

inline constexpr Duration kSecondsPerMinute = 60;
inline constexpr Duration kSecondsPerHour = 3600;
inline constexpr Duration kSecondsPerDay = 86400;

struct CivilTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
};

// Generalization levels, finest first. Week truncation uses ISO weeks
// (Monday start).
enum class TimeLevel : int {
  kSecond = 0,
  kMinute = 1,
  kHour = 2,
  kDate = 3,
  kWeek = 4,
  kMonth = 5,
  kYear = 6,
};

// All seven levels ordered finest to coarsest.
const std::vector<TimeLevel>& TimestampHierarchy();

const char* TimeLevelName(TimeLevel level);
TimeLevel TimeLevelFromName(const std::string& name);  // throws ParseError

std::int64_t DaysFromCivil(int year, int month, int day);
CivilTime CivilFromDays(std::int64_t days);

CivilTime ToCivil(Instant t);
Instant FromCivil(const CivilTime& c);

// Weekday with Monday = 0 .. Sunday = 6.
int WeekdayMondayZero(std::int64_t days_since_epoch);

// Truncates t to the start of the period containing it at the given level.
// Idempotent per level.
Instant Truncate(Instant t, TimeLevel level);

// "YYYY-MM-DDTHH:MM:SSZ".
std::string FormatRfc3339(Instant t);
Instant ParseRfc3339(const std::string& s);  // throws ParseError

// "YYYY-MM-DD".
std::string FormatDate(Instant t);

// Virtual clock owned by the pipeline; tests and simulations never wait on
// wall time.
class SimulatedClock {
 public:
  explicit SimulatedClock(Instant start = 0) : now_(start) {}
  Instant Now() const { return now_; }
  void AdvanceTo(Instant t) {
    if (t > now_) now_ = t;
  }

 private:
  Instant now_;
};

}  // namespace compins

#endif  // COMPINS_TIME_H_
