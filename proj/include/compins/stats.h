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

#ifndef COMPINS_STATS_H_
#define COMPINS_STATS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "compins/rational.h"

namespace compins {

// Linear interpolation between order statistics at rank h = (n-1)*p with
// p = p_num/p_den: v[floor(h)] + frac(h) * (v[floor(h)+1] - v[floor(h)]).
// `sorted` must be ascending and non-empty; 0 <= p <= 1. Exact.
Rational Quantile(std::span<const std::int64_t> sorted, std::int64_t p_num, std::int64_t p_den);
Rational Quantile(std::span<const Rational> sorted, std::int64_t p_num, std::int64_t p_den);

// Convenience wrapper sorting a copy; throws EmptyInput on empty input.
Rational QuantileOf(std::vector<std::int64_t> values, std::int64_t p_num, std::int64_t p_den);

// IQR fence pruning: drops values outside [q1 - 3*IQR, q3 + 3*IQR], never
// more than 10% of the input (farthest-from-fence first when capped).
// Inputs with fewer than 4 values are returned unchanged. Output is sorted.
std::vector<std::int64_t> PruneOutliers(std::vector<std::int64_t> values);

struct Histogram {
  std::vector<std::int64_t> bucket_edges;  // ascending, size = counts.size() + 1
  std::vector<std::int64_t> counts;        // sum == n
};

// Equal-width buckets over [p1, p99] with the width rounded up to a nice
// number (1/2/5 x 10^m); values beyond the edge range are clamped into the
// first/last bucket. Throws EmptyInput.
Histogram BuildHistogram(std::span<const std::int64_t> values, int target_buckets);

struct BoxStats {
  Rational q1;
  Rational median;
  Rational q3;
  Rational lo;  // max(0, q1 - 1.5*(q3-q1))
  Rational hi;  // q3 + 1.5*(q3-q1)
  std::vector<Rational> outliers;  // values outside [lo, hi]
};

// Box-and-whisker statistics over an unsorted multiset. Throws EmptyInput.
BoxStats ComputeBoxStats(std::vector<Rational> values);
BoxStats ComputeBoxStats(const std::vector<std::int64_t>& values);

}  // namespace compins

#endif  // COMPINS_STATS_H_
