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

#include "compins/stats.h"

#include <algorithm>
#include <cstdlib>

#include "compins/errors.h"

namespace compins {

namespace {

void CheckQuantileArgs(std::size_t n, std::int64_t p_num, std::int64_t p_den) {
  if (n == 0) throw EmptyInput("quantile of empty input");
  if (p_den <= 0 || p_num < 0 || p_num > p_den) {
    throw Error("quantile fraction out of [0,1]");
  }
}

}  // namespace

Rational Quantile(std::span<const std::int64_t> sorted, std::int64_t p_num, std::int64_t p_den) {
  CheckQuantileArgs(sorted.size(), p_num, p_den);
  const std::int64_t n = static_cast<std::int64_t>(sorted.size());
  const std::int64_t h_num = (n - 1) * p_num;  // h = h_num / p_den
  const std::int64_t i = h_num / p_den;
  const std::int64_t rem = h_num % p_den;
  if (rem == 0) return Rational(sorted[static_cast<std::size_t>(i)]);
  const Rational lower(sorted[static_cast<std::size_t>(i)]);
  const Rational upper(sorted[static_cast<std::size_t>(i) + 1]);
  return lower + Rational::Of(rem, p_den) * (upper - lower);
}

Rational Quantile(std::span<const Rational> sorted, std::int64_t p_num, std::int64_t p_den) {
  CheckQuantileArgs(sorted.size(), p_num, p_den);
  const std::int64_t n = static_cast<std::int64_t>(sorted.size());
  const std::int64_t h_num = (n - 1) * p_num;
  const std::int64_t i = h_num / p_den;
  const std::int64_t rem = h_num % p_den;
  if (rem == 0) return sorted[static_cast<std::size_t>(i)];
  const Rational& lower = sorted[static_cast<std::size_t>(i)];
  const Rational& upper = sorted[static_cast<std::size_t>(i) + 1];
  return lower + Rational::Of(rem, p_den) * (upper - lower);
}

Rational QuantileOf(std::vector<std::int64_t> values, std::int64_t p_num, std::int64_t p_den) {
  std::sort(values.begin(), values.end());
  return Quantile(values, p_num, p_den);
}

std::vector<std::int64_t> PruneOutliers(std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n < 4) return values;

  const Rational q1 = Quantile(values, 25, 100);
  const Rational q3 = Quantile(values, 75, 100);
  const Rational iqr = q3 - q1;
  const Rational lo = q1 - Rational(3) * iqr;
  const Rational hi = q3 + Rational(3) * iqr;

  // On the sorted list the values outside the fences form a prefix and a
  // suffix.
  std::size_t first = 0;
  while (first < n && Rational(values[first]) < lo) ++first;
  std::size_t last = n;  // one past the last kept value
  while (last > first && Rational(values[last - 1]) > hi) --last;

  std::size_t budget = n / 10;  // never remove more than 10%
  std::size_t outside = first + (n - last);
  while (outside > budget) {
    // Over budget: keep the values nearest their fence, so re-admit the
    // nearest dropped value until within budget.
    const bool have_low = first > 0;
    const bool have_high = last < n;
    if (have_low && (!have_high || lo - Rational(values[first - 1]) <=
                                       Rational(values[last]) - hi)) {
      --first;
    } else {
      ++last;
    }
    --outside;
  }

  return std::vector<std::int64_t>(values.begin() + static_cast<std::ptrdiff_t>(first),
                                   values.begin() + static_cast<std::ptrdiff_t>(last));
}

namespace {

// Smallest 1/2/5 x 10^m >= width.
std::int64_t NiceWidthAtLeast(std::int64_t width) {
  if (width <= 1) return 1;
  std::int64_t mag = 1;
  while (mag <= width / 10) mag *= 10;
  for (std::int64_t mult : {1, 2, 5, 10}) {
    if (mag * mult >= width) return mag * mult;
  }
  return mag * 10;
}

std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Histogram BuildHistogram(std::span<const std::int64_t> values, int target_buckets) {
  if (values.empty()) throw EmptyInput("histogram of empty input");
  if (target_buckets < 1) throw Error("target_buckets must be >= 1");

  std::vector<std::int64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const Rational p1_q = Quantile(sorted, 1, 100);
  const Rational p99_q = Quantile(sorted, 99, 100);
  const std::int64_t p1 = FloorDiv(p1_q.num(), p1_q.den());
  const std::int64_t p99 =
      FloorDiv(p99_q.num(), p99_q.den()) + (p99_q.num() % p99_q.den() != 0 ? 1 : 0);

  const std::int64_t span = p99 - p1;
  const std::int64_t raw_width = span <= 0 ? 1 : (span + target_buckets - 1) / target_buckets;
  const std::int64_t width = NiceWidthAtLeast(raw_width);

  const std::int64_t start = FloorDiv(p1, width) * width;
  std::size_t bucket_count = 1;
  if (span > 0) {
    bucket_count = static_cast<std::size_t>((p99 - start + width - 1) / width);
    if (bucket_count == 0) bucket_count = 1;
  }

  Histogram hist;
  hist.bucket_edges.reserve(bucket_count + 1);
  for (std::size_t i = 0; i <= bucket_count; ++i) {
    hist.bucket_edges.push_back(start + static_cast<std::int64_t>(i) * width);
  }
  hist.counts.assign(bucket_count, 0);
  for (std::int64_t v : sorted) {
    std::int64_t idx = FloorDiv(v - start, width);
    if (idx < 0) idx = 0;  // clamped tails
    if (idx >= static_cast<std::int64_t>(bucket_count)) {
      idx = static_cast<std::int64_t>(bucket_count) - 1;
    }
    ++hist.counts[static_cast<std::size_t>(idx)];
  }
  return hist;
}

BoxStats ComputeBoxStats(std::vector<Rational> values) {
  if (values.empty()) throw EmptyInput("box stats of empty input");
  std::sort(values.begin(), values.end());
  BoxStats stats;
  stats.q1 = Quantile(std::span<const Rational>(values), 25, 100);
  stats.median = Quantile(std::span<const Rational>(values), 50, 100);
  stats.q3 = Quantile(std::span<const Rational>(values), 75, 100);
  const Rational iqr = stats.q3 - stats.q1;
  const Rational step = Rational::Of(3, 2) * iqr;
  stats.lo = Max(Rational(0), stats.q1 - step);
  stats.hi = stats.q3 + step;
  for (const Rational& v : values) {
    if (v < stats.lo || v > stats.hi) stats.outliers.push_back(v);
  }
  return stats;
}

BoxStats ComputeBoxStats(const std::vector<std::int64_t>& values) {
  std::vector<Rational> rationals;
  rationals.reserve(values.size());
  for (std::int64_t v : values) rationals.emplace_back(v);
  return ComputeBoxStats(std::move(rationals));
}

}  // namespace compins
