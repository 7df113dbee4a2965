#include <gtest/gtest.h>

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "lapgraph/parallel.hpp"
#include "lapgraph/power_series.hpp"
#include "lapgraph/rational.hpp"
#include "lapgraph/set_partition.hpp"

using namespace lapgraph;

namespace {

PowerSeries series(std::vector<BigRational> c) { return PowerSeries(std::move(c)); }

// Bell numbers from the Bell triangle.
std::vector<BigInt> bell_triangle(int n_max) {
  std::vector<BigInt> bell{1};
  std::vector<BigInt> row{1};
  for (int n = 1; n <= n_max; ++n) {
    std::vector<BigInt> next{row.back()};
    for (const auto& v : row) next.push_back(next.back() + v);
    bell.push_back(next.front());
    row = next;
  }
  return bell;
}

// Canonical form of the partition induced by an arbitrary labelling.
std::vector<int> canonical(const std::vector<int>& labels) {
  std::map<int, int> rename;
  std::vector<int> out;
  for (int l : labels) {
    auto it = rename.emplace(l, static_cast<int>(rename.size())).first;
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

TEST(Rational, ReducedAndExact) {
  BigRational r(6, 8);
  EXPECT_EQ(numerator(r), 3);
  EXPECT_EQ(denominator(r), 4);
  EXPECT_EQ(BigRational(1, 3) + BigRational(1, 6), BigRational(1, 2));
  EXPECT_EQ(to_string(BigRational(-4, 6)), "-2/3");
  EXPECT_EQ(to_string(BigRational(5)), "5");
}

TEST(Rational, StringRoundTripIsLossless) {
  const std::vector<BigRational> values = {BigRational(0), BigRational(-7, 3), BigRational(1, 1000000007),
                                           rpow(BigRational(22, 7), 40), BigRational(ipow(BigInt(3), 200), 2)};
  for (const auto& v : values) EXPECT_EQ(parse_rational(to_string(v)), v);
}

TEST(Rational, ParsesDecimalsExactly) {
  EXPECT_EQ(parse_rational("0.3"), BigRational(3, 10));
  EXPECT_EQ(parse_rational("-1.25"), BigRational(-5, 4));
  EXPECT_EQ(parse_rational("12"), BigRational(12));
  EXPECT_EQ(parse_rational("10/4"), BigRational(5, 2));
  EXPECT_THROW(parse_rational("1/0"), ValidationError);
  EXPECT_THROW(parse_rational("abc"), ValidationError);
  EXPECT_THROW(parse_rational(""), ValidationError);
}

TEST(Rational, Binomial) {
  EXPECT_EQ(binomial(4, 2), 6);
  for (int n = 0; n < 10; ++n) EXPECT_EQ(binomial(n, 0), 1);
  EXPECT_THROW(binomial(3, 4), ValidationError);
  EXPECT_THROW(binomial(3, -1), ValidationError);
  // Pascal's rule.
  for (int n = 1; n < 40; ++n) {
    for (int k = 1; k < n; ++k) EXPECT_EQ(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
  }
}

TEST(Rational, DecimalTruncates) {
  EXPECT_EQ(to_decimal(BigRational(1, 3), 5), "0.33333");
  EXPECT_EQ(to_decimal(BigRational(-2, 3), 3), "-0.666");
  EXPECT_EQ(to_decimal(BigRational(7), 2), "7.00");
}

TEST(PowerSeries, MulTrivia) {
  const auto one_plus_z = series({1, 1, 0});
  EXPECT_EQ(series_mul(one_plus_z, one_plus_z), series({1, 2, 1}));
  const auto a = series({3, BigRational(1, 2), -2, 5});
  EXPECT_EQ(series_mul(a, PowerSeries::constant(1, 3)), a);
}

TEST(PowerSeries, MulKeepsSmallerOrder) {
  const auto a = series({1, 1, 1, 1, 1});
  const auto b = series({1, 2});
  const auto c = series_mul(a, b);
  EXPECT_EQ(c.order(), 1);
  EXPECT_EQ(c, series({1, 3}));
}

TEST(PowerSeries, ExpBasics) {
  EXPECT_EQ(series_exp(PowerSeries(4)), PowerSeries::constant(1, 4));
  EXPECT_EQ(series_exp(PowerSeries::identity(4)),
            series({1, 1, BigRational(1, 2), BigRational(1, 6), BigRational(1, 24)}));
  EXPECT_THROW(series_exp(PowerSeries::constant(1, 3)), ValidationError);
}

TEST(PowerSeries, ExpOfSumIsProductOfExps) {
  const auto a = series({0, 2, BigRational(-1, 3), 5, 0, BigRational(7, 2), 1, -4});
  const auto b = series({0, BigRational(1, 5), 3, -1, 2, 0, BigRational(-9, 7), 1});
  EXPECT_EQ(series_exp(a + b), series_mul(series_exp(a), series_exp(b)));
}

TEST(PowerSeries, ExpMatchesPowerSumDefinition) {
  // exp(a) = sum_j a^j / j! is finite when a has no constant term.
  const auto a = series({0, 3, BigRational(1, 2), -1, 2, 1});
  PowerSeries acc = PowerSeries::constant(1, 5);
  PowerSeries power = PowerSeries::constant(1, 5);
  for (int j = 1; j <= 5; ++j) {
    power = series_mul(power, a);
    acc = acc + BigRational(1, factorial(static_cast<unsigned>(j))) * power;
  }
  EXPECT_EQ(series_exp(a), acc);
}

TEST(PowerSeries, PowMatchesRepeatedProduct) {
  const auto a = series({2, -1, BigRational(3, 4), 0, 5, 1});
  PowerSeries p = PowerSeries::constant(1, 5);
  for (unsigned e = 0; e <= 5; ++e) {
    EXPECT_EQ(series_pow(a, e), p) << "exponent " << e;
    p = series_mul(p, a);
  }
}

TEST(PowerSeries, Derivative) {
  EXPECT_EQ(series_derivative(series({1, 2, 3})), series({2, 6}));
  EXPECT_EQ(series_derivative(PowerSeries::constant(5, 3)), PowerSeries(2));
  EXPECT_THROW(series_derivative(PowerSeries(0)), ValidationError);
}

TEST(PowerSeries, OrderIsExplicit) {
  EXPECT_THROW(PowerSeries(-1), ValidationError);
  EXPECT_EQ(PowerSeries::identity(3).shifted(), series({0, 0, 1, 0}));
  EXPECT_EQ(series({1, 2, 3, 4}).truncated(1), series({1, 2}));
  EXPECT_EQ(first_difference(series({1, 2, 3}), series({1, 2, 4})), 2);
  EXPECT_EQ(first_difference(series({1, 2, 3}), series({1, 2})), -1);
}

TEST(SetPartitions, SmallCounts) {
  EXPECT_EQ(set_partitions(1).size(), 1u);
  EXPECT_EQ(set_partitions(3).size(), 5u);
  EXPECT_EQ(set_partitions(6).size(), 203u);
}

TEST(SetPartitions, MatchBellTriangle) {
  const auto bell = bell_triangle(10);
  for (int k = 1; k <= 10; ++k) {
    EXPECT_EQ(BigInt(set_partitions(k).size()), bell[k]) << "k=" << k;
    EXPECT_EQ(bell_number(k), bell[k]);
  }
}

TEST(SetPartitions, MatchBruteForceOverAllLabellings) {
  for (int k = 1; k <= 6; ++k) {
    std::set<std::vector<int>> seen;
    std::vector<int> labels(static_cast<std::size_t>(k), 0);
    while (true) {
      seen.insert(canonical(labels));
      int i = k - 1;
      while (i >= 0 && labels[i] == k - 1) labels[i--] = 0;
      if (i < 0) break;
      ++labels[i];
    }
    std::set<std::vector<int>> produced;
    for (const auto& p : set_partitions(k)) produced.insert(p.growth_string());
    EXPECT_EQ(produced, seen) << "k=" << k;
  }
}

TEST(SetPartitions, InvariantsAndOrder) {
  const auto parts = set_partitions(7);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    const auto blocks = p.blocks();
    ASSERT_EQ(static_cast<int>(blocks.size()), p.block_count());
    std::vector<int> seen(8, 0);
    int prev_min = 0;
    for (const auto& b : blocks) {
      ASSERT_FALSE(b.empty());
      EXPECT_GT(b.front(), prev_min);
      prev_min = b.front();
      for (int e : b) ++seen[e];
    }
    for (int e = 1; e <= 7; ++e) EXPECT_EQ(seen[e], 1);
    if (i > 0) {
      EXPECT_LT(parts[i - 1].growth_string(), p.growth_string());
    }
  }
  EXPECT_EQ(to_string(parts.front()), "{1,2,3,4,5,6,7}");
  EXPECT_EQ(to_string(parts.back()), "{1}{2}{3}{4}{5}{6}{7}");
}

TEST(SetPartitions, BudgetAndValidation) {
  EXPECT_THROW(set_partitions(0), ValidationError);
  try {
    set_partitions(11);
    FAIL() << "expected a budget error";
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.flag(), "--max-k");
  }
  EXPECT_EQ(set_partitions(11, 11).size(), 678570u);
  EXPECT_THROW(SetPartition({1, 0}), ValidationError);
  EXPECT_THROW(SetPartition({0, 2}), ValidationError);
}

TEST(Parallel, ResultsInChunkOrderForAnyThreadCount) {
  for (unsigned threads : {1u, 2u, 5u}) {
    auto r = parallel_chunks<int>(17, threads, [](std::size_t c) { return static_cast<int>(c * c); });
    for (std::size_t c = 0; c < r.size(); ++c) EXPECT_EQ(r[c], static_cast<int>(c * c));
  }
}

TEST(Parallel, RethrowsWorkerErrors) {
  auto boom = [](std::size_t c) -> int {
    if (c == 3) throw std::runtime_error("boom");
    return 0;
  };
  EXPECT_THROW(parallel_chunks<int>(8, 3, boom), std::runtime_error);
  EXPECT_THROW(parallel_chunks<int>(8, 1, boom), std::runtime_error);
}
