#include <gtest/gtest.h>

#include <vector>

#include "lapgraph/counting.hpp"

using namespace lapgraph;

namespace {

// h^{(q)} by plain fixed-point iteration h <- exp(q x h^{q-1}), with the
// exponential summed as sum_j a^j/j! and products done naively. Each pass
// fixes one more coefficient.
std::vector<BigRational> fixed_point_h(int q, int order) {
  auto mul = [order](const std::vector<BigRational>& a, const std::vector<BigRational>& b) {
    std::vector<BigRational> c(static_cast<std::size_t>(order) + 1, BigRational(0));
    for (int i = 0; i <= order; ++i) {
      for (int j = 0; i + j <= order; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  std::vector<BigRational> h(static_cast<std::size_t>(order) + 1, BigRational(0));
  h[0] = 1;
  for (int pass = 0; pass <= order; ++pass) {
    std::vector<BigRational> power(h.size(), BigRational(0));
    power[0] = 1;
    for (int i = 0; i < q - 1; ++i) power = mul(power, h);
    std::vector<BigRational> arg(h.size(), BigRational(0));
    for (int i = 1; i <= order; ++i) arg[i] = BigRational(q) * power[i - 1];
    std::vector<BigRational> term(h.size(), BigRational(0));
    term[0] = 1;
    std::vector<BigRational> next = term;
    for (int j = 1; j <= order; ++j) {
      term = mul(term, arg);
      for (auto& t : term) t /= j;
      for (int i = 0; i <= order; ++i) next[i] += term[i];
    }
    h = next;
  }
  return h;
}

// 2^k (k+1)^{k-1} / k!, k >= 1
BigRational h_closed_q2(int k) {
  return BigRational(ipow(BigInt(2), k) * ipow(BigInt(k + 1), k - 1), factorial(static_cast<unsigned>(k)));
}

}  // namespace

TEST(DSequence, PublishedValues) {
  const auto d = d_sequence(6);
  const std::vector<int> expected = {4, 32, 400, 6912, 153664};
  for (int k = 2; k <= 6; ++k) EXPECT_EQ(d.at(k), expected[k - 2]) << "k=" << k;
  EXPECT_EQ(d.at(1), 1);
}

TEST(DSequence, HandExpansionOfThirdTerm) {
  // d_3 = 2*3*d_2 + C(2,1)*2*2*d_1*d_1
  EXPECT_EQ(d_sequence(3).at(3), 2 * 3 * 4 + 2 * 2 * 2 * 1 * 1);
}

TEST(DSequence, RecurrenceEqualsClosedFormTo200) {
  const auto d = d_sequence(200);
  for (int k = 2; k <= 200; ++k) ASSERT_EQ(d.at(k), BigRational(d_closed(k))) << "k=" << k;
}

TEST(DSequence, ClosedForm) {
  EXPECT_EQ(d_closed(2), 4);
  EXPECT_EQ(d_closed(6), 153664);
  EXPECT_EQ(d_closed(10), BigInt("219503494144"));
  EXPECT_THROW(d_closed(1), ValidationError);
  EXPECT_THROW(d_sequence(1), ValidationError);
}

TEST(HSequence, InitialValues) {
  const auto h = h_sequence(2);
  EXPECT_EQ(h.at(0), 1);
  EXPECT_EQ(h.at(1), 2);
  EXPECT_EQ(h.at(2), 6);
}

TEST(HSequence, MatchesClosedFormTo100) {
  const auto h = h_sequence(100);
  for (int k = 0; k <= 100; ++k) {
    const BigRational expected = k == 0 ? BigRational(1) : h_closed_q2(k);
    ASSERT_EQ(h.at(k), expected) << "k=" << k;
  }
}

TEST(HSequence, PolyaFixedPointOracle) {
  for (int q = 2; q <= 4; ++q) {
    const auto oracle = fixed_point_h(q, 8);
    const auto conv = q_h_sequence(q, 8);
    const auto rec = q == 2 ? h_sequence(8) : q_h_recurrence(q, 8);
    for (int k = 0; k <= 8; ++k) {
      EXPECT_EQ(conv.at(k), oracle[k]) << "q=" << q << " k=" << k;
      EXPECT_EQ(rec.at(k), oracle[k]) << "q=" << q << " k=" << k;
    }
  }
}

TEST(QHSequence, ValenceTwoReproducesH) {
  const auto a = q_h_sequence(2, 30);
  const auto b = h_sequence(30);
  for (int k = 0; k <= 30; ++k) EXPECT_EQ(a.at(k), b.at(k));
  EXPECT_EQ(a.at(2), 6);
}

TEST(QHSequence, ValenceThree) {
  const auto h = q_h_sequence(3, 3);
  EXPECT_EQ(h.at(1), 3);
  EXPECT_EQ(h.at(2), BigRational(45, 2));
  // 2 h_3 + 2 h_1 h_2 = 6^3 4^2 / 3! = 576
  EXPECT_EQ(h.at(3), BigRational(441, 2));
  EXPECT_EQ(2 * h.at(3) + 2 * h.at(1) * h.at(2), 576);
  EXPECT_THROW(q_h_sequence(1, 3), ValidationError);
}

TEST(QDSequence, ValenceTwoMatchesD) {
  const auto a = q_d_sequence(2, 50);
  const auto b = d_sequence(50);
  for (int k = 1; k <= 50; ++k) EXPECT_EQ(a.at(k), b.at(k)) << "k=" << k;
}

TEST(QDSequence, ValenceThree) {
  const auto d = q_d_sequence(3, 3);
  EXPECT_EQ(d.at(1), 1);
  EXPECT_EQ(d.at(2), 9);
  EXPECT_EQ(d.at(3), 189);
}

TEST(QDSequence, ThreeStarRecurrence) {
  const auto rec = q3_d_recurrence(20);
  EXPECT_EQ(rec.at(2), 3 * 3 * 1);
  EXPECT_EQ(rec.at(3), 135 + 54);
  const auto conv = q_d_sequence(3, 20);
  for (int k = 1; k <= 20; ++k) EXPECT_EQ(rec.at(k), conv.at(k)) << "k=" << k;
}

TEST(QDSequence, IntegralForEveryValence) {
  for (int q = 2; q <= 7; ++q) {
    const auto d = q_d_sequence(q, 25);
    for (int k = 1; k <= 25; ++k) EXPECT_TRUE(is_integer(d.at(k)));
  }
}

TEST(Catalan, MomentsAndClosedForm) {
  const auto m = catalan_moments(1, 30);
  EXPECT_EQ(m.at(0), 1);
  EXPECT_EQ(m.at(3), 5);
  const auto closed = catalan_closed(1, 30);
  for (int k = 0; k <= 20; ++k) {
    EXPECT_EQ(m.at(k), closed.at(k));
    EXPECT_EQ(m.at(k), BigRational(binomial(2 * k, k), k + 1));
  }
  const auto mv = catalan_moments(BigRational(3, 2), 15);
  const auto cv = catalan_closed(BigRational(3, 2), 15);
  for (int k = 0; k <= 15; ++k) EXPECT_EQ(mv.at(k), cv.at(k));
  EXPECT_THROW(catalan_moments(0, 3), ValidationError);
}

TEST(Catalan, HBoundedByEightToTheK) {
  const auto r = verify_h_bound(60);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.first_mismatch, -1);
  const auto h = h_sequence(60);
  for (int k = 0; k <= 60; ++k) EXPECT_LE(h.at(k), BigRational(ipow(BigInt(8), k)));
}

TEST(Polya, ValenceTwo) {
  const auto one = verify_polya(2, 1);
  EXPECT_TRUE(one.holds);
  EXPECT_EQ(h_sequence(1).at(1), 2 * h_sequence(1).at(0));
  EXPECT_TRUE(verify_polya(2, 50).holds);
}

TEST(Polya, HigherValence) {
  for (int q = 3; q <= 6; ++q) EXPECT_TRUE(verify_polya(q, 30).holds) << "q=" << q;
}

TEST(Polya, DetectsPerturbation) {
  auto c = h_sequence(10).as_series().coefficients();
  c[4] += 1;
  const auto r = verify_polya(PowerSeries(c), 2);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.first_mismatch, 4);
}

TEST(Ode, Suites) {
  EXPECT_TRUE(verify_ode(2, 40).holds);
  EXPECT_TRUE(verify_ode(3, 25).holds);
  for (int q = 4; q <= 6; ++q) EXPECT_TRUE(verify_ode(q, 30).holds);
}

TEST(Ode, PerturbedSecondCoefficientFailsAtIndexOne) {
  auto c = h_sequence(10).as_series().coefficients();
  c[2] += 1;
  const auto r = verify_ode(PowerSeries(c), 2);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.first_mismatch, 1);
}

TEST(Psi, ClosedForms) {
  const auto psi = psi_sequence(2, 20);
  for (int k = 1; k <= 20; ++k) {
    const BigRational expected = BigRational(ipow(BigInt(2), k - 1)) * rpow(BigRational(k), k - 2) /
                                 BigRational(factorial(static_cast<unsigned>(k - 1)));
    EXPECT_EQ(psi.at(k), expected) << "k=" << k;
  }
  for (int q = 2; q <= 6; ++q) {
    for (const auto& r : verify_psi(q, 30)) EXPECT_TRUE(r.holds) << r.identity << " q=" << q;
  }
}

TEST(Sources, AllAgree) {
  for (int q = 2; q <= 6; ++q) {
    for (const auto& r : source_equivalence(q, 30)) EXPECT_TRUE(r.holds) << r.identity << " q=" << q;
  }
}

TEST(Ode, SourceMatchesRecurrence) {
  const auto a = q_h_from_ode(3, 20);
  const auto b = q_h_recurrence(3, 20);
  for (int k = 0; k <= 20; ++k) EXPECT_EQ(a.at(k), b.at(k));
}

TEST(Published, ValenceTwoAgrees) {
  for (const auto& c : compare_with_published(d_sequence(6))) EXPECT_TRUE(c.agrees()) << c.published.k;
  for (const auto& c : compare_with_published(h_sequence(3))) EXPECT_TRUE(c.agrees());
}

TEST(Published, ValenceThreeDiscrepanciesAreReported) {
  const auto d = compare_with_published(q_d_sequence(3, 3));
  ASSERT_EQ(d.size(), 3u);
  EXPECT_TRUE(d[0].agrees());
  EXPECT_TRUE(d[1].agrees());
  EXPECT_FALSE(d[2].agrees());
  EXPECT_EQ(d[2].published.value, 153);
  EXPECT_EQ(d[2].computed, 189);
  const auto h = compare_with_published(q_h_sequence(3, 3));
  ASSERT_EQ(h.size(), 3u);
  EXPECT_FALSE(h[2].agrees());
  EXPECT_EQ(h[2].computed, BigRational(441, 2));
}
