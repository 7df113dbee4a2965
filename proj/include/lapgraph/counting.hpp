#pragma once

#include <string>
#include <vector>

#include "lapgraph/errors.hpp"
#include "lapgraph/power_series.hpp"
#include "lapgraph/rational.hpp"

namespace lapgraph {

enum class SequenceKind { d, h, psi, catalan };
enum class SequenceSource { recurrence, closed_form, ode, convolution };

inline std::string to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::d: return "d";
    case SequenceKind::h: return "h";
    case SequenceKind::psi: return "psi";
    case SequenceKind::catalan: return "catalan";
  }
  return "?";
}

inline std::string to_string(SequenceSource s) {
  switch (s) {
    case SequenceSource::recurrence: return "recurrence";
    case SequenceSource::closed_form: return "closed_form";
    case SequenceSource::ode: return "ode";
    case SequenceSource::convolution: return "convolution";
  }
  return "?";
}

/// A computed counting sequence together with where it came from.
struct CountSequence {
  int valence = 2;
  SequenceKind kind = SequenceKind::d;
  SequenceSource source = SequenceSource::recurrence;
  int first_index = 0;
  std::vector<BigRational> values;

  int last_index() const { return first_index + static_cast<int>(values.size()) - 1; }

  const BigRational& at(int k) const {
    if (k < first_index || k > last_index()) {
      throw ValidationError("index " + std::to_string(k) + " outside computed range of " + to_string(kind));
    }
    return values[static_cast<std::size_t>(k - first_index)];
  }

  /// Coefficients as a power series in x (missing low indices are zero).
  PowerSeries as_series() const {
    std::vector<BigRational> c(static_cast<std::size_t>(last_index()) + 1);
    for (int k = first_index; k <= last_index(); ++k) c[k] = at(k);
    return PowerSeries(std::move(c));
  }
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

/// Coefficients of h^a grown one term at a time (h_0 must be 1), via
/// m*P_m = sum_{j=1}^m ((a+1)j - m) h_j P_{m-j}.
class SeriesPower {
 public:
  explicit SeriesPower(long exponent) : a_(exponent), p_{1} {}

  /// Appends P_m once h_1..h_m are known.
  const BigRational& extend(const std::vector<BigRational>& h) {
    const long m = static_cast<long>(p_.size());
    BigRational acc = 0;
    for (long j = 1; j <= m; ++j) {
      if (h[j] != 0) acc += BigRational((a_ + 1) * j - m) * h[j] * p_[m - j];
    }
    p_.push_back(acc / m);
    return p_.back();
  }

  const BigRational& operator[](long m) const { return p_[m]; }

 private:
  long a_;
  std::vector<BigRational> p_;
};

inline CountSequence make_sequence(int q, SequenceKind kind, SequenceSource source, int first,
                                   std::vector<BigRational> values) {
  CountSequence s;
  s.valence = q;
  s.kind = kind;
  s.source = source;
  s.first_index = first;
  s.values = std::move(values);
  return s;
}

}  // namespace detail

/// d_1..d_{k_max} for two-valent diagrams: d_1 = 1, d_2 = 4 and for k >= 3
/// d_k = 2k d_{k-1} + sum_{j=1}^{k-2} C(k-1,j)(j+1)(k-j) d_j d_{k-1-j}.
inline CountSequence d_sequence(int k_max) {
  detail::require(k_max >= 2, "d_sequence needs k_max >= 2");
  std::vector<BigInt> d(static_cast<std::size_t>(k_max) + 1);
  d[1] = 1;
  d[2] = 4;
  for (int k = 3; k <= k_max; ++k) {
    BigInt acc = BigInt(2 * k) * d[k - 1];
    for (int j = 1; j <= k - 2; ++j) acc += binomial(k - 1, j) * (j + 1) * (k - j) * d[j] * d[k - 1 - j];
    d[k] = acc;
  }
  std::vector<BigRational> values(d.begin() + 1, d.end());
  return detail::make_sequence(2, SequenceKind::d, SequenceSource::recurrence, 1, std::move(values));
}

/// 2^k (k+1)^(k-2), for k >= 2.
inline BigInt d_closed(int k) {
  detail::require(k >= 2, "d_closed needs k >= 2");
  return ipow(BigInt(2), static_cast<unsigned>(k)) * ipow(BigInt(k + 1), static_cast<unsigned>(k - 2));
}

/// q^k ((q-1)k+1)^(k-2) for k >= 1; at q = 2 this is d_closed (and 1 at k = 1).
inline CountSequence q_d_closed_sequence(int q, int k_max) {
  detail::require(q >= 2 && k_max >= 1, "q_d_closed_sequence needs q >= 2, k_max >= 1");
  std::vector<BigRational> v;
  for (int k = 1; k <= k_max; ++k) {
    v.push_back(BigRational(ipow(BigInt(q), static_cast<unsigned>(k))) *
                rpow(BigRational((q - 1) * k + 1), k - 2));
  }
  return detail::make_sequence(q, SequenceKind::d, SequenceSource::closed_form, 1, std::move(v));
}

/// h_0 = 1, h_k = (k+1)/k * sum_{j=0}^{k-1} h_j h_{k-1-j}.
inline CountSequence h_sequence(int k_max) {
  detail::require(k_max >= 0, "h_sequence needs k_max >= 0");
  std::vector<BigRational> h(static_cast<std::size_t>(k_max) + 1);
  h[0] = 1;
  for (int k = 1; k <= k_max; ++k) {
    BigRational acc = 0;
    for (int j = 0; j <= k - 1; ++j) acc += h[j] * h[k - 1 - j];
    h[k] = BigRational(k + 1, k) * acc;
  }
  return detail::make_sequence(2, SequenceKind::h, SequenceSource::recurrence, 0, std::move(h));
}

/// h_k = ((q-1)k+1)/k * [x^{k-1}] h^q: the q-star form of the h recurrence
/// (q = 2 gives h_sequence, q = 3 the cubic-convolution recurrence).
inline CountSequence q_h_recurrence(int q, int k_max) {
  detail::require(q >= 2, "q must be >= 2");
  detail::require(k_max >= 0, "k_max must be >= 0");
  std::vector<BigRational> h{1};
  detail::SeriesPower hq(q);
  for (int k = 1; k <= k_max; ++k) {
    h.push_back(BigRational((q - 1) * k + 1, k) * hq[k - 1]);
    hq.extend(h);
  }
  return detail::make_sequence(q, SequenceKind::h, SequenceSource::recurrence, 0, std::move(h));
}

/// psi_m = (q^2-q)^(m-1) m^(m-2) / (m-1)!, m = 1..k_max: the coefficients of
/// x h^{q-1}(x).
inline CountSequence psi_sequence(int q, int k_max) {
  detail::require(q >= 2, "q must be >= 2");
  detail::require(k_max >= 1, "psi_sequence needs k_max >= 1");
  const BigInt s = BigInt(q) * (q - 1);
  std::vector<BigRational> v;
  for (int m = 1; m <= k_max; ++m) {
    v.push_back(BigRational(ipow(s, static_cast<unsigned>(m - 1))) * rpow(BigRational(m), m - 2) /
                BigRational(factorial(static_cast<unsigned>(m - 1))));
  }
  return detail::make_sequence(q, SequenceKind::psi, SequenceSource::closed_form, 1, std::move(v));
}

/// Solves sum_{j_1+..+j_{q-1}=k} h_{j_1}..h_{j_{q-1}} = psi_{k+1} for h_k.
inline CountSequence q_h_sequence(int q, int k_max) {
  detail::require(q >= 2, "q must be >= 2");
  detail::require(k_max >= 0, "k_max must be >= 0");
  const CountSequence psi = psi_sequence(q, k_max + 1);
  std::vector<BigRational> h{1};
  std::vector<BigRational> conv{1};  // coefficients of h^{q-1}
  for (int k = 1; k <= k_max; ++k) {
    // [x^k] h^{q-1} = (q-1) h_k + (1/k) sum_{j=1}^{k-1} (qj - k) h_j conv_{k-j}
    BigRational rest = 0;
    for (int j = 1; j <= k - 1; ++j) rest += BigRational(q * j - k) * h[j] * conv[k - j];
    rest /= k;
    h.push_back((psi.at(k + 1) - rest) / (q - 1));
    conv.push_back(psi.at(k + 1));
  }
  return detail::make_sequence(q, SequenceKind::h, SequenceSource::convolution, 0, std::move(h));
}

/// h from the differential equation (1 - (q^2-q) x h^{q-1}) h' = q h^q, h(0) = 1,
/// solved coefficient by coefficient.
inline CountSequence q_h_from_ode(int q, int k_max) {
  detail::require(q >= 2, "q must be >= 2");
  detail::require(k_max >= 0, "k_max must be >= 0");
  const BigRational s = BigRational(q) * (q - 1);
  std::vector<BigRational> h{1};
  detail::SeriesPower hq(q);
  detail::SeriesPower hq1(q - 1);
  for (int k = 1; k <= k_max; ++k) {
    // k h_k = q [x^{k-1}] h^q + s [x^{k-2}] (h^{q-1} h')
    BigRational acc = BigRational(q) * hq[k - 1];
    for (int j = 0; j <= k - 2; ++j) acc += s * hq1[j] * BigRational(k - 1 - j) * h[k - 1 - j];
    h.push_back(acc / k);
    hq.extend(h);
    hq1.extend(h);
  }
  return detail::make_sequence(q, SequenceKind::h, SequenceSource::ode, 0, std::move(h));
}

/// h_k = q^k ((q-1)k+1)^(k-1) / k!; for q = 2 this is 2^k (k+1)^(k-1) / k!.
inline CountSequence h_closed_sequence(int q, int k_max) {
  detail::require(q >= 2, "q must be >= 2");
  detail::require(k_max >= 0, "k_max must be >= 0");
  std::vector<BigRational> h;
  for (int k = 0; k <= k_max; ++k) {
    h.push_back(BigRational(ipow(BigInt(q), static_cast<unsigned>(k))) *
                rpow(BigRational((q - 1) * k + 1), k - 1) / BigRational(factorial(static_cast<unsigned>(k))));
  }
  return detail::make_sequence(q, SequenceKind::h, SequenceSource::closed_form, 0, std::move(h));
}

/// d_k^{(q)} = k! h_k^{(q)} / ((q-1)k+1), from the convolution-solved h.
/// Throws ConsistencyError if any value fails to be an integer.
inline CountSequence q_d_sequence(int q, int k_max) {
  detail::require(q >= 2, "q must be >= 2");
  detail::require(k_max >= 1, "q_d_sequence needs k_max >= 1");
  const CountSequence h = q_h_sequence(q, k_max);
  std::vector<BigRational> d;
  for (int k = 1; k <= k_max; ++k) {
    BigRational v = BigRational(factorial(static_cast<unsigned>(k))) * h.at(k) / ((q - 1) * k + 1);
    if (!is_integer(v)) {
      throw ConsistencyError("d^(" + std::to_string(q) + ")_" + std::to_string(k) + " = " + to_string(v) +
                             " is not an integer");
    }
    d.push_back(v);
  }
  return detail::make_sequence(q, SequenceKind::d, SequenceSource::convolution, 1, std::move(d));
}

/// Three-term recurrence for three-star diagrams, d_1 = 1:
///   d_k = 3(2k-1) d_{k-1}
///       + 3 [k>=3] sum_{j1+j2=k-1} (k-1)!/(j1! j2!) (2j1+1)(2j2+1) d_{j1} d_{j2}
///       +   [k>=4] sum_{j1+j2+j3=k-1} (k-1)!/(j1! j2! j3!) prod (2ji+1) d_{ji}
/// with all j_i >= 1.
inline CountSequence q3_d_recurrence(int k_max) {
  detail::require(k_max >= 1, "q3_d_recurrence needs k_max >= 1");
  std::vector<BigInt> d(static_cast<std::size_t>(k_max) + 1);
  std::vector<BigInt> fact(static_cast<std::size_t>(k_max) + 1);
  for (int i = 0; i <= k_max; ++i) fact[i] = factorial(static_cast<unsigned>(i));
  d[1] = 1;
  for (int k = 2; k <= k_max; ++k) {
    BigInt acc = BigInt(3 * (2 * k - 1)) * d[k - 1];
    const int n = k - 1;
    if (k >= 3) {
      BigInt pair = 0;
      for (int j1 = 1; j1 <= n - 1; ++j1) {
        int j2 = n - j1;
        pair += fact[n] / (fact[j1] * fact[j2]) * (2 * j1 + 1) * (2 * j2 + 1) * d[j1] * d[j2];
      }
      acc += 3 * pair;
    }
    if (k >= 4) {
      for (int j1 = 1; j1 <= n - 2; ++j1) {
        for (int j2 = 1; j1 + j2 <= n - 1; ++j2) {
          int j3 = n - j1 - j2;
          acc += fact[n] / (fact[j1] * fact[j2] * fact[j3]) * (2 * j1 + 1) * (2 * j2 + 1) * (2 * j3 + 1) *
                 d[j1] * d[j2] * d[j3];
        }
      }
    }
    d[k] = acc;
  }
  std::vector<BigRational> values(d.begin() + 1, d.end());
  return detail::make_sequence(3, SequenceKind::d, SequenceSource::recurrence, 1, std::move(values));
}

/// Semicircle moments m_0 = 1, m_k = v^2 sum_{j=0}^{k-1} m_j m_{k-1-j}, taking
/// v^2 directly (so v^2 = 2 is expressible).
inline CountSequence catalan_moments_v2(const BigRational& v_squared, int k_max) {
  detail::require(v_squared > 0, "catalan moments need v^2 > 0");
  detail::require(k_max >= 0, "k_max must be >= 0");
  std::vector<BigRational> m{1};
  for (int k = 1; k <= k_max; ++k) {
    BigRational acc = 0;
    for (int j = 0; j <= k - 1; ++j) acc += m[j] * m[k - 1 - j];
    m.push_back(v_squared * acc);
  }
  return detail::make_sequence(2, SequenceKind::catalan, SequenceSource::recurrence, 0, std::move(m));
}

inline CountSequence catalan_moments(const BigRational& v, int k_max) {
  detail::require(v > 0, "catalan_moments needs v > 0");
  return catalan_moments_v2(v * v, k_max);
}

/// v^{2k} C(2k,k)/(k+1).
inline CountSequence catalan_closed(const BigRational& v, int k_max) {
  detail::require(v > 0, "catalan_closed needs v > 0");
  detail::require(k_max >= 0, "k_max must be >= 0");
  std::vector<BigRational> m;
  for (int k = 0; k <= k_max; ++k) m.push_back(rpow(v * v, k) * BigRational(binomial(2 * k, k), k + 1));
  return detail::make_sequence(2, SequenceKind::catalan, SequenceSource::closed_form, 0, std::move(m));
}

/// Outcome of a coefficientwise identity check.
struct IdentityReport {
  std::string identity;
  int q = 2;
  int order = 0;
  bool holds = true;
  int first_mismatch = -1;  // -1 when the identity holds through `order`
};

namespace detail {

inline IdentityReport report(std::string name, int q, int order, int mismatch) {
  return IdentityReport{std::move(name), q, order, mismatch < 0, mismatch};
}

inline int first_mismatch(const CountSequence& a, const CountSequence& b) {
  int lo = std::max(a.first_index, b.first_index);
  int hi = std::min(a.last_index(), b.last_index());
  for (int k = lo; k <= hi; ++k) {
    if (a.at(k) != b.at(k)) return k;
  }
  return -1;
}

}  // namespace detail

/// Checks h = exp(q x h^{q-1}) coefficientwise for the supplied series.
inline IdentityReport verify_polya(const PowerSeries& h, int q) {
  detail::require(q >= 2, "q must be >= 2");
  detail::require(h.order() >= 1, "Polya check needs order >= 1");
  PowerSeries rhs = series_exp(BigRational(q) * series_pow(h, static_cast<unsigned>(q - 1)).shifted());
  return detail::report("polya", q, h.order(), first_difference(rhs, h));
}

/// Polya check for the recurrence-generated h^{(q)} through `order`.
inline IdentityReport verify_polya(int q, int order) {
  detail::require(q >= 2 && order >= 1, "verify_polya needs q >= 2, order >= 1");
  const CountSequence h = q == 2 ? h_sequence(order) : q_h_recurrence(q, order);
  return verify_polya(h.as_series(), q);
}

/// Residual (1 - (q^2-q) x h^{q-1}) h' - q h^q must vanish through order-1.
inline IdentityReport verify_ode(const PowerSeries& h, int q) {
  detail::require(q >= 2, "q must be >= 2");
  detail::require(h.order() >= 2, "ODE check needs order >= 2");
  const int top = h.order() - 1;
  const PowerSeries dh = series_derivative(h);
  const PowerSeries hq1 = series_pow(h.truncated(top), static_cast<unsigned>(q - 1));
  const PowerSeries hq = series_mul(hq1, h.truncated(top));
  const PowerSeries factor = PowerSeries::constant(1, top) - BigRational(q) * (q - 1) * hq1.shifted();
  const PowerSeries residual = series_mul(factor, dh) - BigRational(q) * hq;
  return detail::report("ode", q, top, first_difference(residual, PowerSeries(top)));
}

inline IdentityReport verify_ode(int q, int order) {
  detail::require(q >= 2 && order >= 2, "verify_ode needs q >= 2, order >= 2");
  const CountSequence h = q == 2 ? h_sequence(order) : q_h_recurrence(q, order);
  return verify_ode(h.as_series(), q);
}

/// psi coefficients against x h^{q-1}(x), and psi = x exp((q^2-q) psi).
inline std::vector<IdentityReport> verify_psi(int q, int order) {
  detail::require(q >= 2 && order >= 1, "verify_psi needs q >= 2, order >= 1");
  const CountSequence h = q == 2 ? h_sequence(order) : q_h_recurrence(q, order);
  const PowerSeries psi = psi_sequence(q, order).as_series();
  const PowerSeries product = series_pow(h.as_series(), static_cast<unsigned>(q - 1)).shifted();
  const PowerSeries fixed_point = series_exp(BigRational(q) * (q - 1) * psi).shifted();
  return {detail::report("psi=x*h^(q-1)", q, order, first_difference(psi, product)),
          detail::report("psi=x*exp((q^2-q)psi)", q, order, first_difference(psi, fixed_point))};
}

/// h_k <= m_k(v^2 = 2) <= 8^k for k = 0..k_max (two-valent case).
inline IdentityReport verify_h_bound(int k_max) {
  detail::require(k_max >= 0, "k_max must be >= 0");
  const CountSequence h = h_sequence(k_max);
  const CountSequence m = catalan_moments_v2(BigRational(2), k_max);
  for (int k = 0; k <= k_max; ++k) {
    BigRational eight = BigRational(ipow(BigInt(8), static_cast<unsigned>(k)));
    if (h.at(k) > m.at(k) || m.at(k) > eight) return detail::report("h_k<=8^k", 2, k_max, k);
  }
  return detail::report("h_k<=8^k", 2, k_max, -1);
}

/// Element-wise agreement of every available source for valence q.
inline std::vector<IdentityReport> source_equivalence(int q, int k_max) {
  detail::require(q >= 2 && k_max >= 2, "source_equivalence needs q >= 2, k_max >= 2");
  std::vector<IdentityReport> out;
  const CountSequence h_rec = q == 2 ? h_sequence(k_max) : q_h_recurrence(q, k_max);
  const CountSequence h_conv = q_h_sequence(q, k_max);
  const CountSequence h_ode = q_h_from_ode(q, k_max);
  const CountSequence h_closed = h_closed_sequence(q, k_max);
  out.push_back(detail::report("h:recurrence=convolution", q, k_max, detail::first_mismatch(h_rec, h_conv)));
  out.push_back(detail::report("h:recurrence=ode", q, k_max, detail::first_mismatch(h_rec, h_ode)));
  out.push_back(detail::report("h:recurrence=closed_form", q, k_max, detail::first_mismatch(h_rec, h_closed)));
  const CountSequence d_conv = q_d_sequence(q, k_max);
  const CountSequence d_closed_seq = q_d_closed_sequence(q, k_max);
  out.push_back(
      detail::report("d:convolution=closed_form", q, k_max, detail::first_mismatch(d_conv, d_closed_seq)));
  if (q == 2) {
    out.push_back(detail::report("d:recurrence=convolution", q, k_max,
                                 detail::first_mismatch(d_sequence(k_max), d_conv)));
  }
  if (q == 3) {
    out.push_back(detail::report("d:recurrence=convolution", q, k_max,
                                 detail::first_mismatch(q3_d_recurrence(k_max), d_conv)));
  }
  return out;
}

/// A value as originally published, kept for comparison with computed ones.
struct PublishedValue {
  int q;
  SequenceKind kind;
  int k;
  BigRational value;
};

inline const std::vector<PublishedValue>& published_values() {
  static const std::vector<PublishedValue> table = {
      {2, SequenceKind::h, 0, 1},
      {2, SequenceKind::d, 2, 4},
      {2, SequenceKind::d, 3, 32},
      {2, SequenceKind::d, 4, 400},
      {2, SequenceKind::d, 5, 6912},
      {2, SequenceKind::d, 6, 153664},
      {3, SequenceKind::h, 1, 3},
      {3, SequenceKind::h, 2, BigRational(45, 2)},
      {3, SequenceKind::h, 3, BigRational(1071, 6)},
      {3, SequenceKind::d, 1, 1},
      {3, SequenceKind::d, 2, 9},
      {3, SequenceKind::d, 3, 153},
  };
  return table;
}

struct PublishedComparison {
  PublishedValue published;
  BigRational computed;
  bool agrees() const { return published.value == computed; }
};

/// Every published value inside the sequence's range, paired with the
/// computed one. Disagreements are reported, never corrected.
inline std::vector<PublishedComparison> compare_with_published(const CountSequence& seq) {
  std::vector<PublishedComparison> out;
  for (const auto& pv : published_values()) {
    if (pv.q != seq.valence || pv.kind != seq.kind) continue;
    if (pv.k < seq.first_index || pv.k > seq.last_index()) continue;
    out.push_back({pv, seq.at(pv.k)});
  }
  return out;
}

}  // namespace lapgraph
