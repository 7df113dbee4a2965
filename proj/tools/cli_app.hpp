#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lapgraph/lapgraph.hpp"

namespace lapgraph::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kValidation = 2, kBudget = 3, kConsistency = 4 };

inline constexpr const char* kSeedEnv = "LAPGRAPH_SEED";
inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// What a subcommand hands back: the JSON body plus optional CSV rows and
/// a non-zero exit code for reports that carry a failed check.
struct Report {
  Json params = Json::object();
  Json results = Json::object();
  std::string csv;  // empty when the command has no CSV form
  int exit_code = kOk;
};

inline std::string real(long double v, int digits = 15) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lg", digits, v);
  return buf;
}

inline Json rational_list(const std::vector<BigRational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

inline Json integer_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return Json(v.convert_to<std::int64_t>());
  }
  return Json(v.str());
}

inline Json report_json(const IdentityReport& r) {
  return Json{{"identity", r.identity},
              {"q", r.q},
              {"order", r.order},
              {"holds", r.holds},
              {"first_mismatch", r.first_mismatch < 0 ? Json(nullptr) : Json(r.first_mismatch)}};
}

inline Json published_json(const std::vector<PublishedComparison>& cmp) {
  Json out = Json::array();
  for (const auto& c : cmp) {
    out.push_back({{"kind", to_string(c.published.kind)},
                   {"k", c.published.k},
                   {"published", to_string(c.published.value)},
                   {"computed", to_string(c.computed)},
                   {"agrees", c.agrees()}});
  }
  return out;
}

inline Json polynomial_json(const WeightPolynomial& w) {
  Json coeffs = Json::object();
  for (const auto& [e, c] : w.coeffs) coeffs[std::to_string(e)] = integer_json(c);
  return Json{{"k", w.k}, {"coeffs", coeffs}, {"text", to_string(w)}};
}

/// Flattens a JSON value into "path = value" lines.
inline void flatten(const Json& j, const std::string& path, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [key, v] : j.items()) flatten(v, path.empty() ? key : path + "." + key, os);
  } else if (j.is_array()) {
    bool scalar = true;
    for (const auto& v : j) scalar = scalar && !v.is_structured();
    if (scalar) {
      os << path << " =";
      for (const auto& v : j) os << ' ' << (v.is_string() ? v.get<std::string>() : v.dump());
      os << '\n';
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", os);
    }
  } else {
    os << path << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

struct Options {
  std::string format = "json";
  unsigned threads = 1;
  std::uint64_t seed = kDefaultSeed;
  std::string seed_source = "default";
  std::optional<int> max_n;
  std::optional<int> max_k;
  std::optional<int> max_slots;
  std::optional<int> max_order;

  int histogram_n() const { return max_n.value_or(Budgets{}.max_histogram_n); }
  int partition_k() const { return max_k.value_or(Budgets{}.max_partition_k); }
  int weight_k() const { return max_k.value_or(Budgets{}.max_weight_k); }
  int slots() const { return max_slots.value_or(Budgets{}.max_diagram_slots); }
  int order() const { return max_order.value_or(Budgets{}.max_order); }

  Json budgets() const {
    return Json{{"max_n", histogram_n()},
                {"max_k", max_k ? Json(*max_k) : Json("default")},
                {"max_slots", slots()},
                {"max_order", order()}};
  }
};

inline void check_order(int value, const Options& o, const char* what) {
  if (value > o.order()) {
    throw BudgetError(std::string(what) + "=" + std::to_string(value) + " exceeds the order budget " +
                          std::to_string(o.order()),
                      "--max-order");
  }
}

// ---- count ----------------------------------------------------------------

struct CountArgs {
  int q = 2;
  int kmax = 6;
};

inline Report run_count(const CountArgs& a, const Options& o) {
  if (a.q < 2) throw ValidationError("--q must be >= 2");
  if (a.kmax < 2) throw ValidationError("--kmax must be >= 2");
  check_order(a.kmax, o, "--kmax");
  Report r;
  r.params = {{"q", a.q}, {"kmax", a.kmax}};
  const CountSequence d = q_d_sequence(a.q, a.kmax);
  const CountSequence h = a.q == 2 ? h_sequence(a.kmax) : q_h_recurrence(a.q, a.kmax);
  r.results["d"] = {{"first_index", d.first_index}, {"values", rational_list(d.values)}};
  r.results["h"] = {{"first_index", h.first_index}, {"values", rational_list(h.values)}};
  Json checks = Json::array();
  bool all = true;
  for (const auto& rep : source_equivalence(a.q, a.kmax)) {
    all = all && rep.holds;
    checks.push_back(report_json(rep));
  }
  r.results["source_checks"] = checks;
  r.results["sources_agree"] = all;
  auto cmp = compare_with_published(d);
  const auto cmp_h = compare_with_published(h);
  cmp.insert(cmp.end(), cmp_h.begin(), cmp_h.end());
  int disagreements = 0;
  for (const auto& c : cmp) disagreements += c.agrees() ? 0 : 1;
  r.results["published"] = published_json(cmp);
  r.results["published_discrepancies"] = disagreements;
  std::ostringstream csv;
  csv << "k,d,h\n";
  for (int k = 0; k <= a.kmax; ++k) {
    csv << k << ',' << (k >= d.first_index ? to_string(d.at(k)) : "") << ',' << to_string(h.at(k)) << '\n';
  }
  r.csv = csv.str();
  if (!all) r.exit_code = kConsistency;
  return r;
}

// ---- diagrams -------------------------------------------------------------

struct DiagramArgs {
  int q = 2;
  std::optional<int> k;
  std::optional<int> kmax;
  bool emit = false;
};

inline Report run_diagrams(const DiagramArgs& a, const Options& o) {
  if (a.k.has_value() == a.kmax.has_value()) throw ValidationError("give exactly one of --k and --kmax");
  if (a.q < 2) throw ValidationError("--q must be >= 2");
  const int lo = a.k ? *a.k : 1;
  const int hi = a.k ? *a.k : *a.kmax;
  if (lo < 1) throw ValidationError("k must be >= 1");
  Report r;
  r.params = {{"q", a.q}};
  if (a.k) r.params["k"] = *a.k;
  else r.params["kmax"] = *a.kmax;
  r.params["emit"] = a.emit;
  const CountSequence d = q_d_sequence(a.q, hi);
  const CountSequence closed = q_d_closed_sequence(a.q, hi);
  const auto published = compare_with_published(d);
  Json rows = Json::array();
  bool all = true;
  std::ostringstream csv;
  csv << "k,enumerated,recurrence,closed_form,published\n";
  for (int k = lo; k <= hi; ++k) {
    Json row;
    row["k"] = k;
    std::vector<std::string> texts;
    std::uint64_t count = 0;
    if (a.emit) {
      for_each_diagram(k, a.q, [&](const Diagram& dg) {
        texts.push_back(to_string(dg));
        ++count;
      }, o.slots());
    } else {
      count = count_diagrams(k, a.q, o.slots());
    }
    const BigInt rec = numerator(d.at(k));
    const BigInt cf = numerator(closed.at(k));
    const bool agree = BigInt(count) == rec && rec == cf;
    all = all && agree;
    row["enumerated"] = count;
    row["recurrence"] = integer_json(rec);
    row["closed_form"] = integer_json(cf);
    row["agree"] = agree;
    row["orientation_multiplicity"] = integer_json(ipow(BigInt(2), static_cast<unsigned>(k - 1)));
    std::string pub;
    for (const auto& c : published) {
      if (c.published.k != k) continue;
      pub = to_string(c.published.value);
      row["published"] = pub;
      row["published_agrees"] = c.agrees();
      if (!c.agrees()) {
        row["discrepancy"] = "published value " + pub + " differs from the enumerated and recurrence value " +
                             std::to_string(count);
      }
    }
    if (a.emit) row["diagrams"] = texts;
    csv << k << ',' << count << ',' << rec.str() << ',' << cf.str() << ',' << pub << '\n';
    rows.push_back(row);
  }
  r.results["counts"] = rows;
  r.results["sources_agree"] = all;
  r.csv = csv.str();
  if (!all) r.exit_code = kConsistency;
  return r;
}

// ---- weights --------------------------------------------------------------

struct WeightArgs {
  int k = 2;
  std::vector<std::string> p;
  bool partitions = false;
};

inline Report run_weights(const WeightArgs& a, const Options& o) {
  Report r;
  r.params = {{"k", a.k}, {"p", a.p}, {"partitions", a.partitions}};
  const WeightPolynomial c = cumulant_coefficient(a.k, o.weight_k(), o.threads);
  r.results["coefficient"] = polynomial_json(c);
  r.results["diagrams"] = count_diagrams(a.k, 2, std::max(o.slots(), 2 * a.k));
  const BigInt sparse = sparse_coefficient(a.k);
  const BigInt lowest = c.coefficient(a.k + 1);
  const bool support_ok = c.lowest_exponent() >= a.k + 1 && c.highest_exponent() <= 2 * a.k;
  r.results["lowest_order"] = {{"exponent", a.k + 1},
                               {"coefficient", integer_json(lowest)},
                               {"sparse_coefficient", integer_json(sparse)},
                               {"agrees", lowest == sparse}};
  r.results["support_within_k+1..2k"] = support_ok;
  Json evals = Json::array();
  for (const auto& text : a.p) {
    const BigRational p = parse_rational(text);
    if (p < 0 || p > 1) throw ValidationError("--p values must lie in [0, 1]");
    const BigRational v = c.evaluate(p);
    evals.push_back({{"p", to_string(p)}, {"exact", to_string(v)}, {"decimal", to_decimal(v, 15)}});
  }
  r.results["evaluations"] = evals;
  if (a.partitions) {
    Json rows = Json::array();
    for (const auto& pw : partition_weights(a.k, o.weight_k(), o.threads)) {
      rows.push_back({{"block_sizes", pw.block_sizes}, {"partitions", pw.partitions},
                      {"weight", polynomial_json(pw.weight)}});
    }
    r.results["partition_weights"] = rows;
  }
  if (lowest != sparse || !support_ok) r.exit_code = kConsistency;
  return r;
}

// ---- exact ----------------------------------------------------------------

struct ExactArgs {
  std::optional<int> n;
  std::optional<std::string> p;
  int kmax = 2;
  std::optional<std::string> cache;
  std::optional<double> beta;
  std::optional<double> g;
  std::vector<int> extrapolate;
  int k = 2;
};

inline GraphHistogram load_or_build(int n, const std::optional<std::string>& cache, const Options& o,
                                    std::ostream& err) {
  if (cache) {
    std::ifstream in(*cache);
    if (in) {
      GraphHistogram h = read_histogram(in);
      if (h.n != n) throw ValidationError("cache file holds n=" + std::to_string(h.n) + ", not " + std::to_string(n));
      err << "loaded histogram from " << *cache << '\n';
      return h;
    }
  }
  GraphHistogram h = graph_histogram(n, o.histogram_n(), o.threads);
  if (cache) {
    std::ofstream out(*cache);
    if (!out) throw ValidationError("cannot write cache file " + *cache);
    write_histogram(out, h);
    err << "wrote histogram to " << *cache << '\n';
  }
  return h;
}

inline Report run_exact(const ExactArgs& a, const Options& o, std::ostream& err) {
  if (!a.n && a.extrapolate.empty()) throw ValidationError("give --n, --extrapolate, or both");
  if (a.beta.has_value() != a.g.has_value()) throw ValidationError("--beta and --g go together");
  if (a.beta && !a.n) throw ValidationError("the partition function needs --n");
  Report r;
  if (a.n) r.params["n"] = *a.n;
  if (a.p) r.params["p"] = *a.p;
  r.params["kmax"] = a.kmax;
  if (a.beta) {
    r.params["beta"] = *a.beta;
    r.params["g"] = *a.g;
  }
  if (!a.extrapolate.empty()) {
    r.params["extrapolate"] = a.extrapolate;
    r.params["k"] = a.k;
  }
  std::optional<BigRational> p;
  if (a.p) {
    p = parse_rational(*a.p);
    if (*p < 0 || *p > 1) throw ValidationError("--p must lie in [0, 1]");
  }
  HistogramCache cache(o.histogram_n(), o.threads);
  if (a.n) {
    GraphHistogram h = load_or_build(*a.n, a.cache, o, err);
    r.results["histogram"] = {{"n", h.n}, {"M", h.pair_count}, {"total", h.total().str()},
                              {"distinct_pairs", h.counts.size()}};
    if (p) {
      const CumulantTable t = exact_cumulants(h, *p, a.kmax, o.partition_k());
      r.results["moments"] = rational_list(t.moments);
      r.results["cumulants"] = rational_list(t.cumulants);
    }
    if (a.beta) {
      const auto pf = partition_function(h, *a.beta, *a.g);
      r.results["partition_function"] = {{"beta_prime", real(pf.beta_prime)},
                                         {"log_Z", real(pf.log_z)},
                                         {"Z", real(pf.z)},
                                         {"Z_hat", real(pf.z_hat)},
                                         {"prefactor", real(pf.prefactor)},
                                         {"expectation", real(pf.expectation)},
                                         {"relative_gap", real(pf.relative_gap, 3)},
                                         {"precision", "15 significant digits, long double log-space"}};
      if (pf.relative_gap > 1e-12L) r.exit_code = kConsistency;
    }
    cache.insert(std::move(h));
  }
  if (!a.extrapolate.empty()) {
    if (!p) throw ValidationError("--extrapolate needs --p");
    const Extrapolation e = coefficient_extrapolate(a.k, *p, a.extrapolate, cache);
    Json ex{{"k", e.k},
            {"p", to_string(e.p)},
            {"n", e.n_values},
            {"ratios", rational_list(e.ratios)},
            {"richardson", rational_list(e.richardson)},
            {"estimate", real(e.estimate, 12)},
            {"residual", real(e.residual, 6)},
            {"monotone", e.monotone}};
    if (a.k <= o.weight_k()) {
      const BigRational predicted = cumulant_coefficient(a.k, o.weight_k(), o.threads).evaluate(*p);
      ex["predicted"] = to_string(predicted);
      ex["predicted_decimal"] = to_decimal(predicted, 12);
      if (predicted != 0) {
        ex["relative_deviation"] = real(std::fabs(e.estimate / to_double(predicted) - 1), 6);
        ex["relative_residual"] = real(e.residual / std::fabs(to_double(predicted)), 6);
      }
    }
    r.results["extrapolation"] = ex;
  }
  return r;
}

// ---- mc -------------------------------------------------------------------

struct McArgs {
  std::vector<std::int64_t> n;
  std::vector<double> cbar;
  int kmax = 2;
  int replicates = 200;
};

inline Report run_mc(const McArgs& a, const Options& o) {
  Report r;
  r.params = {{"n", a.n}, {"cbar", Json::array()}, {"kmax", a.kmax}, {"replicates", a.replicates}};
  for (double c : a.cbar) r.params["cbar"].push_back(format_real(c));
  const ConvergenceTable t = convergence_table(a.kmax, a.n, a.cbar, a.replicates, o.seed, o.threads);
  Json rows = Json::array();
  std::ostringstream csv;
  write_csv_header(csv);
  int errors = 0;
  for (const auto& cell : t.cells) {
    if (!cell.error.empty()) {
      ++errors;
      rows.push_back({{"n", cell.n}, {"cbar", format_real(cell.cbar)}, {"error", cell.error}});
      continue;
    }
    for (const auto& e : cell.estimates) {
      rows.push_back({{"n", e.n},
                      {"cbar", format_real(e.cbar)},
                      {"k", e.k},
                      {"R", e.replicates},
                      {"estimate", format_real(e.estimate)},
                      {"std_error", format_real(e.std_error)},
                      {"normalized", format_real(e.normalized)},
                      {"target", format_real(e.target)},
                      {"seed", e.seed}});
      write_csv_row(csv, e);
    }
  }
  r.results["rows"] = rows;
  Json trends = Json::array();
  for (const auto& tr : t.trends) {
    Json mono = Json::array();
    for (const auto& [c, m] : tr.monotone_in_n) mono.push_back({{"cbar", format_real(c)}, {"monotone", m}});
    Json slopes = Json::array();
    for (const auto& [n, s] : tr.cbar_slopes) {
      slopes.push_back({{"n", n}, {"slope", format_real(s)}, {"expected", tr.k + 1}});
    }
    trends.push_back({{"k", tr.k}, {"target", format_real(tr.target)}, {"monotone_in_n", mono},
                      {"cbar_slopes", slopes}});
  }
  r.results["trends"] = trends;
  r.csv = csv.str();
  if (errors == static_cast<int>(t.cells.size())) {
    throw ValidationError(t.cells.size() == 1 ? t.cells.front().error : "every cell of the grid is invalid");
  }
  return r;
}

// ---- free-energy ----------------------------------------------------------

struct FreeEnergyArgs {
  int order = 12;
  std::optional<double> g;
};

inline Report run_free_energy(const FreeEnergyArgs& a, const Options& o) {
  Report r;
  r.params = {{"order", a.order}};
  if (a.g) r.params["g"] = format_real(*a.g);
  const PowerSeries D = free_energy_series(a.order, o.order());
  std::vector<BigRational> coeffs(D.coefficients().begin() + 1, D.coefficients().end());
  r.results["coefficients"] = {{"first_index", 1}, {"values", rational_list(coeffs)}};
  if (a.g) {
    const FreeEnergy f = free_energy_sparse(*a.g, a.order, o.order());
    r.results["evaluation"] = {{"g", format_real(f.g)},
                               {"tau", format_real(f.tau)},
                               {"value", real(f.value)},
                               {"partial_sum", real(f.partial_sum)},
                               {"last_term", real(f.last_term, 6)},
                               {"last_ratio", real(f.last_ratio, 6)},
                               {"ratio_limit", real(f.ratio_limit, 6)},
                               {"residual", real(f.residual, 6)},
                               {"precision", "15 significant digits, double"}};
  }
  return r;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  int order = 50;
  int order_q = 30;
  int qmax = 6;
  int bound_k = 60;
  int d_kmax = 200;
};

inline Report run_verify(const VerifyArgs& a, const Options& o) {
  if (a.qmax < 2) throw ValidationError("--qmax must be >= 2");
  if (a.order < 2 || a.order_q < 2) throw ValidationError("orders must be >= 2");
  check_order(std::max({a.order, a.order_q, a.bound_k, a.d_kmax}), o, "order");
  Report r;
  r.params = {{"order", a.order}, {"order_q", a.order_q}, {"qmax", a.qmax}, {"bound_k", a.bound_k},
              {"d_kmax", a.d_kmax}};
  std::vector<IdentityReport> reps;
  for (int q = 2; q <= a.qmax; ++q) {
    const int order = q == 2 ? a.order : a.order_q;
    reps.push_back(verify_polya(q, order));
    reps.push_back(verify_ode(q, order));
    for (auto& rep : verify_psi(q, order)) reps.push_back(rep);
    for (auto& rep : source_equivalence(q, order)) reps.push_back(rep);
  }
  reps.push_back(verify_h_bound(a.bound_k));
  {
    const CountSequence d = d_sequence(a.d_kmax);
    int mismatch = -1;
    for (int k = 2; k <= a.d_kmax && mismatch < 0; ++k) {
      if (d.at(k) != BigRational(d_closed(k))) mismatch = k;
    }
    reps.push_back({"d:recurrence=2^k(k+1)^(k-2)", 2, a.d_kmax, mismatch < 0, mismatch});
  }
  Json checks = Json::array();
  bool all = true;
  for (const auto& rep : reps) {
    all = all && rep.holds;
    checks.push_back(report_json(rep));
  }
  r.results["checks"] = checks;
  r.results["all_hold"] = all;
  if (!all) r.exit_code = kConsistency;
  return r;
}

// ---- driver ---------------------------------------------------------------

inline void emit(const std::string& command, const Report& rep, const Options& o, std::ostream& out) {
  if (o.format == "csv") {
    if (rep.csv.empty()) throw ValidationError("csv output is not available for " + command);
    out << rep.csv;
    return;
  }
  Json doc;
  doc["command"] = command;
  doc["params"] = rep.params;
  doc["results"] = rep.results;
  doc["provenance"] = {{"tool", "lapgraph"},
                       {"version", kVersion},
                       {"seed", o.seed},
                       {"seed_source", o.seed_source},
                       {"budgets", o.budgets()}};
  if (o.format == "text") {
    flatten(doc, "", out);
  } else {
    out << doc.dump(2) << '\n';
  }
}

/// Runs one command line (without the program name). `env_seed` is the
/// value of LAPGRAPH_SEED, if set; --seed overrides it.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::optional<std::string> env_seed = std::nullopt) {
  CLI::App app{"Exact and Monte Carlo tools for the graph-Laplacian matrix model", "lapgraph"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--threads", o.threads, "Worker thread cap")->check(CLI::Range(1U, 1024U));
  auto* seed_opt = app.add_option("--seed", o.seed, "Random seed (overrides " + std::string(kSeedEnv) + ")");
  app.add_option("--max-n", o.max_n, "Graph enumeration budget (default 7)");
  app.add_option("--max-k", o.max_k, "Partition budget for exact (default 10), weight budget (default 6)");
  app.add_option("--max-slots", o.max_slots, "Diagram off-spread budget q*k (default 12)");
  app.add_option("--max-order", o.max_order, "Series order budget (default 400)");

  std::function<Report()> action;
  std::string command;

  CountArgs count_args;
  auto* count = app.add_subcommand("count", "Diagram-count sequences d_k, h_k and their cross-checks");
  count->add_option("--q", count_args.q, "Valence");
  count->add_option("--kmax", count_args.kmax, "Largest k")->required();
  count->callback([&] { command = "count"; action = [&] { return run_count(count_args, o); }; });

  DiagramArgs diag_args;
  auto* diagrams = app.add_subcommand("diagrams", "Brute-force diagram enumeration");
  diagrams->add_option("--q", diag_args.q, "Valence");
  diagrams->add_option("--k", diag_args.k, "Number of star vertices");
  diagrams->add_option("--kmax", diag_args.kmax, "Enumerate k = 1..kmax");
  diagrams->add_flag("--emit", diag_args.emit, "List canonical diagram texts");
  diagrams->callback([&] { command = "diagrams"; action = [&] { return run_diagrams(diag_args, o); }; });

  WeightArgs weight_args;
  auto* weights = app.add_subcommand("weights", "Cumulant coefficient polynomials C_k(p)");
  weights->add_option("--k", weight_args.k, "Cumulant order")->required();
  weights->add_option("--p", weight_args.p, "Evaluation points (rationals or decimals)")->delimiter(',');
  weights->add_flag("--partitions", weight_args.partitions, "Report per-partition-shape weights");
  weights->callback([&] { command = "weights"; action = [&] { return run_weights(weight_args, o); }; });

  ExactArgs exact_args;
  auto* exact = app.add_subcommand("exact", "Exact cumulants and partition functions by enumeration");
  exact->add_option("--n", exact_args.n, "Number of vertices");
  exact->add_option("--p", exact_args.p, "Edge probability (rational)");
  exact->add_option("--kmax", exact_args.kmax, "Highest cumulant order")->check(CLI::PositiveNumber);
  exact->add_option("--cache", exact_args.cache, "Histogram cache file (read if present, else written)");
  exact->add_option("--beta", exact_args.beta, "Inverse temperature");
  exact->add_option("--g", exact_args.g, "Quartic coupling");
  exact->add_option("--extrapolate", exact_args.extrapolate, "n values for extrapolation")->delimiter(',');
  exact->add_option("--k", exact_args.k, "Cumulant order to extrapolate");
  exact->callback([&] { command = "exact"; action = [&] { return run_exact(exact_args, o, err); }; });

  McArgs mc_args;
  auto* mc = app.add_subcommand("mc", "Monte Carlo cumulants in the sparse regime");
  mc->add_option("--n", mc_args.n, "Vertex counts")->required()->delimiter(',');
  mc->add_option("--cbar", mc_args.cbar, "Sparse parameters, p = cbar/n")->required()->delimiter(',');
  mc->add_option("--kmax", mc_args.kmax, "Highest cumulant order (<= 4)");
  mc->add_option("--replicates", mc_args.replicates, "Replicates per cell");
  mc->callback([&] { command = "mc"; action = [&] { return run_mc(mc_args, o); }; });

  FreeEnergyArgs fe_args;
  auto* fe = app.add_subcommand("free-energy", "Free-energy series D(tau) and its guarded evaluation");
  fe->add_option("--order", fe_args.order, "Truncation order");
  fe->add_option("--g", fe_args.g, "Coupling g");
  fe->callback([&] { command = "free-energy"; action = [&] { return run_free_energy(fe_args, o); }; });

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run every generating-function identity suite");
  verify->add_option("--order", verify_args.order, "Order for q = 2");
  verify->add_option("--order-q", verify_args.order_q, "Order for q >= 3");
  verify->add_option("--qmax", verify_args.qmax, "Largest valence");
  verify->add_option("--bound-k", verify_args.bound_k, "Range of the h_k <= 8^k check");
  verify->add_option("--d-kmax", verify_args.d_kmax, "Range of the d_k closed-form check");
  verify->callback([&] { command = "verify"; action = [&] { return run_verify(verify_args, o); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kValidation;
  }

  try {
    if (seed_opt->count() > 0) {
      o.seed_source = "flag";
    } else if (env_seed && !env_seed->empty()) {
      o.seed_source = "env";
      try {
        std::size_t used = 0;
        o.seed = std::stoull(*env_seed, &used);
        if (used != env_seed->size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ValidationError(std::string(kSeedEnv) + " is not an unsigned integer");
      }
    }
    Report rep = action();
    emit(command, rep, o, out);
    if (rep.exit_code == kConsistency) err << "consistency check failed; see results\n";
    return rep.exit_code;
  } catch (const BudgetError& e) {
    err << "budget: " << e.what() << '\n';
    return kBudget;
  } catch (const ConsistencyError& e) {
    err << "consistency: " << e.what() << '\n';
    return kConsistency;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kConsistency;
  }
}

}  // namespace lapgraph::cli
