#pragma once

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "causets/io_json.hpp"
#include "causets/verify.hpp"

namespace causets::cli {

struct RunConfig {
  int max_level = 5;
  int cap = Growth::default_cap;
  double tol = default_tolerance;
  std::string format = "table";  // json | csv | table
  std::uint64_t seed = 12345;
  bool strict_complement = false;
  std::string out_path;
  std::string ap_choice = "action";
};

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline TransitionAmplitudeTable make_table(const Growth& g, const std::string& choice) {
  if (choice == "action") return action_table(g);
  if (choice == "uniform") return classical_table(g);
  if (choice.rfind("file:", 0) == 0) {
    std::ifstream in(choice.substr(5));
    if (!in) throw std::invalid_argument("cannot open transition table file: " + choice.substr(5));
    Json j = Json::parse(in);
    return table_from_json(g, j);
  }
  throw std::invalid_argument("unknown amplitude process choice: " + choice);
}

/// action and file tables generate the rank-1 amplitude process; the uniform
/// table backs the diagonal classical process.
inline Process make_process(const Growth& g, const std::string& choice, int max_n) {
  if (choice == "uniform") return classical_process(g, classical_table(g), max_n);
  return ap_process(g, make_table(g, choice), max_n);
}

inline Path resolve_omega(const Growth& g, const std::string& text, int n) {
  Path p;
  if (text == "path:chain" || text == "path:antichain") {
    for (int k = 1; k <= n; ++k)
      p.entries.push_back(text == "path:chain" ? g.chain_index(k) : g.antichain_index(k));
    return p;
  }
  p = g.parse_path(text);
  if (p.length() < n)
    throw std::invalid_argument("path " + text + " is shorter than N=" + std::to_string(n));
  return p;
}

inline void render_suites(const std::vector<SuiteReport>& reports, const RunConfig& cfg,
                          std::ostream& out) {
  if (cfg.format == "json") {
    Json j = Json::array();
    for (const auto& rep : reports) {
      Json checks = Json::array();
      for (const auto& c : rep.checks) checks.push_back(check_json(c));
      j.push_back(Json{{"suite", rep.suite},
                       {"seed", rep.seed},
                       {"pass", rep.passed()},
                       {"checks", checks}});
    }
    out << j.dump(2) << "\n";
    return;
  }
  for (const auto& rep : reports) {
    out << "suite " << rep.suite << " (seed " << rep.seed << ")\n";
    for (const auto& c : rep.checks) {
      out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name;
      if (c.residual > 0) out << "  residual=" << fmt(c.residual);
      if (!c.witness.empty()) out << "  witness: " << c.witness;
      out << "\n";
    }
    out << "  => " << (rep.passed() ? "PASS" : "FAIL") << "\n";
  }
}

// ---------------------------------------------------------------------------

inline int cmd_enum(const RunConfig& cfg, std::ostream& out) {
  Growth g = Growth::build(cfg.max_level, cfg.cap);
  if (cfg.format == "json") {
    Json levels = Json::array();
    for (int n = 1; n <= g.max_level(); ++n) {
      Json causets = Json::array();
      for (const Causet& x : g.level(n).causets) {
        Json jx = causet_json(x);
        long total = 0;
        auto records = x.size() < Causet::max_size ? x.offspring() : std::vector<OffspringRecord>{};
        for (const auto& r : records) total += r.multiplicity;
        jx["offspring_total"] = total;
        jx["offspring_classes"] = records.size();
        jx["producers"] = n >= 2 ? static_cast<long>(x.producers().size()) : 0;
        causets.push_back(jx);
      }
      levels.push_back(Json{{"n", n}, {"count", g.level(n).causets.size()}, {"causets", causets}});
    }
    out << Json{{"levels", levels}}.dump(2) << "\n";
    return 0;
  }
  const bool csv = cfg.format == "csv";
  if (csv) out << "n,index,literal,h,w,area,offspring_total,offspring_classes,producers\r\n";
  for (int n = 1; n <= g.max_level(); ++n) {
    if (!csv)
      out << "level " << n << ": " << g.level(n).causets.size() << " causet(s)\n";
    int i = 0;
    for (const Causet& x : g.level(n).causets) {
      long total = 0;
      std::size_t nclasses = 0;
      if (x.size() < Causet::max_size) {
        auto records = x.offspring();
        nclasses = records.size();
        for (const auto& r : records) total += r.multiplicity;
      }
      std::size_t nprod = n >= 2 ? x.producers().size() : 0;
      if (csv) {
        out << n << "," << i << "," << csv_field(x.literal()) << "," << x.height() << ","
            << x.width() << "," << x.area() << "," << total << "," << nclasses << "," << nprod
            << "\r\n";
      } else {
        out << "  [" << i << "] " << x.literal() << "  h=" << x.height() << " w=" << x.width()
            << " area=" << x.area() << "  offspring=" << total << " (" << nclasses
            << " classes)  producers=" << nprod << "\n";
      }
      ++i;
    }
  }
  return 0;
}

inline int cmd_paths(const RunConfig& cfg, bool list, std::ostream& out) {
  Growth g = Growth::build(cfg.max_level, cfg.cap);
  if (cfg.format == "json") {
    Json counts = Json::array();
    for (int n = 1; n <= g.max_level(); ++n)
      counts.push_back(Json::array({n, g.paths(n).count}));
    Json j{{"counts", counts}};
    if (list) {
      Json paths = Json::array();
      const PathSpace& ps = g.paths(g.max_level());
      for (std::size_t p = 0; p < ps.count; ++p) paths.push_back(g.path_literal(ps.path(p)));
      j["paths"] = paths;
    }
    out << j.dump(2) << "\n";
    return 0;
  }
  const bool csv = cfg.format == "csv";
  if (csv) out << "n,count\r\n";
  for (int n = 1; n <= g.max_level(); ++n) {
    if (csv)
      out << n << "," << g.paths(n).count << "\r\n";
    else
      out << "level " << n << ": " << g.paths(n).count << " path(s)\n";
  }
  if (list && !csv) {
    const PathSpace& ps = g.paths(g.max_level());
    for (std::size_t p = 0; p < ps.count; ++p)
      out << "  " << g.path_literal(ps.path(p)) << "\n";
  }
  return 0;
}

inline int cmd_paper_example(const RunConfig& cfg, std::ostream& out) {
  namespace wx = worked_example;
  const double tol = cfg.tol;
  Growth g = Growth::build(3, cfg.cap);
  TransitionAmplitudeTable action = action_table(g);
  Process proc = ap_process(g, action, 3);

  struct Row {
    std::string name;
    double expected, actual;
    bool pass;
  };
  std::vector<Row> rows;
  auto push = [&](const std::string& name, double expected, double actual) {
    rows.push_back(Row{name, expected, actual, std::abs(expected - actual) <= tol});
  };

  std::array<Causet, 9> site{};
  for (int i = 1; i <= 8; ++i)
    site[static_cast<std::size_t>(i)] = Causet::parse(wx::site_literals[static_cast<std::size_t>(i - 1)]);
  for (int i = 1; i <= 3; ++i) {
    Complex z = action_profile(site[static_cast<std::size_t>(i)]).z_closed;
    push("z(x" + std::to_string(i) + ")", wx::z_values[static_cast<std::size_t>(i - 1)], z.real());
    push("Im z(x" + std::to_string(i) + ")", 0.0, z.imag());
  }

  const std::pair<const char*, Complex> named_amps[] = {
      {"a(x1,x2)", wx::a_x1_x2}, {"a(x1,x3)", wx::a_x1_x3}, {"a(x2,x4)", wx::a_x2_x4},
      {"a(x2,x5)", wx::a_x2_x5}, {"a(x2,x6)", wx::a_x2_x6}, {"a(x3,x6)", wx::a_x3_x6},
      {"a(x3,x7)", wx::a_x3_x7}, {"a(x3,x8)", wx::a_x3_x8}};
  const std::pair<int, int> named_pairs[] = {{1, 2}, {1, 3}, {2, 4}, {2, 5},
                                             {2, 6}, {3, 6}, {3, 7}, {3, 8}};
  for (int k = 0; k < 8; ++k) {
    auto [pi, ci] = named_pairs[k];
    Complex a = action.lookup(g, site[static_cast<std::size_t>(pi)].size(),
                              g.find(site[static_cast<std::size_t>(pi)]),
                              g.find(site[static_cast<std::size_t>(ci)]));
    push(std::string(named_amps[k].first) + " re", named_amps[k].second.real(), a.real());
    push(std::string(named_amps[k].first) + " im", named_amps[k].second.imag(), a.imag());
  }

  Eigen::VectorXcd a3 = path_amplitudes(g, action, 3);
  std::array<std::size_t, 6> gamma{};
  for (std::size_t p = 0; p < 6; ++p) {
    std::vector<int> entries;
    for (int k = 0; k < 3; ++k)
      entries.push_back(g.find(site[static_cast<std::size_t>(wx::path_sites[p][static_cast<std::size_t>(k)])]));
    gamma[p] = g.path_index(entries, 3);
    push("a3(gamma" + std::to_string(p + 1) + ")", wx::path_amplitudes[p],
         a3[static_cast<Eigen::Index>(gamma[p])].real());
    push("Im a3(gamma" + std::to_string(p + 1) + ")", 0.0,
         a3[static_cast<Eigen::Index>(gamma[p])].imag());
    push("mu3(gamma" + std::to_string(p + 1) + ")", wx::path_measures[p],
         std::norm(a3[static_cast<Eigen::Index>(gamma[p])]));
  }
  push("sum a3", 1.0, a3.sum().real());

  const ProbabilityOperator& rho3 = proc.at(3);
  std::size_t dim3 = g.paths(3).count;
  auto set_of = [&](std::initializer_list<int> sites_list) {
    PathSet s(dim3);
    for (int i : sites_list) {
      PathSet part = approximate(g, SetSpec::site_of(site[static_cast<std::size_t>(i)]), 3);
      s |= part;
    }
    return s;
  };
  push("mu3({x6})", wx::mu_x6, rho3.q_measure(set_of({6})));
  push("mu3({x4,x5})", wx::mu_x4_x5, rho3.q_measure(set_of({4, 5})));
  push("mu3({x5,x6})", wx::mu_x5_x6, rho3.q_measure(set_of({5, 6})));

  for (int i = 1; i <= 8; ++i) {
    Complex a = site_amplitude(g, action, site[static_cast<std::size_t>(i)]);
    push("a(x" + std::to_string(i) + ")", wx::site_amplitudes[static_cast<std::size_t>(i - 1)],
         a.real());
    push("Im a(x" + std::to_string(i) + ")", 0.0, a.imag());
  }

  // decoherence matrices: 6x6 over the paths, 8x8 over the sites
  Json d3 = Json::array(), d8 = Json::array();
  double matrix_residual = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < 6; ++j) {
      Complex d = rho3.kernel(gamma[i], gamma[j]);
      Complex expect = wx::path_amplitudes[i] * wx::path_amplitudes[j];
      matrix_residual = std::max(matrix_residual, std::abs(d - expect));
      row.push_back(Json::array({d.real(), d.imag()}));
    }
    d3.push_back(row);
  }
  SiteDecoherence sd = site_decoherence(g, proc, 3);
  for (int i = 1; i <= 8; ++i) {
    Json row = Json::array();
    for (int j = 1; j <= 8; ++j) {
      Complex d = sd.at(sd.sites.of(site[static_cast<std::size_t>(i)]),
                        sd.sites.of(site[static_cast<std::size_t>(j)]));
      Complex expect = wx::site_amplitudes[static_cast<std::size_t>(i - 1)] *
                       wx::site_amplitudes[static_cast<std::size_t>(j - 1)];
      matrix_residual = std::max(matrix_residual, std::abs(d - expect));
      row.push_back(Json::array({d.real(), d.imag()}));
    }
    d8.push_back(row);
  }
  push("decoherence matrices", 0.0, matrix_residual);

  bool all_pass = true;
  for (const auto& r : rows) all_pass = all_pass && r.pass;
  if (cfg.format == "json") {
    Json jrows = Json::array();
    for (const auto& r : rows)
      jrows.push_back(Json{{"name", r.name}, {"expected", r.expected}, {"actual", r.actual},
                           {"pass", r.pass}});
    out << Json{{"tolerance", tol}, {"pass", all_pass}, {"values", jrows},
                {"path_decoherence", d3}, {"site_decoherence", d8}}
               .dump(2)
        << "\n";
  } else {
    for (const auto& r : rows) {
      out << "[" << (r.pass ? "PASS" : "FAIL") << "] " << r.name << ": expected "
          << fmt(r.expected) << ", got " << fmt(r.actual);
      if (!r.pass) out << "  (|diff| = " << fmt(std::abs(r.expected - r.actual)) << ")";
      out << "\n";
    }
    out << (all_pass ? "PASS" : "FAIL") << " (" << rows.size() << " values, tolerance "
        << fmt(tol) << ")\n";
  }
  return all_pass ? 0 : 1;
}

inline int cmd_ap(const RunConfig& cfg, std::ostream& out) {
  Growth g = Growth::build(cfg.max_level, cfg.cap);
  TransitionAmplitudeTable table = make_table(g, cfg.ap_choice);
  out << table_json(g, table).dump(2) << "\n";
  return 0;
}

inline int cmd_mu(const RunConfig& cfg, const std::string& set_text, int window, double eps,
                  std::ostream& out) {
  Growth g = Growth::build(cfg.max_level, cfg.cap);
  SetSpec spec = SetSpec::parse(set_text);
  Process proc = make_process(g, cfg.ap_choice, cfg.max_level);
  MuSequence seq = mu_sequence(g, proc, spec, cfg.max_level, window, eps, cfg.strict_complement);
  if (cfg.format == "json") {
    Json j = mu_sequence_json(seq);
    j["process"] = proc.name;
    out << j.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out << "n,mu\r\n";
    for (std::size_t k = 0; k < seq.values.size(); ++k)
      out << (seq.first_level + static_cast<int>(k)) << "," << fmt(seq.values[k]) << "\r\n";
  } else {
    out << "mu_n(" << seq.spec << ") under " << proc.name << "\n";
    for (std::size_t k = 0; k < seq.values.size(); ++k)
      out << "  n=" << (seq.first_level + static_cast<int>(k)) << "  " << fmt(seq.values[k])
          << "\n";
    out << "converged (numerical evidence): " << (seq.converged ? "yes" : "no") << "\n";
  }
  return 0;
}

inline int cmd_verify(const RunConfig& cfg, const std::string& suite, int N,
                      const std::string& omega_text, const std::string& omega_prime_text,
                      std::ostream& out) {
  int needed = cfg.max_level;
  if (suite == "einstein" || suite == "all") needed = std::max(needed, N + 1);
  Growth g = Growth::build(needed, std::max(cfg.cap, needed));
  std::vector<SuiteReport> reports;
  if (suite == "growth" || suite == "all") reports.push_back(verify_growth_suite(g, cfg.tol));
  if (suite == "amplitude" || suite == "all")
    reports.push_back(verify_amplitude_suite(g, cfg.seed, cfg.tol));
  if (suite == "qmeasure" || suite == "all")
    reports.push_back(verify_qmeasure_suite(g, cfg.seed, cfg.tol));
  if (suite == "einstein" || suite == "all") {
    Process proc = make_process(g, cfg.ap_choice, g.max_level());
    Path omega = resolve_omega(g, omega_text, N);
    Path omega_prime = resolve_omega(g, omega_prime_text, N);
    reports.push_back(verify_einstein_suite(g, proc, N, omega, omega_prime, cfg.seed));
  }
  if (suite == "classical" || suite == "all")
    reports.push_back(verify_classical_suite(g, cfg.seed, cfg.tol));
  if (reports.empty()) throw std::invalid_argument("unknown suite: " + suite);
  render_suites(reports, cfg, out);
  for (const auto& r : reports)
    if (!r.passed()) return 1;
  return 0;
}

inline int cmd_einstein(const RunConfig& cfg, int N, const std::string& omega_text,
                        const std::string& omega_prime_text, const std::string& dump,
                        std::ostream& out) {
  Growth g = Growth::build(std::max(cfg.max_level, N + 1), std::max(cfg.cap, N + 1));
  Process proc = make_process(g, cfg.ap_choice, g.max_level());
  Path omega = resolve_omega(g, omega_text, N);
  Path omega_prime = resolve_omega(g, omega_prime_text, N);
  if (!dump.empty()) {
    SiteDecoherence sd = site_decoherence(g, proc, N);
    SitePath w = resolve_path(sd.sites, omega), wp = resolve_path(sd.sites, omega_prime);
    SparsePairOperator op(sd.sites);
    if (dump == "nabla") op = nabla(sd, w, wp);
    else if (dump == "metric") op = metric_op(sd, w, wp);
    else if (dump == "curvature") op = curvature(sd, w, wp);
    else if (dump == "mass") op = mass_energy_op(sd, w, wp);
    else if (dump == "adjoint") op = adjoint_metric(sd, w, wp);
    else throw std::invalid_argument("unknown operator to dump: " + dump);
    out << operator_json(sd.sites, op).dump(2) << "\n";
    return 0;
  }
  std::vector<SuiteReport> reports{
      verify_einstein_suite(g, proc, N, omega, omega_prime, cfg.seed)};
  render_suites(reports, cfg, out);
  return reports.front().passed() ? 0 : 1;
}

inline int cmd_zscan(const RunConfig& cfg, int named_max, std::ostream& out) {
  Growth g = Growth::build(cfg.max_level, cfg.cap);
  auto rows = z_scan(g, cfg.max_level);
  struct Named {
    int j;
    double chain_abs, chain_bound, antichain_abs, antichain_bound;
  };
  std::vector<Named> named;
  for (int j = 2; j <= named_max; ++j) {
    named.push_back(Named{j, std::abs(action_profile(Causet::chain(j)).z_closed),
                          static_cast<double>(j - 1),
                          std::abs(action_profile(Causet(j)).z_closed),
                          std::pow(2.0, j) - 2.0});
  }
  bool bounds_ok = true;
  for (const auto& r : named)
    bounds_ok = bounds_ok && r.chain_abs >= r.chain_bound && r.antichain_abs >= r.antichain_bound;

  if (cfg.format == "json") {
    Json jlevels = Json::array();
    for (const auto& r : rows)
      jlevels.push_back(Json{{"n", r.n},
                             {"min_abs_z", r.min_abs},
                             {"min_witness", r.min_witness},
                             {"max_abs_z", r.max_abs},
                             {"max_witness", r.max_witness}});
    Json jnamed = Json::array();
    for (const auto& r : named)
      jnamed.push_back(Json{{"j", r.j},
                            {"chain_abs_z", r.chain_abs},
                            {"chain_bound", r.chain_bound},
                            {"antichain_abs_z", r.antichain_abs},
                            {"antichain_bound", r.antichain_bound}});
    out << Json{{"levels", jlevels}, {"named", jnamed}, {"bounds_ok", bounds_ok}}.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    out << "n,min_abs_z,min_witness,max_abs_z,max_witness\r\n";
    for (const auto& r : rows)
      out << r.n << "," << fmt(r.min_abs) << "," << csv_field(r.min_witness) << ","
          << fmt(r.max_abs) << "," << csv_field(r.max_witness) << "\r\n";
  } else {
    for (const auto& r : rows)
      out << "level " << r.n << ": min |z| = " << fmt(r.min_abs) << " at " << r.min_witness
          << ", max |z| = " << fmt(r.max_abs) << " at " << r.max_witness << "\n";
    for (const auto& r : named)
      out << "j=" << r.j << ": |z(chain)| = " << fmt(r.chain_abs) << " (>= " << fmt(r.chain_bound)
          << "), |z(antichain)| = " << fmt(r.antichain_abs) << " (>= " << fmt(r.antichain_bound)
          << ")\n";
    out << "bounds " << (bounds_ok ? "hold" : "VIOLATED") << "\n";
  }
  return bounds_ok ? 0 : 1;
}

inline int cmd_classical(const RunConfig& cfg, std::ostream& out) {
  Growth g = Growth::build(cfg.max_level, cfg.cap);
  std::vector<SuiteReport> reports{verify_classical_suite(g, cfg.seed, cfg.tol)};
  render_suites(reports, cfg, out);
  return reports.front().passed() ? 0 : 1;
}

// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out_stream, std::ostream& err) {
  CLI::App app{"causal set growth processes, quantum measures and discrete curvature operators"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--max-level", cfg.max_level, "deepest level to build")
      ->check(CLI::Range(1, 16));
  app.add_option("--cap", cfg.cap, "size cap for causets")->check(CLI::Range(1, 16));
  app.add_option("--tol", cfg.tol, "numeric tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--seed", cfg.seed, "seed for randomized scans");
  app.add_flag("--strict-complement", cfg.strict_complement,
               "literal continuation semantics for complements");
  std::string out_path;
  app.add_option("--out", out_path, "write output to a file");

  auto* c_enum = app.add_subcommand("enum", "enumerate levels with order statistics");
  auto* c_paths = app.add_subcommand("paths", "count (and list) the n-paths");
  bool list_paths = false;
  c_paths->add_flag("--list", list_paths, "list the paths of the deepest level");
  auto* c_example = app.add_subcommand("paper-example",
                                       "reproduce the three-level worked example");
  auto* c_ap = app.add_subcommand("ap", "emit a transition amplitude table");
  auto* c_mu = app.add_subcommand("mu", "q-measure sequence of a set spec");
  std::string set_text;
  int window = 3;
  double eps = 1e-6;
  c_mu->add_option("--set", set_text, "set spec")->required();
  c_mu->add_option("--window", window, "consecutive small changes for convergence");
  c_mu->add_option("--eps", eps, "relative change threshold");
  auto* c_verify = app.add_subcommand("verify", "run property suites");
  std::string suite = "all";
  c_verify->add_option("--suite", suite, "growth | amplitude | qmeasure | einstein | classical | all")
      ->check(CLI::IsMember({"growth", "amplitude", "qmeasure", "einstein", "classical", "all"}));
  auto* c_einstein = app.add_subcommand("einstein", "build and check the discrete operators");
  int N = 4;
  std::string omega_text = "path:chain", omega_prime_text = "path:antichain", dump;
  for (CLI::App* c : {c_verify, c_einstein}) {
    c->add_option("--N", N, "truncation depth")->check(CLI::Range(2, 12));
    c->add_option("--omega", omega_text, "first path (path:chain, path:antichain or a literal)");
    c->add_option("--omega-prime", omega_prime_text, "second path");
  }
  c_einstein->add_option("--dump", dump, "dump one operator: nabla|metric|curvature|mass|adjoint");
  auto* c_zscan = app.add_subcommand("zscan", "partition function scan");
  int named_max = 12;
  c_zscan->add_option("--named-max", named_max, "largest chain/antichain to bound")
      ->check(CLI::Range(2, 64));
  auto* c_classical = app.add_subcommand("classical", "classical uniform-process suite");

  for (CLI::App* c : {c_ap, c_mu, c_verify, c_einstein})
    c->add_option("--ap", cfg.ap_choice, "action | uniform | file:<path>");
  for (CLI::App* c : app.get_subcommands([](CLI::App*) { return true; })) c->fallthrough();

  std::vector<const char*> argv;
  argv.push_back("causets");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out_stream, err);
  }

  std::ofstream file_out;
  std::ostream* out = &out_stream;
  if (!out_path.empty()) {
    file_out.open(out_path);
    if (!file_out) {
      err << "cannot open output file: " << out_path << "\n";
      return 2;
    }
    out = &file_out;
  }

  try {
    if (c_enum->parsed()) return cmd_enum(cfg, *out);
    if (c_paths->parsed()) return cmd_paths(cfg, list_paths, *out);
    if (c_example->parsed()) {
      if (!app.count("--tol")) cfg.tol = 1e-12;
      return cmd_paper_example(cfg, *out);
    }
    if (c_ap->parsed()) return cmd_ap(cfg, *out);
    if (c_mu->parsed()) return cmd_mu(cfg, set_text, window, eps, *out);
    if (c_verify->parsed()) return cmd_verify(cfg, suite, N, omega_text, omega_prime_text, *out);
    if (c_einstein->parsed())
      return cmd_einstein(cfg, N, omega_text, omega_prime_text, dump, *out);
    if (c_zscan->parsed()) return cmd_zscan(cfg, named_max, *out);
    if (c_classical->parsed()) return cmd_classical(cfg, *out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "no subcommand given\n";
  return 2;
}

}  // namespace causets::cli
