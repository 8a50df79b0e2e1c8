// Command-line surface: Monte Carlo experiments, the quadrature oracle, the
// wire-level bit audit, and the multistage chain, emitting CSV or JSON with
// the full configuration echoed for provenance.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swapsim/swapsim.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SWAPSIM_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
  }
  return kDefaultSeed;
}

struct Report {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool pass = true;
};

std::string render(const Report& r, const std::string& format) {
  std::ostringstream out;
  if (format == "json") {
    json j;
    j["config"] = json::object();
    for (const auto& [k, v] : r.config) j["config"][k] = v;
    j["summary"] = json::object();
    for (const auto& [k, v] : r.summary) j["summary"][k] = v;
    j["pass"] = r.pass;
    j["rows"] = json::array();
    for (const auto& row : r.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = row[i];
      j["rows"].push_back(std::move(obj));
    }
    out << j.dump(2) << "\n";
  } else {
    swapsim::CsvWriter csv(out);
    for (const auto& [k, v] : r.config) csv.comment(k, v);
    for (const auto& [k, v] : r.summary) csv.comment(k, v);
    csv.comment("pass", r.pass ? "true" : "false");
    csv.header(r.columns);
    for (const auto& row : r.rows) csv.row(row);
  }
  return out.str();
}

int emit(const Report& r, const std::string& format, const std::string& out_path,
         const std::string& command) {
  const std::string text = render(r, format);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "swapsim " << command << ": cannot open " << out_path << "\n";
      return 2;
    }
    f << text;
  }
  std::cerr << "swapsim " << command << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
  return r.pass ? 0 : 1;
}

std::string fmt(double v) { return swapsim::format_double(v); }
std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

struct PairSample {
  swapsim::MeasurementDirection x;
  swapsim::MeasurementDirection y;
};

PairSample sample_pair(swapsim::RandomStream& settings, bool equatorial) {
  using swapsim::MeasurementDirection;
  if (equatorial) {
    const double phi_a = settings.next_scaled(swapsim::kTwoPi);
    const double phi_b = settings.next_scaled(swapsim::kTwoPi);
    return {MeasurementDirection::from_spherical(swapsim::kPi / 2.0, phi_a),
            MeasurementDirection::from_spherical(swapsim::kPi / 2.0, phi_b)};
  }
  const double theta_a = std::acos(1.0 - 2.0 * settings.next_unit());
  const double phi_a = settings.next_scaled(swapsim::kTwoPi);
  const double theta_b = std::acos(1.0 - 2.0 * settings.next_unit());
  const double phi_b = settings.next_scaled(swapsim::kTwoPi);
  return {MeasurementDirection::from_spherical(theta_a, phi_a),
          MeasurementDirection::from_spherical(theta_b, phi_b)};
}

// |estimate - target| acceptable either as a z-score or, when the Wald error
// model degenerates near 0/1, as a raw count bound
bool proportion_matches(const swapsim::EstimatorResult& est, double target) {
  if (swapsim::degenerate_proportion(target, est.n)) {
    return std::abs(est.estimate - target) * static_cast<double>(est.n) <=
           swapsim::kDegenerateCountBound;
  }
  return std::abs(swapsim::z_score(est, target)) <= swapsim::kZBound;
}

int run_simulate(std::uint64_t seed, int pairs, std::uint64_t n,
                 const std::string& mode, const std::string& transport,
                 const std::string& format, const std::string& out_path) {
  using namespace swapsim;
  const bool equatorial = mode == "p1";
  Report report;
  report.config = {{"command", "simulate"},
                   {"seed", fmt_u64(seed)},
                   {"pairs", std::to_string(pairs)},
                   {"n", fmt_u64(n)},
                   {"mode", mode},
                   {"transport", transport},
                   {"format", format}};
  report.columns = {"phiA", "thetaA", "phiB", "thetaB", "p_hat", "target", "z"};

  RandomStream settings(seed, stream_label::kSettings, 0);
  for (int p = 0; p < pairs; ++p) {
    const PairSample sample = sample_pair(settings, equatorial);
    const double target = 0.5 * (1.0 + singlet_correlation(sample.x, sample.y));
    const std::uint64_t pair_seed = derive_seed(seed, "pair", p);

    EstimatorResult est{};
    if (transport == "tcp") {
      SessionConfig cfg;
      cfg.mode = equatorial ? SessionMode::protocol1 : SessionMode::full;
      cfg.transport = TransportKind::tcp;
      cfg.rounds = static_cast<std::uint32_t>(n);
      cfg.seed = pair_seed;
      cfg.settings = [sample](std::uint32_t) {
        return RoundSettings{sample.x, sample.y};
      };
      const SessionResult session = run_session(cfg);
      std::uint64_t agreements = 0;
      for (std::uint32_t r = 0; r < cfg.rounds; ++r) {
        agreements += session.alice_outcomes[r] == session.bob_outcomes[r];
      }
      est = make_probability_estimate(agreements, n);
    } else if (equatorial) {
      est = estimate_equatorial_agreement(Angle::from_radians(sample.x.phi()),
                                          Angle::from_radians(sample.y.phi()),
                                          n, pair_seed);
    } else {
      est = estimate_agreement(sample.x, sample.y, n, pair_seed);
    }

    report.pass = proportion_matches(est, target) && report.pass;
    report.rows.push_back({fmt(sample.x.phi()), fmt(sample.x.theta()),
                           fmt(sample.y.phi()), fmt(sample.y.theta()),
                           fmt(est.estimate), fmt(target),
                           fmt(z_score(est, target))});
  }
  return emit(report, format, out_path, "simulate");
}

int run_verify_table(std::uint64_t seed, int grid, const std::string& format,
                     const std::string& out_path) {
  using namespace swapsim;
  const TableBoundsReport bounds = verify_table_bounds(grid);
  Report report;
  report.config = {{"command", "verify-table"},
                   {"seed", fmt_u64(seed)},
                   {"grid", std::to_string(grid)},
                   {"format", format}};
  report.columns = {"sector", "alice_bit", "referee_bit", "bob_bit",
                    "min", "max", "pass"};
  for (const TableBoundsRow& row : bounds.rows) {
    report.rows.push_back({std::to_string(row.entry.sector),
                           std::to_string(row.entry.alice_bit),
                           std::to_string(row.entry.referee_bit),
                           std::to_string(row.entry.bob_bit),
                           fmt(row.min_value), fmt(row.max_value),
                           row.pass ? "true" : "false"});
  }
  report.pass = bounds.all_pass;
  return emit(report, format, out_path, "verify-table");
}

int run_oracle_check(std::uint64_t seed, int grid, const std::string& format,
                     const std::string& out_path) {
  using namespace swapsim;
  constexpr double kTol = 1e-6;
  Report report;
  report.config = {{"command", "oracle-check"},
                   {"seed", fmt_u64(seed)},
                   {"grid", std::to_string(grid)},
                   {"format", format}};
  report.columns = {"check", "phiA", "phiB", "value", "reference", "abs_err"};

  double max_grid_err = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double phi_a = (i + 0.5) * kQuarterPi / grid;
      const double phi_b = (j + 0.5) * kPi / grid;
      const double edge = split_by_sector(phi_b).offset;
      const bool less = phi_a < edge;
      const double value = less ? integral_agreement_less(phi_a, phi_b)
                                : integral_agreement_geq(phi_a, phi_b);
      const double target = 0.5 * (1.0 - std::cos(phi_a - phi_b));
      const double err = std::abs(value - target);
      max_grid_err = std::max(max_grid_err, err);
      report.rows.push_back({less ? "integral_less" : "integral_geq",
                             fmt(phi_a), fmt(phi_b), fmt(value), fmt(target),
                             fmt(err)});
    }
  }

  double max_sym_err = 0.0;
  const double base_pairs[][2] = {{0.9, 2.3}, {2.0, 5.1}, {5.7, 0.4}};
  for (const auto& pair : base_pairs) {
    const double phi_a = pair[0];
    const double phi_b = pair[1];
    const double base = agreement_from_integrals(phi_a, phi_b);
    const auto check = [&](const std::string& name, double value,
                           double reference) {
      const double err = std::abs(value - reference);
      max_sym_err = std::max(max_sym_err, err);
      report.rows.push_back(
          {name, fmt(phi_a), fmt(phi_b), fmt(value), fmt(reference), fmt(err)});
    };
    check("flip_bob", 1.0 - agreement_from_integrals(phi_a, phi_b + kPi), base);
    check("flip_alice", 1.0 - agreement_from_integrals(phi_a + kPi, phi_b), base);
    check("flip_both", agreement_from_integrals(phi_a + kPi, phi_b + kPi), base);
    for (int j = 1; j <= 7; ++j) {
      check("shift_j" + std::to_string(j),
            agreement_from_integrals(phi_a + j * kQuarterPi,
                                     phi_b + j * kQuarterPi),
            base);
    }
  }

  report.summary = {{"max_grid_err", fmt(max_grid_err)},
                    {"max_symmetry_err", fmt(max_sym_err)},
                    {"tolerance", fmt(kTol)}};
  report.pass = max_grid_err <= kTol && max_sym_err <= kTol;
  return emit(report, format, out_path, "oracle-check");
}

int run_chsh(std::uint64_t seed, std::uint64_t n, const std::string& format,
             const std::string& out_path) {
  using namespace swapsim;
  const ChshSettings settings;
  const ChshEstimate estimate = chsh(n, seed, settings);
  Report report;
  report.config = {{"command", "chsh"},
                   {"seed", fmt_u64(seed)},
                   {"n", fmt_u64(n)},
                   {"format", format}};
  report.columns = {"alice_phi", "bob_phi", "e_hat", "std_err", "target"};
  int k = 0;
  for (const double phi_a : settings.alice_phi) {
    for (const double phi_b : settings.bob_phi) {
      report.rows.push_back({fmt(phi_a), fmt(phi_b),
                             fmt(estimate.correlators[k].estimate),
                             fmt(estimate.correlators[k].std_err),
                             fmt(-std::cos(phi_a - phi_b))});
      ++k;
    }
  }
  const double deviation = std::abs(std::abs(estimate.s_value) - kChshTarget);
  report.summary = {{"s_value", fmt(estimate.s_value)},
                    {"s_std_err", fmt(estimate.std_err)},
                    {"abs_s_target", fmt(kChshTarget)},
                    {"abs_s_deviation", fmt(deviation)}};
  report.pass = deviation <= 0.01;
  return emit(report, format, out_path, "chsh");
}

int run_bits_audit(std::uint64_t seed, std::uint32_t rounds,
                   const std::string& mode, const std::string& transport,
                   const std::string& format, const std::string& out_path) {
  using namespace swapsim;
  SessionConfig cfg;
  cfg.mode = mode == "p1" ? SessionMode::protocol1 : SessionMode::full;
  cfg.transport =
      transport == "tcp" ? TransportKind::tcp : TransportKind::in_process;
  cfg.rounds = rounds;
  cfg.seed = seed;
  RandomStream settings(seed, stream_label::kSettings, 0);
  const PairSample sample = sample_pair(settings, cfg.mode == SessionMode::protocol1);
  cfg.settings = [sample](std::uint32_t) {
    return RoundSettings{sample.x, sample.y};
  };
  const SessionResult session = run_session(cfg);
  const int expected = session_bits_per_round(cfg.mode);

  Report report;
  report.config = {{"command", "bits-audit"},
                   {"seed", fmt_u64(seed)},
                   {"rounds", std::to_string(rounds)},
                   {"mode", mode},
                   {"transport", transport},
                   {"format", format}};
  report.columns = {"round", "alice_bits", "referee_bits", "total_bits"};
  for (std::uint32_t r = 0; r < rounds; ++r) {
    const int total = session.audit.round_total(r);
    report.pass = report.pass && total == expected;
    report.rows.push_back({std::to_string(r),
                           std::to_string(session.audit.alice_bits(r)),
                           std::to_string(session.audit.referee_bits(r)),
                           std::to_string(total)});
  }
  report.summary = {{"expected_bits_per_round", std::to_string(expected)},
                    {"session_total", fmt_u64(session.audit.session_total())}};
  return emit(report, format, out_path, "bits-audit");
}

int run_multistage(std::uint64_t seed, int m, int delta_count, std::uint64_t n,
                   const std::string& format, const std::string& out_path) {
  using namespace swapsim;
  Report report;
  report.config = {{"command", "multistage"},
                   {"seed", fmt_u64(seed)},
                   {"m", std::to_string(m)},
                   {"deltas", std::to_string(delta_count)},
                   {"n", fmt_u64(n)},
                   {"format", format}};
  report.columns = {"delta", "p_hat", "std_err", "target", "z"};

  // one decade of deltas, largest at 0.9 * pi/m
  std::vector<double> deltas(delta_count);
  std::vector<double> probs(delta_count);
  const double top = 0.9 * kPi / m;
  for (int i = 0; i < delta_count; ++i) {
    deltas[i] = top * std::pow(10.0, -double(delta_count - 1 - i) /
                                         double(delta_count - 1));
  }
  for (int i = 0; i < delta_count; ++i) {
    const EstimatorResult est = estimate_chain_agreement(
        m, 0.0, deltas[i], n, derive_seed(seed, "chainDelta", i));
    const double target = chain_agreement_closed_form(m, 0.0, deltas[i]);
    probs[i] = est.estimate;
    report.pass = proportion_matches(est, target) && report.pass;
    report.rows.push_back({fmt(deltas[i]), fmt(est.estimate), fmt(est.std_err),
                           fmt(target), fmt(z_score(est, target))});
  }
  const ScalingFit fit = fit_log_slope(deltas, probs);
  if (fit.excluded_zero > 0) {
    std::cerr << "swapsim multistage: warning: " << fit.excluded_zero
              << " zero estimates excluded from the fit\n";
  }
  report.summary = {{"slope", fmt(fit.slope)},
                    {"points_used", std::to_string(fit.points_used)},
                    {"excluded_zero", std::to_string(fit.excluded_zero)}};
  report.pass = report.pass && fit.slope >= 2.9 && fit.slope <= 3.1;
  return emit(report, format, out_path, "multistage");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-communication classical simulation of entanglement "
               "swapping, with statistical and quadrature certification"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  std::string format = "csv";
  std::string out_path;
  app.add_option("--seed", seed, "master seed (env SWAPSIM_SEED overrides the default)");
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "write the report to a file instead of stdout");

  auto* simulate = app.add_subcommand(
      "simulate", "estimate agreement for random setting pairs");
  int pairs = 50;
  std::uint64_t sim_n = 1000000;
  std::string mode = "full";
  std::string transport = "inprocess";
  simulate->add_option("--pairs", pairs, "number of random setting pairs")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--n", sim_n, "rounds per pair (>= 100)")
      ->check(CLI::Range(std::uint64_t{100}, std::uint64_t{1} << 32));
  simulate->add_option("--mode", mode, "p1 = equatorial only, full = 9-bit rounds")
      ->check(CLI::IsMember({"p1", "full"}));
  simulate->add_option("--transport", transport, "inprocess sampler or tcp runner")
      ->check(CLI::IsMember({"inprocess", "tcp"}));

  auto* verify_table = app.add_subcommand(
      "verify-table", "scan all 32 acceptance-table entries for [0,1] bounds");
  int grid = 100000;
  verify_table->add_option("--grid", grid, "grid points per entry")
      ->check(CLI::Range(2, 100000000));

  auto* oracle_check = app.add_subcommand(
      "oracle-check", "quadrature of the agreement integrals vs closed form");
  int oracle_grid = 20;
  oracle_check->add_option("--grid", oracle_grid, "grid size per axis")
      ->check(CLI::Range(1, 200));

  auto* chsh_cmd = app.add_subcommand("chsh", "CHSH value from full rounds");
  std::uint64_t chsh_n = 10000000;
  chsh_cmd->add_option("--n", chsh_n, "rounds per setting (>= 10000)")
      ->check(CLI::Range(std::uint64_t{10000}, std::uint64_t{1} << 33));

  auto* bits_audit = app.add_subcommand(
      "bits-audit", "session with per-round payload-bit accounting");
  std::uint32_t rounds = 1000;
  std::string audit_mode = "full";
  std::string audit_transport = "inprocess";
  bits_audit->add_option("--rounds", rounds, "rounds in the session")
      ->check(CLI::Range(1u, 10000000u));
  bits_audit->add_option("--mode", audit_mode, "p1 or full")
      ->check(CLI::IsMember({"p1", "full"}));
  bits_audit->add_option("--transport", audit_transport, "inprocess or tcp")
      ->check(CLI::IsMember({"inprocess", "tcp"}));

  auto* multistage = app.add_subcommand(
      "multistage", "two-referee chain agreement and its cubic scaling");
  int chain_m = 4;
  int delta_count = 5;
  std::uint64_t chain_n = 10000000;
  multistage->add_option("--m", chain_m, "sector count")->check(CLI::Range(1, 64));
  multistage->add_option("--deltas", delta_count, "number of deltas (>= 4)")
      ->check(CLI::Range(4, 64));
  multistage->add_option("--n", chain_n, "rounds per delta")
      ->check(CLI::Range(std::uint64_t{1000}, std::uint64_t{1} << 33));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(seed, pairs, sim_n, mode, transport, format, out_path);
    }
    if (verify_table->parsed()) {
      return run_verify_table(seed, grid, format, out_path);
    }
    if (oracle_check->parsed()) {
      return run_oracle_check(seed, oracle_grid, format, out_path);
    }
    if (chsh_cmd->parsed()) {
      return run_chsh(seed, chsh_n, format, out_path);
    }
    if (bits_audit->parsed()) {
      return run_bits_audit(seed, rounds, audit_mode, audit_transport, format,
                            out_path);
    }
    if (multistage->parsed()) {
      return run_multistage(seed, chain_m, delta_count, chain_n, format, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "swapsim: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
