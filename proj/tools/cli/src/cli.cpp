#include "schmidtfock/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "schmidtfock/bipartite.hpp"
#include "schmidtfock/blocks.hpp"
#include "schmidtfock/errors.hpp"
#include "schmidtfock/fock.hpp"
#include "schmidtfock/measure.hpp"
#include "schmidtfock/numerics.hpp"
#include "schmidtfock/pairing.hpp"
#include "schmidtfock/random.hpp"
#include "schmidtfock/rdm.hpp"
#include "schmidtfock/state_io.hpp"
#include "schmidtfock/verification.hpp"

#ifndef SCHMIDTFOCK_VERSION
#define SCHMIDTFOCK_VERSION "unknown"
#endif

namespace schmidtfock::cli {
namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<long long, double, std::string>;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

/// Column-oriented result shared by every command; rendered as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

struct Provenance {
  std::string command_line;
  std::uint64_t seed = 0;
};

std::string render_csv(const Table& t, const Provenance& p) {
  std::ostringstream os;
  os << "# command=" << p.command_line << ", seed=" << p.seed
     << ", version=" << SCHMIDTFOCK_VERSION << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&os](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) os << format_double(v);
            else if constexpr (std::is_same_v<T, std::string>) os << csv_field(v);
            else os << v;
          },
          row[i]);
    }
    os << '\n';
  }
  return os.str();
}

std::string render_json(const Table& t, const Provenance& p) {
  json doc;
  doc["provenance"] = {{"command", p.command_line},
                       {"seed", p.seed},
                       {"version", SCHMIDTFOCK_VERSION}};
  doc["columns"] = t.columns;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& cell : row) std::visit([&r](const auto& v) { r.push_back(v); }, cell);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

Table from_sweep(const SweepTable& s) {
  Table t;
  t.columns = s.columns;
  for (const auto& row : s.rows) {
    std::vector<Cell> r(row.begin(), row.end());
    t.add(std::move(r));
  }
  return t;
}

/// Eigenvalues within 1e-12 of zero print as 0 so outputs do not carry
/// platform-dependent round-off signs.
double clean(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

// Per-command option values beyond the shared RunConfig.
struct Extra {
  bool list = false;
  std::string state_file;
  std::vector<int> M_list;
  std::vector<int> subspace;
  double sector_tol = tol::construction;
  double epsilon = 1.0;
  int survivors = 0;
  int L = 1;
  bool normal = false;
  std::string entropy = "von_neumann";
  int source_modes = 0;
  int target_modes = 0;
  int branches = 0;
  std::string suite = "all";
  int instances = 20;
};

Table run_basis(const RunConfig& cfg, const Extra& x) {
  const Statistics st = parse_statistics(cfg.statistics);
  require(cfg.d >= 1 && cfg.N >= 0, "basis requires --d >= 1 and --N >= 0");
  Table t;
  if (!x.list) {
    t.columns = {"statistics", "modes", "particles", "dimension"};
    t.add({std::string(to_string(st)), static_cast<long long>(cfg.d),
           static_cast<long long>(cfg.N),
           static_cast<long long>(basis_dimension(st, cfg.d, cfg.N))});
    return t;
  }
  const FockBasis basis = enumerate_basis(st, cfg.d, cfg.N);
  t.columns = {"rank"};
  for (int i = 1; i <= cfg.d; ++i) t.columns.push_back("n" + std::to_string(i));
  for (std::size_t r = 0; r < basis.size(); ++r) {
    std::vector<Cell> row{static_cast<long long>(r)};
    for (int occ : basis[r].occupations()) row.emplace_back(static_cast<long long>(occ));
    t.add(std::move(row));
  }
  return t;
}

Table run_analyze(const Extra& x) {
  const PureState state = read_state_file(x.state_file);
  require(!x.M_list.empty(), "analyze requires --M");
  Table t;
  t.columns = {"M", "quantity", "index", "value"};
  const auto add = [&t](int M, const std::string& q, std::size_t i, Cell v) {
    t.add({static_cast<long long>(M), q, static_cast<long long>(i), std::move(v)});
  };
  for (int M : x.M_list) {
    require(M >= 1 && M <= state.particles(), "--M entries must lie in 1..N");
    const SchmidtDecomposition schmidt = schmidt_decompose(build_gamma(state, M));
    const Spectrum rho = rdm(state, M).spectrum();
    add(M, "schmidt_rank", 0, static_cast<long long>(schmidt.rank));
    for (std::size_t i = 0; i < schmidt.rank; ++i) add(M, "sigma", i, clean(schmidt.sigma.values[i]));
    // The support of rho^(M) is the Schmidt support; trailing zeros are omitted.
    for (std::size_t i = 0; i < schmidt.rank && i < rho.size(); ++i)
      add(M, "eigenvalue", i, clean(rho.values[i]));
    add(M, "entropy_von_neumann", 0,
        entanglement_entropy(state, M, EntropyKind::von_neumann()));
    add(M, "entropy_linear", 0, entanglement_entropy(state, M, EntropyKind::linear()));
    if (!x.subspace.empty()) {
      const ModeSubspace S(x.subspace, state.modes());
      for (const SectorBlock& b : blocked_rdm(state, S, M, x.sector_tol)) {
        const std::string name = "block_m" + std::to_string(b.m) + "_l" + std::to_string(b.l);
        const Spectrum sp = hermitian_eigen(b.matrix).spectrum;
        for (std::size_t i = 0; i < sp.size(); ++i) add(M, name, i, clean(sp.values[i]));
        add(M, name + "_trace", 0, b.matrix.trace().real());
      }
    }
  }
  if (!x.subspace.empty()) {
    const ModeSubspace S(x.subspace, state.modes());
    add(0, "bipartite_entropy_von_neumann", 0,
        bipartite_entanglement(state, S, EntropyKind::von_neumann(), x.sector_tol));
  }
  return t;
}

Table run_sweep(const RunConfig& cfg, const Extra& x, std::vector<Observable> observables) {
  require(cfg.n >= 1 && cfg.m >= 1, "paired commands require --n >= 1 and --m >= 1");
  const PairingModel model =
      PairingModel::uniform(parse_statistics(cfg.statistics), cfg.n, cfg.m, x.epsilon, 1.0);
  SweepOptions opt;
  opt.g_grid = parse_g_grid(cfg.g_grid);
  opt.observables = std::move(observables);
  opt.overlap_terms = cfg.truncations;
  opt.jobs = cfg.jobs;
  return from_sweep(sweep(model, opt));
}

Spectrum branch_spectrum(const PureState& post, int L) {
  return normalized_spectrum(rdm(post, L).matrix);
}

Table run_measure(const Extra& x, int& status) {
  const PureState state = read_state_file(x.state_file);
  const EntropyKind kind = EntropyKind::parse(x.entropy);
  require(x.L >= 1 && x.L <= x.survivors, "--L must lie in 1..survivors");
  const MeasurementEnsemble ens = x.normal ? normal_measurement(state, x.survivors)
                                           : annihilation_measurement(state, x.survivors);
  double margin = 0.0, before = 0.0, after = 0.0;
  bool holds = false, entropy_holds = false;
  if (x.normal) {
    const Spectrum initial = normalized_spectrum(rdm(state, x.L).matrix);
    const Spectrum average = average_spectrum(ens, x.L);
    margin = majorization_compare(initial, average).margin_p_below_q;
    before = entropy(initial, kind);
    for (const auto& b : ens.branches)
      after += b.probability * entropy(branch_spectrum(b.post_state, x.L), kind);
    holds = margin >= -tol::majorization_slack;
    entropy_holds = before >= after - tol::decomposition;
  } else {
    const MajorizationReport r = check_majorization(state, x.survivors, x.L, kind);
    margin = r.min_margin;
    before = r.entropy_before;
    after = r.entropy_after;
    holds = r.holds;
    entropy_holds = r.entropy_holds;
  }
  Table t;
  t.columns = {"quantity", "label", "value"};
  for (const auto& b : ens.branches) t.add({std::string("probability"), b.label, b.probability});
  t.add({std::string("branches"), std::string(), static_cast<long long>(ens.branches.size())});
  t.add({std::string("total_probability"), std::string(), ens.total_probability()});
  t.add({std::string("completeness_residual"), std::string(), ens.completeness_residual});
  t.add({std::string("majorization_margin"), std::string(), margin});
  t.add({std::string("entropy_before"), kind.name(), before});
  t.add({std::string("entropy_after"), kind.name(), after});
  t.add({std::string("monotone"), std::string(), static_cast<long long>(holds && entropy_holds)});
  if (!(holds && entropy_holds)) status = exit_failed;
  return t;
}

/// Copies a state on d0 modes into the leading modes of d0 + extra modes.
PureState pad_modes(const PureState& state, int extra) {
  const int d0 = state.modes();
  const FockSpace big(state.statistics(), d0 + extra, state.particles());
  FockAccumulator acc(big);
  std::vector<int> small(static_cast<std::size_t>(d0));
  std::vector<int> occ(static_cast<std::size_t>(d0 + extra), 0);
  for (const auto& e : state.entries()) {
    state.space().unrank_into(e.key, small);
    std::copy(small.begin(), small.end(), occ.begin());
    acc.add(occ, e.value);
  }
  return make_state(acc.finish());
}

Table run_transfer(const RunConfig& cfg, const Extra& x, int& status) {
  Rng rng(cfg.seed);
  PureState source_state;
  int d0 = x.source_modes;
  if (!x.state_file.empty()) {
    source_state = read_state_file(x.state_file);
    require(d0 == 0 || d0 == source_state.modes(),
            "--source-modes disagrees with the state file");
    d0 = source_state.modes();
  } else {
    require(d0 >= 1 && cfg.N >= 1, "transfer requires --source-modes and --N (or --state)");
    source_state = random_state(parse_statistics(cfg.statistics), d0, cfg.N, rng);
  }
  require(x.target_modes >= 1, "transfer requires --target-modes >= 1");
  const Statistics st = source_state.statistics();
  const int d = d0 + x.target_modes;
  std::vector<int> src(static_cast<std::size_t>(d0)), dst(static_cast<std::size_t>(x.target_modes));
  for (int i = 0; i < d0; ++i) src[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < x.target_modes; ++i) dst[static_cast<std::size_t>(i)] = d0 + i;
  const ModeSubspace source(src, d), target(dst, d);
  const int M = x.survivors;
  require(M >= 1 && M <= source_state.particles(), "--M must lie in 1..N");
  const int rows = static_cast<int>(subspace_configurations(st, target, M).size());
  const int cols = static_cast<int>(subspace_configurations(st, source, M).size());
  require(rows >= 1, "the target subspace cannot hold M particles");
  const int count = x.branches > 0 ? x.branches : (cols + rows - 1) / rows + 1;
  require(count * rows >= cols, "--branches too small for a complete transfer family");
  const std::vector<Matrix> family = random_kraus_family(rows, cols, count, rng);
  const TransferReport r =
      particle_transfer(pad_modes(source_state, x.target_modes), source, target, M, family,
                        EntropyKind::parse(x.entropy));

  Table t;
  t.columns = {"quantity", "index", "value"};
  for (std::size_t b = 0; b < r.branches.size(); ++b) {
    t.add({std::string("probability"), static_cast<long long>(b), r.branches[b].probability});
    t.add({std::string("branch_entropy"), static_cast<long long>(b), r.branches[b].entropy});
  }
  for (std::size_t i = 0; i < r.initial_spectrum.size(); ++i)
    t.add({std::string("initial_spectrum"), static_cast<long long>(i),
           clean(r.initial_spectrum.values[i])});
  t.add({std::string("initial_entropy"), 0LL, r.initial_entropy});
  t.add({std::string("average_entropy"), 0LL, r.average_entropy});
  t.add({std::string("majorization_margin"), 0LL, r.majorization_margin});
  t.add({std::string("completeness_residual"), 0LL, r.completeness_residual});
  const bool ok = r.entropy_bound_holds && r.majorization_holds &&
                  r.completeness_residual <= tol::decomposition;
  t.add({std::string("holds"), 0LL, static_cast<long long>(ok)});
  if (!ok) status = exit_failed;
  return t;
}

Table run_verify(const RunConfig& cfg, const Extra& x, int& status) {
  std::vector<std::string> names;
  if (x.suite == "all") names = verification_suites();
  else names.push_back(x.suite);
  Table t;
  t.columns = {"check", "seed", "instances", "passed", "failures", "min_margin", "details"};
  for (const auto& name : names) {
    const VerificationReport r = run_suite(name, x.instances, cfg.seed);
    std::string details;
    for (std::size_t i = 0; i < r.failures.size() && i < 5; ++i)
      details += (i ? "; " : "") + r.failures[i];
    t.add({r.check, static_cast<long long>(r.seed), static_cast<long long>(r.instances),
           static_cast<long long>(r.passed()), static_cast<long long>(r.failures.size()),
           r.min_margin, details});
    if (!r.passed()) status = exit_failed;
  }
  return t;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s = "schmidtfock";
  for (const auto& a : args) s += " " + a;
  return s;
}

void emit(const RunConfig& cfg, const std::string& body, std::ostream& out) {
  if (cfg.out.empty()) {
    out << body;
    return;
  }
  namespace fs = std::filesystem;
  fs::path target(cfg.out);
  if (fs::is_directory(target) || cfg.out.back() == '/') {
    fs::create_directories(target);
    target /= cfg.command + "." + cfg.format;
  } else if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  std::ofstream f(target, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + target.string());
  f << body;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  Extra x;
  CLI::App app{"Schmidt decompositions of identical-particle states in Fock space"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SCHMIDTFOCK_VERSION));

  const auto add_output = [&](CLI::App* c) {
    c->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--out", cfg.out, "output file, or directory receiving <command>.<format>");
  };
  const auto add_statistics = [&](CLI::App* c) {
    c->add_option("--statistics", cfg.statistics, "boson or fermion")
        ->check(CLI::IsMember({"boson", "bosons", "b", "fermion", "fermions", "f"}));
  };
  const auto add_paired = [&](CLI::App* c) {
    add_statistics(c);
    c->add_option("--n", cfg.n, "pair levels (2n modes)")->required();
    c->add_option("--m", cfg.m, "pairs (N = 2m)")->required();
    c->add_option("--epsilon", x.epsilon, "level spacing");
    c->add_option("--g-grid", cfg.g_grid, "default | log:a:b:count | comma list");
    c->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    c->add_option("--seed", cfg.seed, "recorded in the output header");
    add_output(c);
  };

  auto* basis = app.add_subcommand("basis", "basis dimension or canonical listing");
  add_statistics(basis);
  basis->add_option("--d", cfg.d, "modes")->required();
  basis->add_option("--N", cfg.N, "particles")->required();
  basis->add_flag("--list", x.list, "list every configuration with its rank");
  basis->add_option("--seed", cfg.seed, "recorded in the output header");
  add_output(basis);

  auto* analyze = app.add_subcommand("analyze", "spectra, entropies and Schmidt ranks of a state");
  analyze->add_option("statefile", x.state_file, "JSON state file")->required();
  analyze->add_option("--M", x.M_list, "comma list of M")->required()->delimiter(',');
  analyze->add_option("--subspace", x.subspace, "0-based modes of S for blocked spectra")
      ->delimiter(',');
  analyze->add_option("--sector-tol", x.sector_tol, "amplitude tolerance for the N_S test");
  analyze->add_option("--seed", cfg.seed, "recorded in the output header");
  add_output(analyze);

  auto* sweep_spectrum = app.add_subcommand("sweep-spectrum", "pairing spectra versus g");
  add_paired(sweep_spectrum);
  auto* sweep_entropy = app.add_subcommand("sweep-entropy", "pairing entropies versus g");
  add_paired(sweep_entropy);
  auto* sweep_overlap = app.add_subcommand("sweep-overlap", "truncated-expansion overlaps versus g");
  add_paired(sweep_overlap);
  sweep_overlap->add_option("--k", cfg.truncations, "comma list of truncation orders")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  auto* measure = app.add_subcommand("measure", "post-selected measurement ensemble");
  measure->add_option("statefile", x.state_file, "JSON state file")->required();
  measure->add_option("--survivors", x.survivors, "particles kept")->required();
  measure->add_option("--L", x.L, "order of the compared spectra");
  measure->add_flag("--normal", x.normal, "use the normal-operator measurement");
  measure->add_option("--entropy", x.entropy, "von_neumann or linear");
  measure->add_option("--seed", cfg.seed, "recorded in the output header");
  add_output(measure);

  auto* transfer = app.add_subcommand("transfer", "particle transfer to an empty subspace");
  add_statistics(transfer);
  transfer->add_option("--state", x.state_file, "JSON state file (random state otherwise)");
  transfer->add_option("--source-modes", x.source_modes, "modes holding the state");
  transfer->add_option("--target-modes", x.target_modes, "modes of the empty target")->required();
  transfer->add_option("--N", cfg.N, "particles of the random state");
  transfer->add_option("--M", x.survivors, "particles moved")->required();
  transfer->add_option("--branches", x.branches, "transfer operators in the family");
  transfer->add_option("--entropy", x.entropy, "von_neumann or linear");
  transfer->add_option("--seed", cfg.seed, "random state and family seed");
  add_output(transfer);

  auto* verify = app.add_subcommand("verify", "seeded invariant suites");
  verify->add_option("--suite", x.suite, "suite name or all");
  verify->add_option("--instances", x.instances, "random instances per statistics")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "base seed");
  add_output(verify);

  if (!args.empty() && !args.front().empty() && args.front().front() != '-' &&
      app.get_subcommand_no_throw(args.front()) == nullptr) {
    err << "error: unknown command '" << args.front() << "'\nRun with --help for more information.\n";
    return exit_usage;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    int status = exit_ok;
    Table table;
    if (basis->parsed()) {
      cfg.command = "basis";
      table = run_basis(cfg, x);
    } else if (analyze->parsed()) {
      cfg.command = "analyze";
      table = run_analyze(x);
    } else if (sweep_spectrum->parsed()) {
      cfg.command = "sweep-spectrum";
      table = run_sweep(cfg, x, {Observable::spectrum1, Observable::spectrum2_blocks});
    } else if (sweep_entropy->parsed()) {
      cfg.command = "sweep-entropy";
      table = run_sweep(cfg, x, {Observable::entropy_increments, Observable::block_entropies});
    } else if (sweep_overlap->parsed()) {
      cfg.command = "sweep-overlap";
      table = run_sweep(cfg, x, {Observable::overlaps});
    } else if (measure->parsed()) {
      cfg.command = "measure";
      table = run_measure(x, status);
    } else if (transfer->parsed()) {
      cfg.command = "transfer";
      table = run_transfer(cfg, x, status);
    } else {
      cfg.command = "verify";
      table = run_verify(cfg, x, status);
    }
    const Provenance prov{join_args(args), cfg.seed};
    emit(cfg, cfg.format == "json" ? render_json(table, prov) : render_csv(table, prov), out);
    return status;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failed;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace schmidtfock::cli
