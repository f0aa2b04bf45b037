#include "schmidtfock/pairing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "schmidtfock/errors.hpp"
#include "schmidtfock/rdm.hpp"

namespace schmidtfock {

PairingModel PairingModel::uniform(Statistics statistics, int n, int m, double epsilon, double G) {
  PairingModel model;
  model.statistics = statistics;
  model.n = n;
  model.m = m;
  model.epsilon = epsilon;
  model.coupling = RealMatrix::Constant(std::max(n, 0), std::max(n, 0), G);
  model.validate();
  return model;
}

double PairingModel::level_energy(int k) const {
  return epsilon * (static_cast<double>(k + 1) - 0.5 * static_cast<double>(n + 1));
}

void PairingModel::validate() const {
  if (n < 1) throw InvalidArgument("pairing model needs n >= 1");
  if (m < 0) throw InvalidArgument("pairing model needs m >= 0");
  if (statistics == Statistics::fermion && m > n) {
    throw InvalidArgument("fermion pairing model needs m <= n");
  }
  if (coupling.rows() != n || coupling.cols() != n) {
    throw InvalidArgument("coupling matrix must be n x n");
  }
  if ((coupling - coupling.transpose()).cwiseAbs().maxCoeff() > tol::construction) {
    throw InvalidArgument("coupling matrix must be symmetric");
  }
  if (coupling.minCoeff() < 0.0) throw InvalidArgument("coupling entries must be nonnegative");
}

FockBasis paired_basis(Statistics statistics, int n, int m) {
  if (n < 1) throw InvalidArgument("paired basis needs n >= 1");
  if (statistics == Statistics::fermion && m > n) {
    throw InvalidArgument("fermion paired basis needs m <= n");
  }
  return enumerate_basis(statistics, n, m);
}

PairedFockState embed_pair_configuration(const OccupationVector& pair_occupation) {
  const Statistics st = pair_occupation.statistics();
  const int n = pair_occupation.modes();
  std::vector<int> occ(static_cast<std::size_t>(2 * n), 0);
  double coefficient = 1.0;
  // Rightmost factor acts first: k = n-1 down to 0, kbar before k.
  for (int k = n - 1; k >= 0; --k) {
    double factorial = 1.0;
    for (int rep = 0; rep < pair_occupation[k]; ++rep) {
      coefficient *= *create_in_place(st, occ, n + k);
      coefficient *= *create_in_place(st, occ, k);
      factorial *= rep + 1;
    }
    coefficient /= factorial;
  }
  return {OccupationVector(st, std::move(occ)), coefficient};
}

namespace {

struct EmbeddedBasis {
  FockSpace pair_space;
  FockSpace fock_space;
  std::vector<std::vector<int>> occupations;
  std::vector<std::uint64_t> keys;
  std::vector<double> signs;
};

EmbeddedBasis embed_basis(const FockBasis& basis) {
  EmbeddedBasis e;
  e.pair_space = basis.space();
  e.fock_space = FockSpace(basis.statistics(), 2 * basis.modes(), 2 * basis.particles());
  for (const auto& cfg : basis) {
    PairedFockState p = embed_pair_configuration(cfg);
    e.keys.push_back(e.fock_space.rank(p.occupation));
    e.signs.push_back(p.sign);
    e.occupations.push_back(p.occupation.occupations());
  }
  return e;
}

// Pair configuration of a 2n-mode occupation with n_k == n_kbar for all k.
std::uint64_t pair_rank(const EmbeddedBasis& e, std::span<const int> occ) {
  const int n = e.pair_space.modes();
  std::vector<int> cfg(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int a = occ[static_cast<std::size_t>(k)];
    if (a != occ[static_cast<std::size_t>(n + k)]) {
      throw NumericalError("pairing term left the paired subspace");
    }
    cfg[static_cast<std::size_t>(k)] = a;
  }
  return e.pair_space.rank(cfg);
}

}  // namespace

PureState embed_paired_state(const PairAmplitudes& pa) {
  const EmbeddedBasis e = embed_basis(pa.basis);
  if (static_cast<std::size_t>(pa.amplitudes.size()) != pa.basis.size()) {
    throw InvalidArgument("pair amplitudes do not match their basis");
  }
  std::vector<FockVector::Entry> entries;
  for (std::size_t i = 0; i < pa.basis.size(); ++i) {
    const Complex a = pa.amplitudes[static_cast<Eigen::Index>(i)];
    if (a != Complex(0.0)) entries.push_back({e.keys[i], e.signs[i] * a});
  }
  return make_state(FockVector(e.fock_space, std::move(entries)), false);
}

RealMatrix pairing_hamiltonian(const PairingModel& model) {
  model.validate();
  const FockBasis basis = paired_basis(model.statistics, model.n, model.m);
  const EmbeddedBasis e = embed_basis(basis);
  const Statistics st = model.statistics;
  const int n = model.n;
  const auto dim = static_cast<Eigen::Index>(basis.size());
  RealMatrix h = RealMatrix::Zero(dim, dim);
  std::vector<int> work;
  for (Eigen::Index p = 0; p < dim; ++p) {
    const auto& occ = e.occupations[static_cast<std::size_t>(p)];
    const double sp = e.signs[static_cast<std::size_t>(p)];
    // One-body part: eps_k (c_k^dagger c_k + c_kbar^dagger c_kbar).
    for (int mode = 0; mode < 2 * n; ++mode) {
      work = occ;
      auto a = annihilate_in_place(st, work, mode);
      if (!a) continue;
      auto c = create_in_place(st, work, mode);
      h(p, p) += model.level_energy(mode % n) * (*a) * (*c);
    }
    // Pair term: -G_{kk'} c_k'^dagger c_k'bar^dagger c_kbar c_k.
    for (int k = 0; k < n; ++k) {
      for (int kp = 0; kp < n; ++kp) {
        const double g = model.coupling(k, kp);
        if (g == 0.0) continue;
        work = occ;
        double coef = 1.0;
        bool alive = true;
        for (auto step : {std::pair{false, k}, std::pair{false, n + k}, std::pair{true, n + kp},
                          std::pair{true, kp}}) {
          auto c = step.first ? create_in_place(st, work, step.second)
                              : annihilate_in_place(st, work, step.second);
          if (!c) {
            alive = false;
            break;
          }
          coef *= *c;
        }
        if (!alive) continue;
        const auto q = static_cast<Eigen::Index>(pair_rank(e, work));
        h(q, p) += -g * coef * sp * e.signs[static_cast<std::size_t>(q)];
      }
    }
  }
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > tol::construction * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw NumericalError("pairing Hamiltonian is not symmetric");
  }
  return 0.5 * (h + h.transpose());
}

GroundState ground_state(const PairingModel& model) {
  const RealMatrix h = pairing_hamiltonian(model);
  LowestEigenpair low = lowest_eigenpair(h);
  Eigen::Index imax = 0;
  low.vector.cwiseAbs().maxCoeff(&imax);
  if (low.vector[imax] < 0.0) low.vector = -low.vector;
  GroundState gs;
  gs.energy = low.value;
  gs.state.basis = paired_basis(model.statistics, model.n, model.m);
  gs.state.amplitudes = low.vector.cast<Complex>();
  return gs;
}

PairAmplitudes uniform_paired_state(Statistics statistics, int n, int m) {
  PairAmplitudes pa;
  pa.basis = paired_basis(statistics, n, m);
  const auto dim = static_cast<Eigen::Index>(pa.basis.size());
  pa.amplitudes = Vector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim))));
  return pa;
}

PairAmplitudes projected_bcs_state(Statistics statistics, const std::vector<double>& sigma, int m) {
  if (sigma.empty()) throw InvalidArgument("projected BCS state needs at least one level");
  double total = 0.0;
  for (double s : sigma) {
    if (!(s >= 0.0)) throw InvalidArgument("projected BCS weights must be nonnegative");
    total += s * s;
  }
  if (std::abs(total - 1.0) > tol::identity) {
    throw InvalidArgument("projected BCS weights must satisfy sum sigma^2 = 1");
  }
  PairAmplitudes pa;
  pa.basis = paired_basis(statistics, static_cast<int>(sigma.size()), m);
  pa.amplitudes.resize(static_cast<Eigen::Index>(pa.basis.size()));
  for (std::size_t i = 0; i < pa.basis.size(); ++i) {
    double a = 1.0;
    for (int k = 0; k < pa.basis.modes(); ++k) {
      a *= std::pow(sigma[static_cast<std::size_t>(k)], pa.basis[i][k]);
    }
    pa.amplitudes[static_cast<Eigen::Index>(i)] = a;
  }
  const double norm = pa.amplitudes.norm();
  if (!(norm > 0.0)) throw InvalidArgument("projected BCS weights give the zero state");
  pa.amplitudes /= norm;
  return pa;
}

namespace {

int pair_levels_of(const PureState& state, const std::vector<double>& weights) {
  if (state.modes() % 2 != 0 || static_cast<int>(weights.size()) * 2 != state.modes()) {
    throw InvalidArgument("pair weights must have one entry per level of a 2n-mode state");
  }
  return state.modes() / 2;
}

}  // namespace

double pair_operator_expectation(const PureState& state, const std::vector<double>& weights) {
  const int n = pair_levels_of(state, weights);
  const ModePairing pairing = ModePairing::standard(n);
  FockAccumulator acc(FockSpace(state.statistics(), state.modes(), state.particles() - 2));
  for (int k = 0; k < n; ++k) {
    acc.add(apply_annihilation_product(state.vector(), pairing.pair_occupation(state.statistics(), k)),
            weights[static_cast<std::size_t>(k)]);
  }
  return acc.finish().squared_norm();
}

double pair_expectation_formula(const PureState& state, const std::vector<double>& weights) {
  const int n = pair_levels_of(state, weights);
  const double m = 0.5 * state.particles();
  const Matrix rho1 = rdm(state, 1).matrix;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = weights[static_cast<std::size_t>(k)];
    s += w * w * rho1(k, k).real();
  }
  return m + exchange_sign(state.statistics()) * (m - 1.0) * s;
}

DominanceReport dominance_bounds(const PairAmplitudes& pa) {
  const PureState state = embed_paired_state(pa);
  const int n = pa.pair_levels();
  const double m = pa.pairs();
  const ModeSubspace S = ModeSubspace::leading(n, 2 * n);
  DominanceReport r;
  r.lambda1 = hermitian_eigen(sector_block(state, S, 1, 1).matrix).spectrum.max();
  constexpr double slack = tol::decomposition;
  if (pa.statistics() == Statistics::boson) {
    r.lower = m * (1.0 + (m - 1.0) / n);
    r.upper = std::numeric_limits<double>::infinity();
  } else {
    r.lower = 1.0;
    r.upper = m * (1.0 - (m - 1.0) / n);
  }
  r.holds = r.lambda1 >= r.lower - slack && r.lambda1 <= r.upper + slack;
  return r;
}

Observable parse_observable(std::string_view name) {
  if (name == "spectrum1") return Observable::spectrum1;
  if (name == "spectrum2_blocks") return Observable::spectrum2_blocks;
  if (name == "entropy_increments") return Observable::entropy_increments;
  if (name == "block_entropies") return Observable::block_entropies;
  if (name == "overlaps" || name == "overlap_k") return Observable::overlaps;
  throw InvalidArgument("unknown observable: " + std::string(name));
}

std::vector<double> default_g_grid() {
  std::vector<double> g{0.0};
  constexpr int points = 60;
  for (int i = 0; i < points; ++i) {
    g.push_back(std::pow(10.0, -2.0 + 4.0 * i / (points - 1)));
  }
  return g;
}

std::vector<double> parse_g_grid(std::string_view spec) {
  std::vector<double> g;
  std::string text(spec);
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    if (token == "default") {
      const auto d = default_g_grid();
      g.insert(g.end(), d.begin(), d.end());
    } else if (token.rfind("log:", 0) == 0) {
      double a = 0.0, b = 0.0;
      int count = 0;
      if (std::sscanf(token.c_str(), "log:%lf:%lf:%d", &a, &b, &count) != 3 || a <= 0.0 ||
          b <= 0.0 || count < 1) {
        throw InvalidArgument("malformed log grid token: " + token);
      }
      for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        g.push_back(std::pow(10.0, std::log10(a) + t * (std::log10(b) - std::log10(a))));
      }
    } else {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || v < 0.0) throw InvalidArgument("malformed g value: " + token);
      g.push_back(v);
    }
  }
  if (g.empty()) throw InvalidArgument("empty g grid");
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::size_t SweepTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidArgument("no such column: " + std::string(name));
  return static_cast<std::size_t>(it - columns.begin());
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string SweepTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string SweepTable::to_json() const {
  nlohmann::ordered_json j;
  j["columns"] = columns;
  auto rows_json = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    auto r = nlohmann::ordered_json::array();
    for (double v : row) r.push_back(std::stod(format_number(v)));
    rows_json.push_back(std::move(r));
  }
  j["rows"] = std::move(rows_json);
  return j.dump(2) + "\n";
}

namespace {

std::vector<double> block_spectrum(const Matrix& block) {
  return hermitian_eigen(block).spectrum.values;
}

double block_entropy(const Matrix& block) {
  return entropy(normalized_spectrum(block), EntropyKind::von_neumann());
}

}  // namespace

PairedObservables analyze_ground_state(const PairingModel& model, const GroundState& gs,
                                       const std::vector<std::size_t>& overlap_terms,
                                       bool want_spectra, bool want_entropies) {
  PairedObservables o;
  o.energy = gs.energy;
  const PureState state = embed_paired_state(gs.state);
  const int n = model.n;
  const ModeSubspace S = ModeSubspace::leading(n, 2 * n);
  const ModePairing pairing = ModePairing::standard(n);
  if (want_spectra || want_entropies) {
    const Matrix r1 = model.m >= 1 ? sector_block(state, S, 1, 0).matrix : Matrix();
    const Matrix r2s = model.m >= 2 ? sector_block(state, S, 2, 0).matrix : Matrix();
    const Matrix r2x = model.m >= 1 ? sector_block(state, S, 1, 1).matrix : Matrix();
    const Matrix rc = model.m >= 1 ? collective_pair_block(state, pairing).matrix : Matrix();
    if (want_spectra) {
      if (r1.size()) o.lambda1 = block_spectrum(r1);
      if (r2s.size()) o.lambda2_s = block_spectrum(r2s);
      if (r2x.size()) o.lambda2_ssbar = block_spectrum(r2x);
      if (rc.size()) o.lambda2_c = block_spectrum(rc);
    }
    if (want_entropies) {
      if (r1.size()) o.s1 = block_entropy(r1);
      if (r2s.size()) o.s2_s = block_entropy(r2s);
      if (r2x.size()) o.s2_ssbar = block_entropy(r2x);
      if (rc.size()) o.s2_c = block_entropy(rc);
    }
  }
  for (std::size_t k : overlap_terms) {
    const PureState approx = model.statistics == Statistics::fermion
                                 ? pair_expansion(state, pairing, k)
                                 : sector_reconstruct(state, S, 1, 1, k);
    o.overlaps.push_back(std::abs(state.vector().dot(approx.vector())));
  }
  return o;
}

SweepTable sweep(const PairingModel& model, const SweepOptions& options) {
  model.validate();
  if (options.g_grid.empty()) throw InvalidArgument("sweep needs a nonempty g grid");
  auto wants = [&](Observable o) {
    return std::find(options.observables.begin(), options.observables.end(), o) !=
           options.observables.end();
  };
  const bool spectra1 = wants(Observable::spectrum1);
  const bool spectra2 = wants(Observable::spectrum2_blocks);
  const bool increments = wants(Observable::entropy_increments);
  const bool absolute = wants(Observable::block_entropies);
  const bool overlaps = wants(Observable::overlaps);
  const std::vector<std::size_t> terms = overlaps ? options.overlap_terms : std::vector<std::size_t>{};

  RealMatrix shape = model.coupling;
  if (shape.size() == 0 || shape.maxCoeff() <= 0.0) {
    shape = RealMatrix::Ones(model.n, model.n);
  } else {
    shape /= shape.maxCoeff();
  }
  auto model_at = [&](double g) {
    PairingModel p = model;
    p.coupling = shape * (g * model.epsilon);
    return p;
  };
  auto evaluate = [&](double g, bool entropies) {
    const PairingModel p = model_at(g);
    PairedObservables o = analyze_ground_state(p, ground_state(p), terms, spectra1 || spectra2, entropies);
    o.g = g;
    return o;
  };

  std::vector<double> grid = options.g_grid;
  std::sort(grid.begin(), grid.end());
  std::vector<PairedObservables> results(grid.size());
  std::atomic<std::size_t> next{0};
  std::string first_error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        results[i] = evaluate(grid[i], increments || absolute);
      } catch (const std::exception& e) {
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };
  const int jobs = std::max(1, options.jobs);
  std::vector<std::thread> threads;
  for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failed) throw NumericalError("sweep failed: " + first_error);

  PairedObservables reference;
  if (increments) {
    const PairingModel p0 = model_at(0.0);
    reference = analyze_ground_state(p0, ground_state(p0), {}, false, true);
  }

  SweepTable table;
  table.columns = {"g", "E0"};
  const PairedObservables& shape_row = results.front();
  auto add_columns = [&](const std::string& prefix, std::size_t count) {
    for (std::size_t i = 1; i <= count; ++i) table.columns.push_back(prefix + std::to_string(i));
  };
  if (spectra1) add_columns("lambda1_", shape_row.lambda1.size());
  if (spectra2) {
    add_columns("lambda2_S_", shape_row.lambda2_s.size());
    add_columns("lambda2_SSbar_", shape_row.lambda2_ssbar.size());
    add_columns("lambda2_c_", shape_row.lambda2_c.size());
  }
  if (increments) {
    for (const char* c : {"dS1", "dS2_S", "dS2_SSbar", "dS2_c"}) table.columns.emplace_back(c);
  }
  if (absolute) {
    for (const char* c : {"S1", "S2_S", "S2_SSbar", "S2_c"}) table.columns.emplace_back(c);
  }
  for (std::size_t k : terms) table.columns.push_back("overlap_k" + std::to_string(k));

  for (const auto& o : results) {
    std::vector<double> row{o.g, o.energy};
    if (spectra1) row.insert(row.end(), o.lambda1.begin(), o.lambda1.end());
    if (spectra2) {
      row.insert(row.end(), o.lambda2_s.begin(), o.lambda2_s.end());
      row.insert(row.end(), o.lambda2_ssbar.begin(), o.lambda2_ssbar.end());
      row.insert(row.end(), o.lambda2_c.begin(), o.lambda2_c.end());
    }
    if (increments) {
      row.push_back(o.s1 - reference.s1);
      row.push_back(o.s2_s - reference.s2_s);
      row.push_back(o.s2_ssbar - reference.s2_ssbar);
      row.push_back(o.s2_c - reference.s2_c);
    }
    if (absolute) {
      row.insert(row.end(), {o.s1, o.s2_s, o.s2_ssbar, o.s2_c});
    }
    row.insert(row.end(), o.overlaps.begin(), o.overlaps.end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace schmidtfock
