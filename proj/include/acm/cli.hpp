#pragma once

// Command-line front end. `run` parses arguments, dispatches to a verb and
// maps failures to exit codes: 0 success, 2 invalid input, 3 mathematical
// obstruction (NontrivialClass, GapTooSmall).

#include <algorithm>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "acm/canonical.hpp"
#include "acm/invariants.hpp"
#include "acm/io.hpp"
#include "acm/models.hpp"
#include "acm/oracles.hpp"
#include "acm/relations.hpp"
#include "acm/wannier.hpp"

namespace acm::cli {

namespace fs = std::filesystem;
using io::json;

struct Options {
  std::string kind;
  Eigen::Index n = 16;
  int L = 12;
  std::string flux = "0";
  double fermi = 0.0;
  int orbitals = 1;
  double stagger = 0.0;
  double noise = 0.0;
  std::string cls;
  std::uint64_t seed = 1;
  double gap_tol = 1e-6;
  double tol = 1e-8;
  double commutator_limit = 0.125;
  std::string relation = "sphere";
  std::string in;
  std::string out;
  std::string config;
  std::string format = "json";
  int threads = 0;
};

namespace detail {

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

inline fs::path require_dir(const std::string& dir, std::string_view flag) {
  if (dir.empty()) throw Error(Errc::InvalidArgument, std::string(flag) + " is required");
  return fs::path(dir);
}

inline std::string csv_row(const json& j) {
  std::ostringstream head, row;
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    if (value.is_object() || value.is_array()) continue;
    if (!first) {
      head << ',';
      row << ',';
    }
    first = false;
    head << key;
    row << (value.is_string() ? value.get<std::string>() : value.dump());
  }
  return head.str() + '\n' + row.str() + '\n';
}

inline void report(std::ostream& out, const json& j, const Options& o) {
  if (o.format == "csv") out << csv_row(j);
  else emit(out, j);
}

inline SymmetryClass class_or(const Options& o, SymmetryClass fallback) {
  return o.cls.empty() ? fallback : parse_symmetry_class(o.cls);
}

inline LatticeSpec lattice(const Options& o) {
  LatticeSpec spec;
  if (!o.config.empty()) spec = io::lattice_from_config(io::read_config(o.config));
  else {
    spec.L = o.L;
    spec.flux = io::parse_number(o.flux);
    spec.fermi_level = o.fermi;
    spec.orbitals = o.orbitals;
    spec.stagger = o.stagger;
  }
  spec.validate();
  return spec;
}

/// X1, X2, … present in a directory, in order.
inline std::vector<ComplexMatrix> read_position_list(const fs::path& dir) {
  std::vector<ComplexMatrix> out;
  for (int r = 1; io::has_role(dir, "X" + std::to_string(r)); ++r)
    out.push_back(io::read_role(dir, "X" + std::to_string(r)));
  if (out.empty()) throw Error(Errc::InvalidArgument, "no X1.json in '" + dir.string() + "'");
  return out;
}

inline bool has_all(const fs::path& dir, std::initializer_list<std::string_view> roles) {
  return std::all_of(roles.begin(), roles.end(), [&](auto r) { return io::has_role(dir, r); });
}

// ---- gen ----------------------------------------------------------------

inline int gen(const Options& o, std::ostream& out) {
  const fs::path dir = require_dir(o.out, "--out");
  json wrote = json::array();
  auto put = [&](std::string_view role, const ComplexMatrix& M) {
    io::write_role(dir, role, M);
    wrote.push_back(std::string(role) + ".json");
  };
  json info = json::object();
  if (o.kind == "voiculescu" || o.kind == "doubled") {
    UnitaryPair p = voiculescu(o.n);
    if (o.kind == "doubled") p = selfdual_double(p.U1, p.U2);
    put("U1", p.U1);
    put("U2", p.U2);
    info["commutator"] = operator_norm(commutator(p.U1, p.U2));
  } else if (o.kind == "harper") {
    const LatticeSpec spec = lattice(o);
    const HarperModel m = harper_projection(spec);
    const PositionSet X = torus_positions(spec);
    put("P", m.P);
    put("Hamiltonian", m.H);
    put("X1", X.X1);
    put("X2", X.X2);
    put("X3", X.X3);
    put("X4", X.X4);
    info = {{"spectral_gap", m.spectral_gap}, {"rank", m.rank}, {"commutator_delta", m.commutator_delta}};
  } else if (o.kind == "torus") {
    LatticeSpec spec = lattice(o);
    const PositionSet X = torus_positions(spec);
    put("X1", X.X1);
    put("X2", X.X2);
    put("X3", X.X3);
    put("X4", X.X4);
  } else if (o.kind == "commuting-triple") {
    const SphereTriple t = commuting_triple(o.n, class_or(o, SymmetryClass::Symmetric), o.noise, o.seed);
    put("H1", t.H1);
    put("H2", t.H2);
    put("H3", t.H3);
    info["sphere_residual"] = sphere_residual(t.H1, t.H2, t.H3).delta;
  }
  info["wrote"] = wrote;
  emit(out, info);
  return 0;
}

// ---- residual -----------------------------------------------------------

inline int residual(const Options& o, std::ostream& out) {
  const fs::path dir = require_dir(o.in, "--in");
  RelationReport r;
  if (o.relation == "sphere")
    r = sphere_residual(io::read_role(dir, "H1"), io::read_role(dir, "H2"), io::read_role(dir, "H3"));
  else if (o.relation == "torus2")
    r = torus2_residual(io::read_role(dir, "U1"), io::read_role(dir, "U2"));
  else if (o.relation == "torus4")
    r = torus4_residual(io::read_role(dir, "X1"), io::read_role(dir, "X2"), io::read_role(dir, "X3"),
                        io::read_role(dir, "X4"));
  else
    r = disk_residual(io::read_role(dir, "X1"), io::read_role(dir, "X2"));
  json j = io::to_json(r);
  if (o.format == "csv") {
    out << "term,value\n";
    for (const auto& [label, value] : r.per_term) out << label << ',' << json(value).dump() << '\n';
  } else {
    emit(out, j);
  }
  return 0;
}

// ---- index --------------------------------------------------------------

inline IndexReport compute_index(const Options& o, const fs::path& dir, std::string& input) {
  const bool pf = o.kind == "pfbott";
  if (has_all(dir, {"U1", "U2"})) {
    input = "unitaries";
    UnitaryIndexOptions uo;
    uo.gap_tol = o.gap_tol;
    const ComplexMatrix U1 = io::read_role(dir, "U1"), U2 = io::read_role(dir, "U2");
    return pf ? pf_bott_unitaries(U1, U2, default_circle_functions(), uo)
              : bott_index_unitaries(U1, U2, default_circle_functions(), uo);
  }
  if (has_all(dir, {"H1", "H2", "H3"})) {
    input = "triple";
    IndexOptions io_;
    io_.gap_tol = o.gap_tol;
    const ComplexMatrix H1 = io::read_role(dir, "H1"), H2 = io::read_role(dir, "H2"),
                        H3 = io::read_role(dir, "H3");
    return pf ? pf_bott_index(H1, H2, H3, io_) : bott_index(H1, H2, H3, io_);
  }
  if (has_all(dir, {"P", "X1", "X2", "X3", "X4"})) {
    input = "compressed";
    CompressedIndexOptions co;
    co.gap_tol = o.gap_tol;
    co.seed = o.seed;
    co.commutator_limit = o.commutator_limit;
    const SymmetryClass cls = pf ? SymmetryClass::SelfDual : class_or(o, SymmetryClass::Complex);
    if (pf && !o.cls.empty() && cls != parse_symmetry_class(o.cls))
      throw Error(Errc::InvalidArgument, "pfbott requires --class selfdual");
    return compressed_index(io::read_role(dir, "P"), io::read_role(dir, "X1"), io::read_role(dir, "X2"),
                            io::read_role(dir, "X3"), io::read_role(dir, "X4"), cls, co);
  }
  throw Error(Errc::InvalidArgument, "'" + dir.string() +
                                         "' holds none of {U1,U2}, {H1,H2,H3}, {P,X1..X4}");
}

inline int index(const Options& o, std::ostream& out) {
  const fs::path dir = require_dir(o.in, "--in");
  std::string input;
  const IndexReport r = compute_index(o, dir, input);
  json j{{"index", o.kind}, {"input", input}};
  j.update(io::to_json(r));
  report(out, j, o);
  return 0;
}

// ---- canonical ----------------------------------------------------------

inline ComplexMatrix load_structured_sign(const fs::path& dir) {
  if (io::has_role(dir, "S")) return io::read_role(dir, "S");
  if (has_all(dir, {"H1", "H2", "H3"}))
    return hermitian_part(polar(bott_matrix(io::read_role(dir, "H1"), io::read_role(dir, "H2"),
                                            io::read_role(dir, "H3"))));
  if (has_all(dir, {"U1", "U2"})) {
    const SphereTriple t = torus_to_sphere(polar(io::read_role(dir, "U1")), polar(io::read_role(dir, "U2")));
    return hermitian_part(polar(bott_matrix(t.H1, t.H2, t.H3)));
  }
  throw Error(Errc::InvalidArgument, "'" + dir.string() + "' holds none of S, H1..H3, U1..U2");
}

inline int canonical(const Options& o, std::ostream& out) {
  const fs::path dir = require_dir(o.in, "--in");
  const fs::path dest = o.out.empty() ? fs::path() : fs::path(o.out);
  auto save = [&](std::string_view role, const ComplexMatrix& M) -> std::string {
    if (dest.empty()) return "";
    io::write_role(dest, role, M);
    return io::role_path(dest, role).string();
  };
  if (o.kind == "diag") {
    const ComplexMatrix X = io::has_role(dir, "X") ? io::read_role(dir, "X") : io::read_role(dir, "S");
    const AntiSelfDualDiag d = diag_anti_selfdual(X);
    const Eigen::Index N = d.D.size();
    ComplexMatrix DD = ComplexMatrix::Zero(2 * N, 2 * N);
    for (Eigen::Index j = 0; j < N; ++j) {
      DD(j, j) = d.D(j);
      DD(N + j, N + j) = -d.D(j);
    }
    emit(out, {{"D", std::vector<double>(d.D.data(), d.D.data() + N)},
               {"reconstruction", operator_norm(X - d.W * DD * d.W.adjoint())},
               {"symplectic_defect", operator_norm(dual(d.W) - d.W.adjoint())},
               {"witness", save("W", d.W)}});
    return 0;
  }
  if (o.kind == "extract") {
    CommutingPairOptions po;
    po.seed = o.seed;
    const CommutingPair p =
        commuting_pair_from_sphere(io::read_role(dir, "H1"), io::read_role(dir, "H2"),
                                   io::read_role(dir, "H3"), class_or(o, SymmetryClass::Symmetric), po);
    json j{{"commutator", p.commutator},   {"tau_defect", p.tau_defect},
           {"reconstruction", p.reconstruction}, {"witness_bound", p.witness_bound},
           {"perturbations", p.perturbations}};
    if (!dest.empty()) {
      j["U"] = save("U", p.U);
      j["K"] = save("K", p.K);
    }
    report(out, j, o);
    return 0;
  }
  const ComplexMatrix S = load_structured_sign(dir);
  WitnessReport w;
  if (o.kind == "quaternion") w = k2_quaternion_witness(S);
  else if (o.kind == "real") w = k2_real_witness(S);
  else w = k2_twisted_witness(S);
  report(out, io::to_json(w, save("W", w.W)), o);
  return 0;
}

// ---- wannier ------------------------------------------------------------

inline int wannier(const Options& o, std::ostream& out) {
  const fs::path dir = require_dir(o.in, "--in");
  if (o.kind == "spread") {
    const PositionList X = read_position_list(dir);
    const ComplexMatrix B = io::has_role(dir, "B") ? io::read_role(dir, "B") : identity(X.front().rows());
    out << io::spread_csv(spread(X, B));
    return 0;
  }
  if (o.kind == "compress") {
    const PositionList X = read_position_list(dir);
    const Compression c = compress_positions(io::read_role(dir, "P"), X, class_or(o, SymmetryClass::Complex), o.seed);
    if (!o.out.empty()) {
      io::write_role(o.out, "W", c.W);
      for (std::size_t r = 0; r < c.X.size(); ++r) io::write_role(o.out, "X" + std::to_string(r + 1), c.X[r]);
    }
    json j{{"delta", c.delta}, {"spread_budget", c.spread_budget}, {"max_norm", c.max_norm},
           {"rank", c.W.cols()}};
    j["residual"] = io::detail::finite_or_null(c.residual);
    report(out, j, o);
    return 0;
  }
  const PositionList Y = read_position_list(dir);
  const EigenbasisResult e = eigenbasis_commuting(Y, o.tol, o.seed);
  if (!o.out.empty()) io::write_role(o.out, "B", e.basis);
  out << io::spread_csv(spread(Y, e.basis));
  return 0;
}

// ---- sweep --------------------------------------------------------------

struct SweepPoint {
  std::string model;
  double n = 0, L = 0, flux = 0, fermi = 0, noise = 0;
};

inline std::string fmt(double x) {
  if (!std::isfinite(x)) return "";
  return json(x).dump();
}

inline std::string sweep_row(const SweepPoint& p, const io::Config& c) {
  std::ostringstream row;
  row << p.model << ',' << fmt(p.n) << ',' << fmt(p.L) << ',' << fmt(p.flux) << ',' << fmt(p.fermi)
      << ',' << fmt(p.noise) << ',';
  const auto t0 = std::chrono::steady_clock::now();
  double delta = NAN, gap = NAN, pair_comm = NAN, pair_rec = NAN;
  std::string value, error;
  const auto get = [&](const std::string& key, const std::string& fallback) {
    auto it = c.find(key);
    return it == c.end() ? fallback : it->second;
  };
  try {
    const double gap_tol = io::parse_number(get("gap_tol", "1e-6"));
    const auto seed = static_cast<std::uint64_t>(io::parse_number(get("seed", "1")));
    const std::string cls_name = get("class", "");
    if (p.model == "voiculescu" || p.model == "doubled") {
      UnitaryPair u = voiculescu(static_cast<Eigen::Index>(p.n));
      UnitaryIndexOptions uo;
      uo.gap_tol = gap_tol;
      IndexReport r;
      if (p.model == "doubled") {
        u = selfdual_double(u.U1, u.U2);
        r = pf_bott_unitaries(u.U1, u.U2, default_circle_functions(), uo);
      } else {
        r = bott_index_unitaries(u.U1, u.U2, default_circle_functions(), uo);
      }
      delta = r.input_residual;
      gap = r.gap;
      value = std::to_string(r.value);
    } else if (p.model == "harper") {
      LatticeSpec spec;
      spec.L = static_cast<int>(p.L);
      spec.flux = p.flux;
      spec.fermi_level = p.fermi;
      spec.orbitals = static_cast<int>(io::parse_number(get("orbitals", "1")));
      spec.stagger = io::parse_number(get("stagger", "0"));
      const HarperModel m = harper_projection(spec);
      const PositionSet X = torus_positions(spec);
      CompressedIndexOptions co;
      co.gap_tol = gap_tol;
      co.seed = seed;
      co.commutator_limit = io::parse_number(get("commutator_limit", "0.125"));
      const SymmetryClass cls = cls_name.empty()
                                    ? (spec.orbitals == 2 ? SymmetryClass::SelfDual : SymmetryClass::Complex)
                                    : parse_symmetry_class(cls_name);
      delta = m.commutator_delta;
      const IndexReport r = compressed_index(m.P, X.X1, X.X2, X.X3, X.X4, cls, co);
      gap = r.gap;
      value = std::to_string(r.value);
    } else if (p.model == "triple") {
      const SymmetryClass cls = cls_name.empty() ? SymmetryClass::Symmetric : parse_symmetry_class(cls_name);
      const SphereTriple t = commuting_triple(static_cast<Eigen::Index>(p.n), cls, p.noise, seed);
      delta = sphere_residual(t.H1, t.H2, t.H3).delta;
      CommutingPairOptions po;
      po.seed = seed;
      const CommutingPair cp = commuting_pair_from_sphere(t.H1, t.H2, t.H3, cls, po);
      pair_comm = cp.commutator;
      pair_rec = cp.reconstruction;
    } else {
      throw Error(Errc::InvalidArgument, "unknown model '" + p.model + "'");
    }
  } catch (const Error& e) {
    error = std::string(to_string(e.code()));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  row << fmt(delta) << ',' << value << ',' << fmt(gap) << ',' << fmt(pair_comm) << ','
      << fmt(pair_rec) << ',' << fmt(seconds) << ',' << error << '\n';
  return row.str();
}

inline std::vector<SweepPoint> sweep_grid(const io::Config& c) {
  auto it = c.find("model");
  if (it == c.end()) throw Error(Errc::ParseError, "sweep config: missing 'model'");
  const std::string model = io::trim(it->second);
  std::vector<SweepPoint> grid;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (model == "voiculescu" || model == "doubled") {
    for (double n : io::number_list(c, "n", {4, 8, 16, 32, 64, 128}))
      grid.push_back({model, n, nan, nan, nan, nan});
  } else if (model == "harper") {
    for (double L : io::number_list(c, "L", {12}))
      for (double f : io::number_list(c, "flux", {0.0}))
        for (double e : io::number_list(c, "fermi", {0.0})) grid.push_back({model, nan, L, f, e, nan});
  } else if (model == "triple") {
    for (double n : io::number_list(c, "n", {12}))
      for (double eta : io::number_list(c, "noise", {1e-1, 1e-2, 1e-3}))
        grid.push_back({model, n, nan, nan, nan, eta});
  } else {
    throw Error(Errc::ParseError, "sweep config: unknown model '" + model + "'");
  }
  return grid;
}

inline const char* sweep_header() {
  return "model,n,L,flux,fermi,noise,delta,value,gap,pair_commutator,pair_reconstruction,seconds,error\n";
}

/// Grid points run on a pool of `threads` workers; rows keep grid order.
inline std::string run_sweep(const io::Config& c, int threads) {
  const std::vector<SweepPoint> grid = sweep_grid(c);
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::string> rows(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) rows[i] = sweep_row(grid[i], c);
  };
  std::vector<std::future<void>> pool;
  for (int t = 0; t < threads; ++t) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  std::string out = sweep_header();
  for (const auto& r : rows) out += r;
  return out;
}

inline int sweep(const Options& o, std::ostream& out) {
  if (o.config.empty()) throw Error(Errc::InvalidArgument, "--config is required");
  const std::string csv = run_sweep(io::read_config(o.config), o.threads);
  if (o.out.empty()) out << csv;
  else io::write_text(o.out, csv);
  return 0;
}

// ---- selftest -----------------------------------------------------------

inline int selftest(const Options& o, std::ostream& out) {
  Rng rng(o.seed);
  int failures = 0;
  auto check = [&](const std::string& name, double value, double limit) {
    const bool ok = value <= limit;
    if (!ok) ++failures;
    out << (ok ? "ok   " : "FAIL ") << name << " = " << value << " (limit " << limit << ")\n";
  };
  double pf_err = 0.0;
  for (int size = 2; size <= 10; size += 2)
    for (int k = 0; k < 10; ++k) {
      const ComplexMatrix R = random_real_skew(size, rng).cast<cplx>();
      const double a = pfaffian_real_skew(R), b = pfaffian_combinatorial(R).real();
      pf_err = std::max(pf_err, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
  check("pfaffian vs matching expansion", pf_err, 1e-10);
  double polar_err = 0.0;
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix A = gaussian_complex(12, 12, rng) + 4.0 * identity(12);
    polar_err = std::max(polar_err, operator_norm(polar(A) - oracle::newton_polar(A)));
  }
  check("polar vs Newton iteration", polar_err, 1e-10);
  double eig_err = 0.0;
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix H = random_hermitian(16, rng);
    eig_err = std::max(eig_err, operator_norm(H - reconstruct(herm_eig(H))));
  }
  check("eigendecomposition reconstruction", eig_err, 1e-10);
  double diag_err = 0.0;
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix M = random_hermitian(16, rng);
    const ComplexMatrix X = 0.5 * (M - dual(M));
    const AntiSelfDualDiag d = diag_anti_selfdual(X);
    ComplexMatrix DD = ComplexMatrix::Zero(16, 16);
    for (int j = 0; j < 8; ++j) {
      DD(j, j) = d.D(j);
      DD(8 + j, 8 + j) = -d.D(j);
    }
    diag_err = std::max(diag_err, operator_norm(X - d.W * DD * d.W.adjoint()));
  }
  check("symplectic diagonalization reconstruction", diag_err, 1e-9);
  const UnitaryPair v = voiculescu(16);
  check("Bott index of the 16x16 clock/shift pair minus 1",
        std::abs(bott_index_unitaries(v.U1, v.U2).value - 1), 0.0);
  out << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Almost commuting matrices: indices, structured witnesses and Wannier spreads", "acm"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all");

  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_lattice = [&](CLI::App* s) {
    s->add_option("--L", o.L, "Lattice side length");
    s->add_option("--flux", o.flux, "Flux per plaquette, e.g. 1/3");
    s->add_option("--fermi", o.fermi, "Fermi level");
    s->add_option("--orbitals", o.orbitals, "1, or 2 for the self-dual double");
    s->add_option("--stagger", o.stagger, "Staggered on-site potential");
    s->add_option("--config", o.config, "key=value lattice configuration file");
  };
  const auto classes = CLI::IsMember({"complex", "symmetric", "selfdual"});

  auto* gen = app.add_subcommand("gen", "Generate example matrices");
  gen->add_option("kind", o.kind)->required()->check(
      CLI::IsMember({"voiculescu", "doubled", "harper", "torus", "commuting-triple"}));
  gen->add_option("--n", o.n, "Matrix size");
  add_lattice(gen);
  gen->add_option("--noise", o.noise, "Noise norm for commuting-triple");
  gen->add_option("--class", o.cls, "Symmetry class")->check(classes);
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--out", o.out, "Output directory")->required();

  auto* res = app.add_subcommand("residual", "Relation residuals of stored matrices");
  res->add_option("--relation", o.relation)->check(CLI::IsMember({"sphere", "torus2", "torus4", "disk"}));
  res->add_option("--in", o.in, "Input directory")->required();
  add_format(res);

  auto* idx = app.add_subcommand("index", "Bott or Pfaffian-Bott index");
  idx->add_option("kind", o.kind)->required()->check(CLI::IsMember({"bott", "pfbott"}));
  idx->add_option("--in", o.in, "Input directory")->required();
  idx->add_option("--class", o.cls, "Class for compressed positions")->check(classes);
  idx->add_option("--gap-tol", o.gap_tol, "Spectral gap tolerance");
  idx->add_option("--seed", o.seed, "Seed for the isometry onto the range of P");
  idx->add_option("--commutator-limit", o.commutator_limit, "Largest accepted ||[P, X_r]||");
  add_format(idx);

  auto* can = app.add_subcommand("canonical", "Structured canonical forms and witnesses");
  can->add_option("kind", o.kind)->required()->check(
      CLI::IsMember({"diag", "quaternion", "real", "twisted", "extract"}));
  can->add_option("--in", o.in, "Input directory")->required();
  can->add_option("--out", o.out, "Directory for witness matrices");
  can->add_option("--class", o.cls, "Class for extract")->check(classes);
  can->add_option("--seed", o.seed, "Seed for perturbations");
  add_format(can);

  auto* wan = app.add_subcommand("wannier", "Wannier spreads, compression, localized bases");
  wan->add_option("kind", o.kind)->required()->check(CLI::IsMember({"spread", "compress", "eigenbasis"}));
  wan->add_option("--in", o.in, "Input directory")->required();
  wan->add_option("--out", o.out, "Output directory");
  wan->add_option("--class", o.cls, "Class for compress")->check(classes);
  wan->add_option("--seed", o.seed, "Random seed");
  wan->add_option("--tol", o.tol, "Commutator tolerance for eigenbasis");
  add_format(wan);

  auto* swp = app.add_subcommand("sweep", "Parameter sweep to CSV");
  swp->add_option("--config", o.config, "key=value grid file")->required();
  swp->add_option("--out", o.out, "CSV file (default stdout)");
  swp->add_option("--threads", o.threads, "Worker count (default: hardware)");

  auto* self = app.add_subcommand("selftest", "Oracle cross-checks");
  self->add_option("--seed", o.seed, "Random seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return detail::gen(o, out);
    if (res->parsed()) return detail::residual(o, out);
    if (idx->parsed()) return detail::index(o, out);
    if (can->parsed()) return detail::canonical(o, out);
    if (wan->parsed()) return detail::wannier(o, out);
    if (swp->parsed()) return detail::sweep(o, out);
    return detail::selftest(o, out);
  } catch (const Error& e) {
    err << (is_obstruction(e.code()) ? "obstruction: " : "error: ") << e.what() << '\n';
    return is_obstruction(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace acm::cli
