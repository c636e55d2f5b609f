// Command-line surface: point evaluation, CSV grid emission, identity-check
// suite, and benchmark mode for the Cliffordian special-function library.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cliff/oracles.hpp"
#include "cliff/polynomials.hpp"
#include "cliff/trig.hpp"
#include "cliff/weierstrass.hpp"

using json = nlohmann::json;
using namespace cliff;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitConfig = 1;
constexpr int kExitNearPole = 2;
constexpr int kExitUnconverged = 3;
constexpr int kExitFailedIdentity = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number: '" + item + "'");
    }
    if (pos != item.size())
      throw ConfigError("trailing characters in number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<Paravector> parse_lattice(const std::string& s) {
  std::vector<Paravector> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto v = parse_doubles(item, ',');
    if (v.size() != 4)
      throw ConfigError("each half-period needs 4 comma-separated numbers");
    out.push_back({v[0], v[1], v[2], v[3]});
  }
  return out;
}

Paravector parse_point(const std::string& s) {
  const auto v = parse_doubles(s, ',');
  if (v.size() != 4) throw ConfigError("point needs 4 comma-separated numbers");
  return {v[0], v[1], v[2], v[3]};
}

struct Job {
  std::string function = "zeta";
  std::vector<Paravector> half_periods;
  SumConfig sum;
  Paravector point;
  bool have_point = false;
  MultiIndex alpha{3, 0, 0, 0};
  int omega_index = 0;
  std::string out_path;
  // grid
  std::array<int, 2> grid_free = {0, 1};
  std::array<double, 2> grid_min = {-1.0, -1.0};
  std::array<double, 2> grid_max = {1.0, 1.0};
  std::array<int, 2> grid_n = {16, 16};
  Paravector grid_frozen;
  // check
  std::string suite = "default";
  bool break_sign = false;
  // bench
  int bench_max_workers = 4;
};

void apply_json(Job& j, const json& doc) {
  if (doc.contains("schema_version") &&
      doc.at("schema_version").get<int>() != kSchemaVersion)
    throw ConfigError("unsupported schema_version");
  if (doc.contains("function")) j.function = doc.at("function").get<std::string>();
  if (doc.contains("lattice")) {
    const auto& lat = doc.at("lattice");
    const auto& hp = lat.contains("half_periods") ? lat.at("half_periods") : lat;
    j.half_periods.clear();
    for (const auto& row : hp) {
      if (row.size() != 4) throw ConfigError("half-period must have 4 entries");
      j.half_periods.push_back({row[0].get<double>(), row[1].get<double>(),
                                row[2].get<double>(), row[3].get<double>()});
    }
  }
  if (doc.contains("sum")) {
    const auto& s = doc.at("sum");
    if (s.contains("max_shells")) j.sum.max_shells = s.at("max_shells").get<int>();
    if (s.contains("target_tol")) j.sum.target_tol = s.at("target_tol").get<double>();
    if (s.contains("pairing")) j.sum.pairing = s.at("pairing").get<bool>();
    if (s.contains("compensated")) j.sum.compensated = s.at("compensated").get<bool>();
    if (s.contains("pole_guard")) j.sum.pole_guard = s.at("pole_guard").get<double>();
    if (s.contains("workers")) j.sum.workers = s.at("workers").get<int>();
  }
  if (doc.contains("point")) {
    const auto& p = doc.at("point");
    if (p.size() != 4) throw ConfigError("point must have 4 entries");
    j.point = {p[0].get<double>(), p[1].get<double>(), p[2].get<double>(),
               p[3].get<double>()};
    j.have_point = true;
  }
  if (doc.contains("alpha")) {
    const auto& a = doc.at("alpha");
    if (a.size() != 4) throw ConfigError("alpha must have 4 entries");
    j.alpha = MultiIndex{a[0].get<int>(), a[1].get<int>(), a[2].get<int>(),
                         a[3].get<int>()};
  }
  if (doc.contains("omega_index")) j.omega_index = doc.at("omega_index").get<int>();
  if (doc.contains("out")) j.out_path = doc.at("out").get<std::string>();
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    if (g.contains("free")) {
      j.grid_free = {g.at("free")[0].get<int>(), g.at("free")[1].get<int>()};
    }
    if (g.contains("min"))
      j.grid_min = {g.at("min")[0].get<double>(), g.at("min")[1].get<double>()};
    if (g.contains("max"))
      j.grid_max = {g.at("max")[0].get<double>(), g.at("max")[1].get<double>()};
    if (g.contains("n"))
      j.grid_n = {g.at("n")[0].get<int>(), g.at("n")[1].get<int>()};
    if (g.contains("frozen")) {
      const auto& f = g.at("frozen");
      j.grid_frozen = {f[0].get<double>(), f[1].get<double>(),
                       f[2].get<double>(), f[3].get<double>()};
    }
  }
  if (doc.contains("check")) {
    const auto& c = doc.at("check");
    if (c.contains("suite")) j.suite = c.at("suite").get<std::string>();
    if (c.contains("break_sign")) j.break_sign = c.at("break_sign").get<bool>();
  }
  if (doc.contains("bench") && doc.at("bench").contains("max_workers"))
    j.bench_max_workers = doc.at("bench").at("max_workers").get<int>();
}

Lattice make_lattice(const Job& j) {
  if (j.half_periods.empty())
    throw ConfigError("this command needs a lattice (--lattice or config)");
  return Lattice(static_cast<int>(j.half_periods.size()), j.half_periods);
}

std::ostream& open_out(const Job& j, std::ofstream& file) {
  if (j.out_path.empty()) return std::cout;
  file.open(j.out_path);
  if (!file) throw ConfigError("cannot open output file: " + j.out_path);
  return file;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- eval -------------------------------------------------------------------

bool is_trig(const std::string& f) {
  return f == "exp" || f == "sin" || f == "cos" || f == "cotan";
}

Paravector eval_trig(const std::string& f, const Paravector& x) {
  if (f == "exp") return exp_cl(x);
  if (f == "sin") return sin_cl(x);
  if (f == "cos") return cos_cl(x);
  return cotan_cl(x);
}

int cmd_eval(const Job& j) {
  if (!j.have_point) throw ConfigError("eval needs --point");
  EvalResult r;
  if (is_trig(j.function)) {
    r.value = eval_trig(j.function, j.point);
  } else if (j.function == "P") {
    r.value = eval_P(j.alpha, j.point);
  } else if (j.function == "S") {
    r.value = eval_S(j.alpha, j.point);
  } else if (j.function == "zeta") {
    r = zeta_full(make_lattice(j), j.point, j.sum);
  } else if (j.function == "p_alpha") {
    r = p_alpha(make_lattice(j), j.alpha, j.point, j.sum);
  } else if (j.function == "d0_p0") {
    r = d0_p0(make_lattice(j), j.point, j.sum);
  } else if (j.function == "eta") {
    const Lattice L = make_lattice(j);
    if (j.omega_index < 0 || j.omega_index >= L.rank())
      throw ConfigError("omega_index out of range");
    r = eta(L, j.point, L.omega(j.omega_index), j.sum);
  } else {
    throw ConfigError("unknown function: " + j.function);
  }
  std::ofstream file;
  std::ostream& os = open_out(j, file);
  os << "value " << fmt17(r.value.x0) << " " << fmt17(r.value.x1) << " "
     << fmt17(r.value.x2) << " " << fmt17(r.value.x3) << "\n"
     << "shells " << r.shells << "\n"
     << "tail_bound " << fmt17(r.bound) << "\n";
  return 0;
}

// ---- grid -------------------------------------------------------------------

int cmd_grid(const Job& j) {
  if (j.grid_free[0] == j.grid_free[1] || j.grid_free[0] < 0 ||
      j.grid_free[0] > 3 || j.grid_free[1] < 0 || j.grid_free[1] > 3)
    throw ConfigError("grid free coordinates must be two distinct indices 0..3");
  if (j.grid_n[0] < 1 || j.grid_n[1] < 1)
    throw ConfigError("grid sizes must be positive");

  const bool lattice_fn = !is_trig(j.function) && j.function != "P" &&
                          j.function != "S";
  std::optional<Lattice> L;
  if (lattice_fn) L.emplace(make_lattice(j));

  auto coord = [&](int axis, int i) {
    const int n = j.grid_n[static_cast<std::size_t>(axis)];
    const double a = j.grid_min[static_cast<std::size_t>(axis)];
    const double b = j.grid_max[static_cast<std::size_t>(axis)];
    return n == 1 ? a : a + (b - a) * i / (n - 1);
  };
  std::vector<Paravector> pts;
  pts.reserve(static_cast<std::size_t>(j.grid_n[0] * j.grid_n[1]));
  for (int i = 0; i < j.grid_n[0]; ++i)
    for (int k = 0; k < j.grid_n[1]; ++k) {
      Paravector p = j.grid_frozen;
      double* c[4] = {&p.x0, &p.x1, &p.x2, &p.x3};
      *c[j.grid_free[0]] = coord(0, i);
      *c[j.grid_free[1]] = coord(1, k);
      pts.push_back(p);
    }

  std::vector<EvalResult> res(pts.size());
  std::vector<bool> near_pole(pts.size(), false);

  if (!lattice_fn) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (is_trig(j.function)) {
        try {
          res[i].value = eval_trig(j.function, pts[i]);
        } catch (const Error&) {
          near_pole[i] = true;
        }
      } else if (j.function == "P") {
        res[i].value = eval_P(j.alpha, pts[i]);
      } else {
        try {
          res[i].value = eval_S(j.alpha, pts[i]);
        } catch (const ZeroNormError&) {
          near_pole[i] = true;
        }
      }
    }
  } else if (j.function == "zeta") {
    SumConfig sc = j.sum.resolved(L->rank());
    sc.error_on_unconverged = false;  // the bound column reports accuracy
    std::vector<LatticeTask> tasks;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (L->nearest_point_distance(pts[i]) <= sc.pole_guard)
        near_pole[i] = true;
      else {
        tasks.push_back({pts[i], {}});
        idx.push_back(i);
      }
    }
    if (!tasks.empty()) {
      const auto batch = zeta_batch(*L, tasks, sc);
      for (std::size_t t = 0; t < idx.size(); ++t) res[idx[t]] = batch[t];
    }
  } else if (j.function == "p_alpha" || j.function == "d0_p0") {
    SumConfig sc = j.sum.resolved(L->rank());
    sc.error_on_unconverged = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      try {
        res[i] = j.function == "p_alpha"
                     ? p_alpha(*L, j.alpha, pts[i], sc)
                     : d0_p0(*L, pts[i], sc);
      } catch (const NearPoleError&) {
        near_pole[i] = true;
      }
    }
  } else {
    throw ConfigError("function not supported on grids: " + j.function);
  }

  std::ofstream file;
  std::ostream& os = open_out(j, file);
  os << "x0,x1,x2,x3,f0,f1,f2,f3,tail_bound,flag\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Paravector& p = pts[i];
    os << fmt17(p.x0) << "," << fmt17(p.x1) << "," << fmt17(p.x2) << ","
       << fmt17(p.x3) << ",";
    if (near_pole[i]) {
      os << "nan,nan,nan,nan," << fmt17(0.0) << ",near_pole\n";
    } else {
      const Paravector& v = res[i].value;
      os << fmt17(v.x0) << "," << fmt17(v.x1) << "," << fmt17(v.x2) << ","
         << fmt17(v.x3) << "," << fmt17(res[i].bound) << ",ok\n";
    }
  }
  return 0;
}

// ---- check ------------------------------------------------------------------

struct Identity {
  std::string name;
  double residual;
  double tolerance;
  bool pass;
};

void add(std::vector<Identity>& ids, const std::string& name, double residual,
         double tolerance) {
  ids.push_back({name, residual, tolerance, residual <= tolerance});
}

void suite_parity(std::vector<Identity>& ids, bool broken) {
  Lattice L(2, {{1.1, 0, 0, 0}, {0.2, 0.9, 0, 0}});
  SumConfig c;
  c.target_tol = 1e-5;
  c.max_shells = 2000;
  const double flip = broken ? 1.0 : -1.0;
  int n = 0;
  for (const Paravector& x :
       {Paravector{0.31, 0.12, -0.2, 0.05}, Paravector{-0.4, 0.33, 0.1, -0.27}}) {
    const Paravector a = zeta(L, x, c);
    const Paravector b = zeta(L, -1.0 * x, c);
    add(ids, "zeta2_odd_" + std::to_string(n++), (b - flip * a).norm(), 1e-14);
  }
}

void suite_quasi_periodicity(std::vector<Identity>& ids, bool broken) {
  Lattice L(2, {{1.0, 0, 0, 0}, {0.15, 1.05, 0, 0}});
  SumConfig c;
  c.target_tol = 1e-5;
  c.max_shells = 2000;
  const double flip = broken ? -1.0 : 1.0;
  int n = 0;
  for (const Paravector& x :
       {Paravector{0.2, 0.31, 0.1, -0.05}, Paravector{-0.33, 0.12, 0.0, 0.4}}) {
    for (int jw = 0; jw < 2; ++jw) {
      const auto a = zeta_full(L, x + 2.0 * L.omega(jw), c);
      const auto b = zeta_full(L, x, c);
      const auto e = eta(L, x, L.omega(jw), c);
      const double res = (a.value - b.value - flip * e.value).norm();
      add(ids, "zeta2_quasi_period_" + std::to_string(n++), res,
          10.0 * (a.bound + b.bound + e.bound));
    }
  }
}

// The zeta_3 tail bound decays only like 1/K, so 10x the combined bounds
// at a desk-scale shell budget is far above the observed residuals (~1e-3)
// and would also admit a flipped sign (~3).  The suite caps the tolerance
// so the negative control stays falsifiable.
double capped(double bound_based) { return std::min(bound_based, 0.05); }

void suite_eta_laws(std::vector<Identity>& ids, bool broken) {
  Lattice L(3, {{1.0, 0, 0, 0}, {0, 1.05, 0, 0}, {0, 0, 0.95, 0}});
  SumConfig c;
  c.target_tol = 1e-300;  // run the full shell budget
  c.max_shells = 80;
  c.error_on_unconverged = false;
  const Paravector x{0.1, 0.05, -0.08, 0.03};
  const Paravector w = L.omega(0);
  const double flip = broken ? -1.0 : 1.0;
  const auto e1 = eta(L, x, w, c);
  const auto e1n = eta(L, x, -1.0 * w, c);
  add(ids, "eta_odd_in_omega", (e1n.value + flip * e1.value).norm(),
      capped(10.0 * (e1.bound + e1n.bound)));
  const auto e2 = eta(L, -1.0 * x, w, c);
  add(ids, "eta_even_in_x", (e2.value - e1.value).norm(),
      capped(10.0 * (e1.bound + e2.bound)));
  const auto e3 = eta(L, -1.0 * x, -1.0 * w, c);
  add(ids, "eta_odd_in_both", (e3.value + e1.value).norm(),
      capped(10.0 * (e1.bound + e3.bound)));
  const auto ew = eta(L, w, w, c);
  const auto zw = zeta_full(L, w, c);
  add(ids, "eta_at_omega", (ew.value - 2.0 * zw.value).norm(),
      capped(10.0 * (ew.bound + 2.0 * zw.bound)));
  const Paravector w1 = L.omega(0), w2 = L.omega(1), w12 = -1.0 * (w1 + w2);
  const auto s1 = eta(L, x, w1, c);
  const auto s2 = eta(L, x, w2, c);
  const auto s3 = eta(L, x, w12, c);
  add(ids, "eta_addition_law", (s1.value + s2.value + s3.value).norm(),
      capped(10.0 * (s1.bound + s2.bound + s3.bound)));
}

Lattice default_rank4() {
  return Lattice(4, {{1.0, 0, 0, 0},
                     {0.1, 1.1, 0, 0},
                     {0, 0.2, 0.95, 0},
                     {0.05, 0, 0.1, 1.05}});
}

void suite_p_periodicity(std::vector<Identity>& ids, bool broken) {
  Lattice L = default_rank4();
  SumConfig c;
  c.max_shells = 10;
  c.target_tol = 1e-12;
  c.error_on_unconverged = false;
  const Paravector x{0.21, 0.13, -0.17, 0.08};
  const double flip = broken ? -1.0 : 1.0;
  const auto a = p_alpha(L, {3, 0, 0, 0}, x, c);
  const auto b = p_alpha(L, {3, 0, 0, 0}, -1.0 * x, c);
  add(ids, "p_even", (b.value - flip * a.value).norm(),
      10.0 * (a.bound + b.bound));
  const auto d = p_alpha(L, {3, 0, 0, 0}, x + 2.0 * L.omega(2), c);
  add(ids, "p_periodic", (d.value - a.value).norm(), 10.0 * (a.bound + d.bound));
  const auto pd = p_alpha_direct(L, x, c);
  add(ids, "p_direct_vs_derivative", (pd.value - a.value).norm(),
      10.0 * (a.bound + pd.bound));
}

void suite_vertex_zeros(std::vector<Identity>& ids, bool broken) {
  Lattice L = default_rank4();
  SumConfig c;
  c.max_shells = 10;
  c.target_tol = 1e-12;
  c.error_on_unconverged = false;
  for (int mask = 1; mask < 16; ++mask) {
    Paravector v;
    for (int jb = 0; jb < 4; ++jb)
      if (mask & (1 << jb)) v += L.omega(jb);
    // the negative control probes a displaced point, which is not a zero
    if (broken) v += 0.3 * L.omega(0);
    const auto r = d0_p0(L, v, c);
    add(ids, "vertex_zero_" + std::to_string(mask), r.value.norm(),
        capped(10.0 * r.bound));
  }
}

void suite_oracle(std::vector<Identity>& ids, bool broken) {
  const double flip = broken ? -1.0 : 1.0;
  {
    Lattice L(1, {{M_PI / 2, 0, 0, 0}});
    SumConfig c;
    c.target_tol = 1e-5;
    c.max_shells = 200000;
    const double t = 0.37;
    const auto r = zeta_full(L, {t, 0, 0, 0}, c);
    const double oracle = oracles::classical_cot_partial_fractions(t, r.shells);
    add(ids, "zeta1_vs_cot_partial_fractions",
        std::abs(r.value.x0 - flip * oracle), 10.0 * r.bound);
  }
  {
    Lattice L(2, {{1.1, 0, 0, 0}, {0.2, 0.9, 0, 0}});
    SumConfig c;
    c.target_tol = 1e-7;
    c.max_shells = 3000;
    const Paravector x{0.3, 0.21, 0, 0};
    const auto r = zeta_full(L, x, c);
    const auto oz = oracles::classical_weierstrass_zeta(
        {x.x0, x.x1}, {1.1, 0.0}, {0.2, 0.9}, 4000);
    const double res = std::hypot(r.value.x0 - flip * oz.real(),
                                  r.value.x1 - flip * oz.imag());
    add(ids, "zeta2_vs_classical_zeta", res, 10.0 * r.bound);
  }
}

int cmd_check(const Job& j) {
  std::vector<Identity> ids;
  const std::string& s = j.suite;
  const bool all = s == "default" || s == "all";
  if (all || s == "parity") suite_parity(ids, j.break_sign);
  if (all || s == "quasi_periodicity") suite_quasi_periodicity(ids, j.break_sign);
  if (all || s == "eta_laws") suite_eta_laws(ids, j.break_sign);
  if (all || s == "p_periodicity") suite_p_periodicity(ids, j.break_sign);
  if (all || s == "vertex_zeros") suite_vertex_zeros(ids, j.break_sign);
  if (all || s == "oracle") suite_oracle(ids, j.break_sign);
  if (ids.empty()) throw ConfigError("unknown suite: " + s);

  bool all_pass = true;
  json items = json::array();
  for (const auto& id : ids) {
    all_pass = all_pass && id.pass;
    items.push_back({{"name", id.name},
                     {"residual", id.residual},
                     {"tolerance", id.tolerance},
                     {"pass", id.pass}});
  }
  const json report = {{"schema_version", kSchemaVersion},
                       {"suite", s},
                       {"identities", items},
                       {"all_pass", all_pass}};
  std::ofstream file;
  std::ostream& os = open_out(j, file);
  os << report.dump(2) << "\n";
  return all_pass ? 0 : kExitFailedIdentity;
}

// ---- bench ------------------------------------------------------------------

int cmd_bench(const Job& j) {
  Lattice L = j.half_periods.empty()
                  ? Lattice(2, {{1.0, 0, 0, 0}, {0.15, 1.05, 0, 0}})
                  : make_lattice(j);
  const Paravector x =
      j.have_point ? j.point : Paravector{0.2, 0.31, 0.1, -0.05};
  std::ofstream file;
  std::ostream& os = open_out(j, file);

  os << "# error-vs-work: strategy, shells, points, seconds, points_per_sec, "
        "tail_bound, value_drift\n";
  const Paravector ref = [&] {
    SumConfig c;
    c.target_tol = 1e-12;
    c.max_shells = 4000;
    c.error_on_unconverged = false;
    return zeta(L, x, c);
  }();
  for (const bool paired : {true, false})
    for (const bool comp : {true, false}) {
      for (int K : {8, 16, 32, 64, 128, 256, 512}) {
        if (K > 64 && !(paired && comp) && K > 128) continue;
        SumConfig c;
        c.max_shells = K;
        c.target_tol = 1e-300;
        c.pairing = paired;
        c.compensated = comp;
        c.error_on_unconverged = false;
        long pts = 0;
        for (int k = 1; k <= K; ++k) pts += shell_count(L.rank(), k);
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = zeta_full(L, x, c);
        const auto t1 = std::chrono::steady_clock::now();
        const double sec = std::chrono::duration<double>(t1 - t0).count();
        os << (paired ? "paired" : "unpaired") << "_"
           << (comp ? "compensated" : "plain") << "," << K << "," << pts << ","
           << fmt17(sec) << "," << fmt17(pts / std::max(sec, 1e-12)) << ","
           << fmt17(r.bound) << "," << fmt17((r.value - ref).norm()) << "\n";
      }
    }

  os << "# workers: values must match worker count 1 bitwise\n";
  SumConfig c;
  c.max_shells = 64;
  c.target_tol = 1e-300;
  c.error_on_unconverged = false;
  c.workers = 1;
  const Paravector base = zeta(L, x, c);
  for (int w = 2; w <= j.bench_max_workers; ++w) {
    c.workers = w;
    const Paravector v = zeta(L, x, c);
    const bool same = v.x0 == base.x0 && v.x1 == base.x1 && v.x2 == base.x2 &&
                      v.x3 == base.x3;
    os << "workers," << w << "," << (same ? "identical" : "MISMATCH") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cliffordian special functions: zeta_N, p_alpha, eta, trig"};
  app.require_subcommand(1);

  std::string config_path, function, lattice_str, point_str, alpha_str, out;
  int shells = -1, workers = -1;
  double tol = -1;
  for (auto* sub : {app.add_subcommand("eval", "evaluate a function at a point"),
                    app.add_subcommand("grid", "emit a CSV grid over a 2-plane"),
                    app.add_subcommand("check", "run identity-check suites"),
                    app.add_subcommand("bench", "summation-strategy benchmark")}) {
    sub->add_option("--config", config_path, "JSON job config");
    sub->add_option("--function", function, "function selector");
    sub->add_option("--lattice", lattice_str,
                    "half-periods 'a,b,c,d;e,f,g,h;...'");
    sub->add_option("--point", point_str, "evaluation point 'x0,x1,x2,x3'");
    sub->add_option("--alpha", alpha_str, "multi-index 'a0,a1,a2,a3'");
    sub->add_option("--shells", shells, "max shells");
    sub->add_option("--tol", tol, "target tail tolerance");
    sub->add_option("--out", out, "output file (default stdout)");
    sub->add_option("--workers", workers, "worker threads");
  }
  std::string suite = "default";
  bool break_sign = false;
  app.get_subcommand("check")->add_option("--suite", suite, "suite name");
  app.get_subcommand("check")
      ->add_flag("--break-sign", break_sign,
                 "negative control: flip a sign convention");

  CLI11_PARSE(app, argc, argv);

  try {
    Job j;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot open config: " + config_path);
      json doc;
      try {
        doc = json::parse(f);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
      }
      apply_json(j, doc);
    }
    if (!function.empty()) j.function = function;
    if (!lattice_str.empty()) j.half_periods = parse_lattice(lattice_str);
    if (!point_str.empty()) {
      j.point = parse_point(point_str);
      j.have_point = true;
    }
    if (!alpha_str.empty()) {
      const auto a = parse_doubles(alpha_str, ',');
      if (a.size() != 4) throw ConfigError("alpha needs 4 entries");
      j.alpha = MultiIndex{static_cast<int>(a[0]), static_cast<int>(a[1]),
                           static_cast<int>(a[2]), static_cast<int>(a[3])};
    }
    if (shells >= 0) j.sum.max_shells = shells;
    if (tol >= 0) j.sum.target_tol = tol;
    if (workers >= 0) j.sum.workers = workers;
    if (!out.empty()) j.out_path = out;
    j.suite = suite;
    j.break_sign = break_sign;

    if (app.got_subcommand("eval")) return cmd_eval(j);
    if (app.got_subcommand("grid")) return cmd_grid(j);
    if (app.got_subcommand("check")) return cmd_check(j);
    return cmd_bench(j);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NearPoleError& e) {
    std::cerr << "near pole: " << e.what() << "\n";
    return kExitNearPole;
  } catch (const UnconvergedError& e) {
    std::cerr << "unconverged: " << e.what() << " (bound " << e.bound
              << " at " << e.shells << " shells)\n";
    return kExitUnconverged;
  } catch (const RankError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BadIndexError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
