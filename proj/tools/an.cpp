// an: command-line front end for the A_n(V) window computations.
#include "CLI11.hpp"
#include "acceptance.hpp"
#include "zhu/io.hpp"
#include "zhu/parallel.hpp"
#include "zhu/semisimple.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>

using namespace zhu;

namespace {

constexpr const char* kSchema = "zhu-report/1";

struct Common {
  std::string voa = "heisenberg";
  std::string field = "Q";
  int dmax = Voa::kDefaultDmax;
  int quotient_level = 0;
  std::string out;
  bool no_timings = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--voa", c.voa, "heisenberg, virasoro:<c>, or a presentation file")->capture_default_str();
  app->add_option("--field", c.field, "Q or Fp:<p>")->capture_default_str();
  app->add_option("--dmax", c.dmax, "degree cutoff of the presentation")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--quotient-level", c.quotient_level,
                  "quotient by the singular vectors of the vacuum module up to this level")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--out", c.out, "write the report here instead of stdout");
  app->add_flag("--no-timings", c.no_timings, "omit timings, making the report byte-reproducible");
}

Voa load_voa(const Common& c) {
  Voa v;
  if (c.voa == "heisenberg" || c.voa.rfind("virasoro:", 0) == 0) {
    v = builtin_voa(c.voa, Field::parse(c.field), c.dmax);
  } else {
    v = presentation_from_json(read_json_file(c.voa), c.dmax);
    if (v.field() != Field::parse(c.field))
      throw InputError(c.voa + ": file field " + v.field().to_string() + " differs from --field " + c.field);
  }
  if (c.quotient_level > 0) {
    std::vector<State> sv;
    for (int l = 1; l <= c.quotient_level && l <= v.dmax(); ++l)
      for (auto& s : find_singular_vectors(v, l)) sv.push_back(std::move(s));
    v = v.quotient(sv);
  }
  return v;
}

using Clock = std::chrono::steady_clock;

class Report {
 public:
  Report(std::string command, const Common& c) : c_(c), start_(Clock::now()) {
    j_["schema"] = kSchema;
    j_["command"] = std::move(command);
    j_["config"] = {{"voa", c.voa}, {"field", c.field}, {"dmax", c.dmax}, {"quotient_level", c.quotient_level}};
    j_["verdicts"] = Json::array();
    j_["dims"] = Json::object();
    j_["sweeps"] = Json::object();
    j_["caveats"] = {{"window_not_proof", false}, {"field_too_small", false}, {"shrinking_dims", false}};
    j_["timings"] = Json::object();
  }

  Json& config() { return j_["config"]; }
  Json& dims() { return j_["dims"]; }
  Json& sweeps() { return j_["sweeps"]; }
  Json& data() { return j_["data"]; }
  void caveat(const char* name) { j_["caveats"][name] = true; }

  void verdict(const std::string& check, bool pass, std::size_t count, std::vector<std::string> failures = {}) {
    ok_ = ok_ && pass;
    j_["verdicts"].push_back({{"check", check}, {"pass", pass}, {"cases", count}, {"failures", std::move(failures)}});
  }
  void lap(const std::string& name) {
    const auto now = Clock::now();
    j_["timings"][name] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

  int finish() {
    j_["timings"]["total"] = std::chrono::duration<double>(Clock::now() - start_).count();
    j_["timings"]["threads"] = thread_budget();
    j_["all_pass"] = ok_;
    if (c_.no_timings) j_.erase("timings");
    const std::string text = dump_json(j_);
    if (c_.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(c_.out, std::ios::binary);
      if (!f) throw InputError(c_.out + ": cannot write");
      f << text;
    }
    return ok_ ? 0 : 1;
  }

 private:
  Json j_;
  const Common& c_;
  Clock::time_point start_, last_ = Clock::now();
  bool ok_ = true;
};

std::vector<State> basis_states(const Voa& v, int lo, int hi) {
  std::vector<State> out;
  for (int d = lo; d <= std::min(hi, v.dmax()); ++d)
    for (const auto& m : v.basis(d)) out.push_back(State::of(v.field(), m));
  return out;
}

std::string lbl(const Voa& v, const State& s) { return s.is_zero() ? "0" : v.label(s.terms().begin()->first); }

void require_window(const Voa& v, int D) {
  if (D < 0) throw CLI::ValidationError("--window", "must be nonnegative");
  if (D > v.dmax()) throw CLI::ValidationError("--window", "exceeds --dmax (" + std::to_string(v.dmax()) + ")");
}

/// Failure collector keeping the first few messages.
struct Cases {
  std::size_t count = 0;
  std::vector<std::string> failures;
  bool ok = true;
  void add(bool pass, const std::string& what) {
    ++count;
    if (!pass) {
      ok = false;
      if (failures.size() < 20) failures.push_back(what);
    }
  }
};

Json an_window_json(const AnWindow& A) {
  Json reps = Json::array();
  for (std::size_t i = 0; i < A.dim(); ++i) reps.push_back(A.rep_label(i));
  Json j;
  j["dim"] = A.dim();
  j["O_n_dim"] = A.on.span.dim();
  j["ambient_dim"] = A.on.coords.size();
  j["representatives"] = reps;
  j["products_closed"] = A.closed();
  j["s_values"] = A.on.s_values;
  j["s_dims"] = A.on.s_dims;
  j["s_stabilized_at"] = A.on.stabilized_at ? Json(*A.on.stabilized_at) : Json();
  j["negative_s_grew"] = A.on.negative_s_grew;
  return j;
}

// compute ------------------------------------------------------------------

struct ComputeOpts {
  int n = 0, window = 4, sweep_lo = -1, sweep_hi = -1, smin = 0;
  std::size_t patience = 3;
};

int run_compute(const Common& c, const ComputeOpts& o) {
  Report r("compute", c);
  r.config()["n"] = o.n;
  r.config()["window"] = o.window;
  const Voa v = load_voa(c);
  require_window(v, o.window);
  WindowOptions wo;
  wo.patience = o.patience;
  wo.smin = o.smin;
  r.config()["smin"] = o.smin;
  auto A = an_window(v, o.n, o.window, wo);
  r.lap("window");
  r.dims()["A_n_window"] = an_window_json(A);
  r.caveat("window_not_proof");
  r.verdict("identity", A.identity_ok, 1);
  r.verdict("omega_central", A.omega_central_ok, 1);
  if (o.sweep_lo >= 0) {
    if (o.sweep_hi < o.sweep_lo) throw CLI::ValidationError("--sweep-hi", "must be at least --sweep-lo");
    require_window(v, o.sweep_hi);
    const auto dims = window_dim_sweep(v, o.n, o.sweep_lo, o.sweep_hi, wo);
    const auto at = stabilization_detect(dims, o.patience);
    r.sweeps()["window"] = {{"D_from", o.sweep_lo},
                            {"D_to", o.sweep_hi},
                            {"dims", dims},
                            {"patience", o.patience},
                            {"stabilized_at_D", at ? Json(o.sweep_lo + static_cast<int>(*at)) : Json()}};
    r.lap("sweep");
  }
  return r.finish();
}

// check --------------------------------------------------------------------

struct CheckOpts {
  std::vector<std::string> suites;
  int n = 0, window = 6, max_degree = 3;
};

const std::set<std::string> kSuites{"lemma31", "absorption", "annihilation", "surjection", "phi"};

int run_check(const Common& c, const CheckOpts& o) {
  Report r("check", c);
  r.config()["n"] = o.n;
  r.config()["window"] = o.window;
  r.config()["max_degree"] = o.max_degree;
  r.config()["suites"] = o.suites;
  const Voa v = load_voa(c);
  require_window(v, o.window);
  const auto w = build_On_window(v, o.n, o.window);
  r.dims()["O_n_window"] = w.span.dim();
  r.caveat("window_not_proof");
  r.lap("window");
  const auto st = basis_states(v, 0, o.max_degree);
  const int D = o.window;
  for (const auto& suite : o.suites) {
    Cases cs;
    if (suite == "lemma31") {
      for (const auto& a : st)
        for (const auto& b : st)
          if (*v.degree(a) + *v.degree(b) + 2 * o.n <= D) cs.add(check_lemma31(w, a, b).ok(), lbl(v, a) + ", " + lbl(v, b));
    } else if (suite == "absorption") {
      for (int t = 0; t <= 2; ++t)
        for (int s = 0; s <= t; ++s) {
          const CircleParams p{o.n, s, t};
          for (const auto& a : st)
            for (const auto& b : st)
              for (const auto& x : st)
                if (absorption_degree(*v.degree(a), *v.degree(b), *v.degree(x), p) <= D)
                  cs.add(check_absorption(w, a, b, x, p), lbl(v, a) + ", " + lbl(v, b) + ", " + lbl(v, x) +
                                                              " s=" + std::to_string(s) + " t=" + std::to_string(t));
        }
    } else if (suite == "annihilation") {
      VacuumModule m(v, std::min(v.dmax(), D + o.n));
      for (std::size_t i = 0; i < w.generators.size(); ++i) {
        const auto& g = w.generators[i];
        const State x = w.generator_value(g);
        for (int k = 0; k <= o.n; ++k) {
          const Matrix op = o_operator(v, x, m, k);
          cs.add(op.is_zero(), "generator " + std::to_string(i) + " on level " + std::to_string(k));
          if (g.kind == WindowGenerator::Kind::Circle)
            cs.add(o_circle_expansion(v, State::of(v.field(), g.a), State::of(v.field(), g.b), g.p, m, k) == op,
                   "closed form, generator " + std::to_string(i) + " on level " + std::to_string(k));
        }
      }
    } else if (suite == "surjection") {
      std::vector<AnWindow> tower;
      for (int k = o.n; k >= 0; --k) tower.push_back(an_window(v, k, D));
      Json dims = Json::array();
      for (const auto& A : tower) dims.push_back(A.dim());
      r.dims()["A_tower_n_down_to_0"] = dims;
      for (std::size_t i = 0; i + 1 < tower.size(); ++i) {
        const auto& hi = tower[i];
        const auto& lo = tower[i + 1];
        cs.add(surjection_check(hi, lo).ok(), "A_" + std::to_string(hi.n()) + " -> A_" + std::to_string(lo.n()));
        if (i + 2 < tower.size())
          cs.add(class_map(lo, tower[i + 2]) * class_map(hi, lo) == class_map(hi, tower[i + 2]),
                 "composite differs from the direct map from A_" + std::to_string(hi.n()));
      }
    } else if (suite == "phi") {
      for (const auto& a : st)
        for (const auto& b : st) {
          if (*v.degree(a) + *v.degree(b) + 2 * o.n > D) continue;
          try {
            cs.add(check_phi_product(w, a, b), lbl(v, a) + ", " + lbl(v, b));
          } catch (const DividedPowerUndefined&) {
            r.caveat("field_too_small");
          }
        }
    }
    r.verdict(suite, cs.ok, cs.count, cs.failures);
    r.lap(suite);
  }
  return r.finish();
}

// semisimple ---------------------------------------------------------------

int run_semisimple(const Common& c, int n, int window) {
  Report r("semisimple", c);
  r.config()["n"] = n;
  r.config()["window"] = window;
  const Voa v = load_voa(c);
  require_window(v, window);
  auto A = an_window(v, n, window);
  r.dims()["A_n_window"] = an_window_json(A);
  r.caveat("window_not_proof");
  r.lap("window");
  Algebra alg;
  try {
    alg = algebra_from_window(A);
  } catch (const WindowNotClosed& e) {
    r.verdict("window_closed", false, 1, {e.what()});
    return r.finish();
  }
  r.verdict("window_closed", true, 1);
  const auto rep = semisimple_analyze(alg);
  if (rep.field_too_small) r.caveat("field_too_small");
  r.data()["radical_dim"] = rep.radical_dim;
  r.data()["radical_method"] = rep.radical_method;
  r.data()["blocks"] = rep.blocks;
  r.data()["commutative"] = alg.commutative();
  if (const auto roots = field_roots(characteristic_polynomial(alg.left(A.omega)), v.field())) {
    std::set<std::string> eig;
    for (const auto& x : *roots) eig.insert(x.to_string());
    r.data()["omega_eigenvalues"] = eig;
  }
  r.verdict("semisimple", rep.semisimple(), 1);
  r.lap("analysis");
  return r.finish();
}

// verma --------------------------------------------------------------------

struct VermaOpts {
  int n = 0, levels = 4, window = -1, fidelity = -1;
  std::string module;
};

int run_verma(const Common& c, const VermaOpts& o) {
  Report r("verma", c);
  const Voa v = load_voa(c);
  const int D = o.window >= 0 ? o.window : std::min(v.dmax(), 2 * o.n + 6);
  const int G = o.fidelity >= 0 ? o.fidelity : o.levels;
  if (o.levels < o.n) throw CLI::ValidationError("--levels", "must be at least --n");
  if (G < 1) throw CLI::ValidationError("--fidelity", "must be positive");
  require_window(v, D);
  r.config()["n"] = o.n;
  r.config()["levels"] = o.levels;
  r.config()["window"] = D;
  r.config()["fidelity"] = G;
  r.config()["module"] = o.module;
  auto A = an_window(v, o.n, D);
  r.caveat("window_not_proof");
  const AnModule U = module_from_json(read_json_file(o.module), A);
  const auto bad = U.check(A);
  r.verdict("U_is_A_n_module", bad.empty(), 1, bad);
  r.lap("window");

  InducedModule M(v, U, o.n, o.levels, G);
  std::vector<std::size_t> bar;
  for (int k = 0; k <= o.levels; ++k) bar.push_back(M.level_dim(k));
  const auto W = w_closure(M, G, &A);
  const auto J = radical_J(M, W);
  std::vector<std::size_t> mdims;
  for (int k = 0; k <= o.levels; ++k) mdims.push_back(bar[k] - W.levels[k].dim());
  r.dims()["barM"] = bar;
  r.dims()["W"] = W.dims();
  r.dims()["M"] = mdims;
  r.dims()["J"] = J.dims();
  try {
    r.dims()["L"] = ln_quotient(M, J).dims;
    r.verdict("J_meets_U_trivially", true, 1);
  } catch (const std::logic_error& e) {
    r.verdict("J_meets_U_trivially", false, 1, {e.what()});
  }
  r.lap("quotients");

  // lambda: the scalar by which L(0) acts on the lowest level
  const Matrix l0 = o_operator(v, v.omega(), M, 0);
  bool scalar = l0.rows() > 0;
  for (std::size_t i = 0; i < l0.rows() && scalar; ++i)
    for (std::size_t j = 0; j < l0.cols(); ++j)
      if (l0(i, j) != (i == j ? l0(0, 0) : v.field().zero())) scalar = false;
  r.data()["lambda"] = scalar ? Json(l0(0, 0).to_string()) : Json();

  // Omega_n of M, swept over the probe bound; a change in the last step
  // means the probes may not have converged
  Json sweep = Json::array();
  std::vector<std::size_t> prev, last;
  for (int g = 1; g <= G; ++g) {
    prev = last;
    last = omega_n(M, W, o.n, g).dims();
    for (std::size_t k = 0; k < last.size(); ++k) last[k] -= W.levels[k].dim();
    sweep.push_back({{"probe_degree", g}, {"dims", last}});
  }
  r.dims()["Omega_n"] = last;
  r.sweeps()["Omega_n_probe_degree"] = sweep;
  if (!prev.empty() && prev != last) r.caveat("shrinking_dims");
  r.lap("omega");
  return r.finish();
}

// liealg -------------------------------------------------------------------

LoopCombo parse_mode(const Voa& v, const std::string& text) {
  // "<state label>@<m>", e.g. "a(-1)@2"
  const auto at = text.rfind('@');
  if (at == std::string::npos) throw CLI::ValidationError("--bracket", "expected <label>@<m>, got '" + text + "'");
  long m = 0;
  try {
    m = std::stol(text.substr(at + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--bracket", "bad mode index in '" + text + "'");
  }
  return LoopCombo::of({State::of(v.field(), v.parse_label(text.substr(0, at))), m});
}

struct LieOpts {
  std::vector<std::string> bracket;
  int fidelity = 8, max_degree = 3;
  long max_mode = 2;
};

int run_liealg(const Common& c, const LieOpts& o) {
  Report r("liealg", c);
  r.config()["fidelity"] = o.fidelity;
  r.config()["max_degree"] = o.max_degree;
  r.config()["max_mode"] = o.max_mode;
  const Voa v = load_voa(c);
  if (o.fidelity > v.dmax()) throw CLI::ValidationError("--fidelity", "exceeds --dmax");
  LoopAlgebra L(v, o.fidelity);
  if (!o.bracket.empty()) {
    if (o.bracket.size() != 2) throw CLI::ValidationError("--bracket", "takes exactly two modes");
    const auto x = parse_mode(v, o.bracket[0]), y = parse_mode(v, o.bracket[1]);
    r.config()["bracket"] = o.bracket;
    r.data()["bracket"] = L.label(L.bracket(x, y));
  }
  std::vector<LoopCombo> xs;
  for (const auto& a : basis_states(v, 1, o.max_degree))
    for (long m = -o.max_mode; m <= o.max_mode; ++m) {
      auto x = L.reduce(LoopCombo::of({a, m}));
      if (!x.is_zero()) xs.push_back(x);
    }
  Cases anti, jacobi;
  for (const auto& x : xs)
    for (const auto& y : xs) anti.add((L.bracket(x, y) + L.bracket(y, x)).is_zero(), L.label(x) + ", " + L.label(y));
  for (const auto& x : xs)
    for (const auto& y : xs)
      for (const auto& z : xs) {
        const auto j = L.bracket(x, L.bracket(y, z)) + L.bracket(y, L.bracket(z, x)) + L.bracket(z, L.bracket(x, y));
        jacobi.add(j.is_zero(), L.label(x) + ", " + L.label(y) + ", " + L.label(z));
      }
  r.verdict("antisymmetry", anti.ok, anti.count, anti.failures);
  r.verdict("jacobi", jacobi.ok, jacobi.count, jacobi.failures);
  r.lap("checks");
  return r.finish();
}

// acceptance ---------------------------------------------------------------

int run_acceptance(const Common& c) {
  Json crits = Json::array();
  bool ok = true;
  acceptance::run_all([&](const acceptance::Criterion& cr) {
    std::cerr << acceptance::summary_line(cr) << std::endl;
    crits.push_back(acceptance::to_json(cr, !c.no_timings));
    ok = ok && cr.pass;
  });
  Json j;
  j["schema"] = kSchema;
  j["command"] = "acceptance";
  j["criteria"] = crits;
  j["all_pass"] = ok;
  const std::string text = dump_json(j);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    f << text;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact windowed computations of A_n(V) for vertex operator algebras"};
  app.require_subcommand(1);

  Common common;

  ComputeOpts co;
  auto* compute = app.add_subcommand("compute", "A_n window dimension, representatives and sweeps");
  add_common(compute, common);
  compute->add_option("--n", co.n)->check(CLI::NonNegativeNumber);
  compute->add_option("--window", co.window, "degree window D")->capture_default_str();
  compute->add_option("--sweep-lo", co.sweep_lo, "also sweep D from here");
  compute->add_option("--sweep-hi", co.sweep_hi, "up to here");
  compute->add_option("--patience", co.patience)->check(CLI::PositiveNumber);
  compute->add_option("--smin", co.smin, "smallest s in circle products (negative values are diagnostic)");

  CheckOpts ko;
  auto* check = app.add_subcommand("check", "identity checks inside a window");
  add_common(check, common);
  check->add_option("--suite", ko.suites, "lemma31, absorption, annihilation, surjection, phi")
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember(kSuites));
  check->add_option("--n", ko.n)->check(CLI::NonNegativeNumber);
  check->add_option("--window", ko.window)->capture_default_str();
  check->add_option("--max-degree", ko.max_degree, "largest degree of basis states tried")->capture_default_str();

  int ss_n = 0, ss_window = 8;
  auto* semisimple = app.add_subcommand("semisimple", "radical and block structure of a closed window");
  add_common(semisimple, common);
  semisimple->add_option("--n", ss_n)->check(CLI::NonNegativeNumber);
  semisimple->add_option("--window", ss_window)->capture_default_str();

  VermaOpts vo;
  auto* verma = app.add_subcommand("verma", "modules induced from an A_n module file");
  add_common(verma, common);
  verma->add_option("--n", vo.n)->check(CLI::NonNegativeNumber);
  verma->add_option("--module", vo.module, "U-file: {\"dim\": d, \"action\": {label: matrix}}")->required();
  verma->add_option("--levels", vo.levels)->check(CLI::NonNegativeNumber)->capture_default_str();
  verma->add_option("--window", vo.window, "window used for A_n (default 2n + 6)");
  verma->add_option("--fidelity", vo.fidelity, "degree bound G for relations and probes (default: levels)");

  LieOpts lo;
  auto* liealg = app.add_subcommand("liealg", "brackets in the loop algebra of V");
  add_common(liealg, common);
  liealg->add_option("--bracket", lo.bracket, "two modes <label>@<m>, comma separated")->delimiter(',');
  liealg->add_option("--fidelity", lo.fidelity)->capture_default_str();
  liealg->add_option("--max-degree", lo.max_degree)->capture_default_str();
  liealg->add_option("--max-mode", lo.max_mode)->capture_default_str();

  std::string builtin_name;
  auto* emit = app.add_subcommand("emit-builtin", "print a built-in presentation");
  emit->add_option("name", builtin_name, "heisenberg or virasoro:<c>")->required();
  emit->add_option("--field", common.field)->capture_default_str();
  emit->add_option("--dmax", common.dmax)->check(CLI::PositiveNumber)->capture_default_str();
  emit->add_option("--out", common.out);

  auto* acc = app.add_subcommand("acceptance", "run the acceptance criteria");
  acc->add_option("--out", common.out);
  acc->add_flag("--no-timings", common.no_timings);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*compute) return run_compute(common, co);
    if (*check) return run_check(common, ko);
    if (*semisimple) return run_semisimple(common, ss_n, ss_window);
    if (*verma) return run_verma(common, vo);
    if (*liealg) return run_liealg(common, lo);
    if (*emit) {
      const std::string text = dump_json(presentation_to_json(builtin_voa(builtin_name, Field::parse(common.field), common.dmax)));
      if (common.out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(common.out, std::ios::binary) << text;
      }
      return 0;
    }
    if (*acc) return run_acceptance(common);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
