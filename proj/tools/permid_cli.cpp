// permid_cli: constructions, evaluations, transformations and bound sweeps.
// Reports go to stdout (or --out); errors go to stderr as JSON.
// Exit codes: 0 success, 1 usage or input error, 2 bound or invariant violation.

#include "permid/approx.hpp"
#include "permid/feedback.hpp"
#include "permid/idcode.hpp"
#include "permid/io.hpp"
#include "permid/setsystem.hpp"
#include "permid/transforms.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace permid;

namespace {

struct ViolationExit {};  // the report was written but records a failed check

struct Output {
  std::string format = "json";
  std::string path;

  void add(CLI::App* app, bool csv) {
    if (csv) app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--out", path, "write the report here instead of stdout");
  }

  void emit(const Json& j, const std::string& csv = "") const {
    const std::string text = format == "csv" ? csv : j.dump(2) + "\n";
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail("cli", errc::precondition, "cannot write " + path);
    f << text;
  }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  if (const char* env = std::getenv("PERMID_SEED")) {
    try {
      std::size_t used = 0;
      const std::string s(env);
      const auto v = std::stoull(s, &used, 0);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    fail("cli", errc::parse, std::string("PERMID_SEED is not a 64-bit integer: ") + env);
  }
  fail("cli", errc::precondition, "a seed is required: pass --seed or set PERMID_SEED");
}

Rational rational_arg(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    fail("cli", errc::parse, std::string(name) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail("cli", errc::precondition, "cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

AnyCode load_code(const std::string& path) { return code_from_json(parse_json_text(read_file(path))); }

void save_json(const std::string& path, const Json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail("cli", errc::precondition, "cannot write " + path);
  f << j.dump(2) << "\n";
}

Json header(const char* command) { return Json{{"schema", kSchema}, {"command", command}}; }

Json bounds_json(const NBoundsCheck& b) {
  Json j{{"lower", b.lower}, {"upper", b.upper}, {"lower_value", to_pq(b.lower_value)}, {"upper_value", to_pq(b.upper_value)}};
  if (b.loose_upper) j["loose_upper"] = *b.loose_upper;
  return j;
}

// ---- types ----

struct TypesCmd {
  std::uint32_t n = 1, q = 2;
  std::uint64_t limit = 100000;
  Output out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("types", "enumerate types and check the type-count bounds");
    c->add_option("--n", n, "block length")->required();
    c->add_option("--q", q, "alphabet size")->required();
    c->add_option("--limit", limit, "list the types only when N is at most this");
    out.add(c, true);
    c->callback([this] { run(); });
  }

  void run() {
    const auto b = check_N_bounds(n, q);
    const auto star = max_typeclass(n, q);
    Json j = header("types");
    j["n"] = n;
    j["q"] = q;
    j["N"] = io::bigint(b.N);
    j["bounds"] = bounds_json(b);
    j["max_type"] = {{"index", star.index}, {"counts", star.type.counts}, {"size", io::bigint(star.size)}};
    std::vector<Json> rows;
    if (b.N <= big(limit)) {
      const TypeSpace space(n, q);
      Json list = Json::array();
      for (std::uint64_t t = 0; t < space.size(); ++t) {
        Json e{{"index", t}, {"counts", space.type(t).counts}, {"size", io::bigint(space.class_size(t))}};
        std::string counts;
        for (auto c : space.type(t).counts) counts += (counts.empty() ? "" : " ") + std::to_string(c);
        rows.push_back(Json{{"index", t}, {"counts", counts}, {"size", io::bigint(space.class_size(t))}});
        list.push_back(std::move(e));
      }
      j["types"] = std::move(list);
    }
    out.emit(j, rows_to_csv(rows));
    if (!b.all()) throw ViolationExit{};
  }
};

// ---- setsystem ----

struct SetSystemCmd {
  std::uint64_t N = 0;
  std::string epsilon, lambda;
  std::optional<std::uint64_t> M, Gamma, cap, seed;
  std::uint64_t max_attempts = 1'000'000;
  bool no_hypotheses = false;
  double log_base = 2.0;
  std::string save;
  Output out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("setsystem", "greedy bounded-intersection set system and its profile");
    c->add_option("--N", N, "ground set size")->required();
    c->add_option("--epsilon", epsilon, "set size fraction p/q (Gilbert mode)");
    c->add_option("--lambda", lambda, "intersection fraction p/q (Gilbert mode)");
    c->add_option("--Gamma", Gamma, "set size (direct mode)");
    c->add_option("--cap", cap, "largest allowed intersection (direct mode)");
    c->add_option("--M", M, "number of sets to build");
    c->add_option("--seed", seed, "root seed (falls back to PERMID_SEED)");
    c->add_option("--max-attempts", max_attempts, "candidate draw budget");
    c->add_flag("--no-hypotheses", no_hypotheses, "skip the Gilbert parameter hypotheses");
    c->add_option("--log-base", log_base, "logarithm base of the existence floor");
    c->add_option("--save", save, "write the set system as a code file");
    out.add(c, false);
    c->callback([this] { run(); });
  }

  void run() {
    RngStream rng = RngStream(resolve_seed(seed)).split("setsystem");
    Json j = header("setsystem");
    PackResult pack;
    if (Gamma || cap) {
      if (!Gamma || !cap || !M) fail("cli", errc::precondition, "direct mode needs --Gamma, --cap and --M");
      j["mode"] = "direct";
      pack = greedy_pack(N, *Gamma, *cap, *M, rng, max_attempts);
    } else {
      if (epsilon.empty() || lambda.empty()) fail("cli", errc::precondition, "Gilbert mode needs --epsilon and --lambda");
      GilbertParams p;
      p.N = N;
      p.epsilon = rational_arg(epsilon, "--epsilon");
      p.lambda = rational_arg(lambda, "--lambda");
      p.requested_M = M;
      p.max_attempts = max_attempts;
      p.check_hypotheses = !no_hypotheses;
      p.log_base = log_base;
      auto g = greedy_gilbert(p, rng);
      j["mode"] = "gilbert";
      j["existence_floor"] = io::bigint(g.existence_floor);
      j["hypotheses_hold"] = g.hypotheses_hold;
      pack = std::move(g.pack);
    }
    j["Gamma"] = pack.Gamma;
    j["cap"] = pack.cap;
    j["target"] = pack.target;
    j["built"] = pack.system.size();
    j["attempts"] = pack.attempts;
    j["exhausted"] = pack.exhausted;
    if (pack.system.size() > 0) j["profile"] = to_json(verify_profile(pack.system));
    j["system"] = to_json(pack.system);
    if (!save.empty()) save_json(save, to_json(pack.system));
    out.emit(j);
  }
};

// ---- build ----

struct BuildCmd {
  std::uint32_t n = 0, q = 2, l = 1;
  std::string epsilon;
  std::optional<std::uint64_t> M, Gamma, cap, seed;
  std::uint64_t max_attempts = 1'000'000;
  double log_base = 2.0;
  bool eval = false;
  std::string save;
  Output out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("build", "set-system achievability code for the permutation channel");
    c->add_option("--n", n, "block length")->required();
    c->add_option("--q", q, "alphabet size");
    c->add_option("--l", l, "number of blocks");
    c->add_option("--epsilon", epsilon, "epsilon_n as p/q");
    c->add_option("--Gamma", Gamma, "set size (explicit parameters)");
    c->add_option("--cap", cap, "largest allowed intersection (explicit parameters)");
    c->add_option("--M", M, "number of messages");
    c->add_option("--seed", seed, "root seed (falls back to PERMID_SEED)");
    c->add_option("--max-attempts", max_attempts, "candidate draw budget");
    c->add_option("--log-base", log_base, "logarithm base of the construction parameters");
    c->add_flag("--eval", eval, "evaluate the built code exactly");
    c->add_option("--save", save, "write the code file here instead of embedding it");
    out.add(c, false);
    c->callback([this] { run(); });
  }

  void run() {
    RngStream rng = RngStream(resolve_seed(seed)).split("build");
    AchievableCode built;
    Json j = header("build");
    if (Gamma || cap) {
      if (!Gamma || !cap || !M) fail("cli", errc::precondition, "explicit parameters need --Gamma, --cap and --M");
      built = build_from_parameters(n, q, l, *Gamma, *cap, *M, rng, max_attempts);
      j["mode"] = "explicit";
    } else {
      if (epsilon.empty()) fail("cli", errc::precondition, "--epsilon is required unless --Gamma/--cap/--M are given");
      AchievableParams p;
      p.n = n;
      p.q = q;
      p.l = l;
      p.epsilon = rational_arg(epsilon, "--epsilon");
      p.requested_M = M;
      p.max_attempts = max_attempts;
      p.log_base = log_base;
      built = build_multishot_achievable(p, rng);
      j["mode"] = "epsilon";
    }
    j["n"] = n;
    j["q"] = q;
    j["l"] = l;
    j["report"] = to_json(built.report);
    j["profile"] = built.report.system.size() > 0 ? to_json(verify_profile(built.report.system)) : Json();
    bool violated = false;
    if (eval) {
      auto r = to_json(eval_perm_exact(built.code, 0));
      r.erase("schema");
      violated = parse_rational(r["lambda1"].get<std::string>()) != 0 ||
                 parse_rational(r["lambda2"].get<std::string>()) > built.report.lambda2_bound;
      j["eval"] = std::move(r);
      j["within_bound"] = !violated;
    }
    if (!save.empty()) save_json(save, to_json(built.code));
    else j["code"] = to_json(built.code);
    out.emit(j);
    if (violated) throw ViolationExit{};
  }
};

// ---- eval ----

struct EvalCmd {
  std::string code_path, mode = "exact";
  std::uint64_t trials = 100000, matrix_cap = 16;
  std::optional<std::uint64_t> seed;
  Output out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("eval", "exact or Monte Carlo error report of a code file");
    c->add_option("--code", code_path, "code file")->required();
    c->add_option("--mode", mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    c->add_option("--trials", trials, "Monte Carlo trials per message");
    c->add_option("--seed", seed, "root seed for mc (falls back to PERMID_SEED)");
    c->add_option("--matrix-cap", matrix_cap, "largest M whose full matrix is reported");
    out.add(c, true);
    c->callback([this] { run(); });
  }

  void run() {
    const auto code = load_code(code_path);
    const bool mc = mode == "mc";
    auto stream = [&] { return RngStream(resolve_seed(seed)).split("eval"); };
    Json j;
    std::string csv;
    if (const auto* p = std::get_if<PermIdCode>(&code)) {
      if (mc) {
        const auto r = eval_perm_mc(*p, trials, stream(), matrix_cap);
        j = to_json(r);
        csv = to_csv(r.estimate);
      } else {
        const auto r = eval_perm_exact(*p, matrix_cap);
        j = to_json(r);
        csv = to_csv(r);
      }
      j["kind"] = "perm";
    } else if (const auto* f = std::get_if<FeedbackCode>(&code)) {
      if (mc) {
        const auto r = eval_feedback_mc(*f, trials, stream(), matrix_cap);
        j = to_json(r);
        csv = to_csv(r.estimate);
      } else {
        const auto r = eval_feedback_exact(*f, matrix_cap);
        j = to_json(r);
        csv = to_csv(r);
      }
      j["kind"] = "feedback";
    } else {
      if (mc) fail("cli", errc::precondition, "mc mode applies to perm and feedback codes; noiseless codes are evaluated exactly");
      const auto* s = std::get_if<SetSystem>(&code);
      const auto noiseless = s ? set_system_code(*s) : std::get<NoiselessIdCode>(code);
      const auto r = eval_noiseless(noiseless, matrix_cap);
      j = to_json(r);
      csv = to_csv(r);
      j["kind"] = s ? "setsystem" : "noiseless";
      if (s) j["profile"] = to_json(verify_profile(*s));
    }
    j["mode"] = mode;
    out.emit(j, csv);
  }
};

// ---- transform ----

struct TransformCmd {
  std::string code_path, gamma, mu, alpha, save;
  bool matrices = false;
  Output out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("transform", "run the five-step code transformation on a perm code file");
    c->add_option("--code", code_path, "perm code file")->required();
    c->add_option("--gamma", gamma, "bin parameter gamma as p/q");
    c->add_option("--mu", mu, "derive gamma = mu / (4 l (q-1)) instead");
    c->add_option("--alpha", alpha, "check the set-system size bound at this alpha");
    c->add_flag("--matrices", matrices, "include every step's full error matrix");
    c->add_option("--save", save, "write the final set system as a code file");
    out.add(c, false);
    c->callback([this] { run(); });
  }

  void run() {
    const auto code = load_code(code_path);
    const auto* p = std::get_if<PermIdCode>(&code);
    if (!p) fail("cli", errc::precondition, "transform needs a perm code");
    if (gamma.empty() == mu.empty()) fail("cli", errc::precondition, "pass exactly one of --gamma and --mu");
    const Rational g = gamma.empty() ? gamma_preset_multishot(rational_arg(mu, "--mu"), p->q, p->l) : rational_arg(gamma, "--gamma");
    std::optional<Rational> a;
    if (!alpha.empty()) a = rational_arg(alpha, "--alpha");
    const auto r = soft_converse_pipeline(*p, g, a);
    Json j = to_json(r, matrices);
    j["command"] = "transform";
    if (!save.empty()) save_json(save, to_json(r.system));
    out.emit(j);
    if (!r.ok()) throw ViolationExit{};
  }
};

// ---- approx ----

struct ApproxCmd {
  std::string code_path, dist, alpha;
  std::optional<std::uint64_t> K;
  std::uint64_t max_pairs = 1 << 12;
  Output out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("approx", "resolution-K approximation and the pigeonhole collision check");
    c->add_option("--dist", dist, "comma-separated p/q probabilities to approximate");
    c->add_option("--code", code_path, "noiseless or setsystem code file for the collision check");
    c->add_option("--K", K, "resolution");
    c->add_option("--alpha", alpha, "use K = ceil(N^alpha)");
    c->add_option("--max-pairs", max_pairs, "largest number of colliding pairs listed");
    out.add(c, false);
    c->callback([this] { run(); });
  }

  std::uint64_t resolution(std::uint64_t N) const {
    if (K.has_value() == !alpha.empty()) fail("cli", errc::precondition, "pass exactly one of --K and --alpha");
    return K ? *K : resolution_for(N, rational_arg(alpha, "--alpha"));
  }

  void run() {
    if (dist.empty() == code_path.empty()) fail("cli", errc::precondition, "pass exactly one of --dist and --code");
    Json j = header("approx");
    if (!dist.empty()) {
      std::vector<Rational> p;
      std::stringstream s(dist);
      for (std::string part; std::getline(s, part, ',');) p.push_back(rational_arg(part, "--dist"));
      const Dist target(std::move(p));
      const auto k = resolution(target.size());
      const auto map = build_approx(target, k);
      const auto d = approx_distance(map, target);
      Rational bound(big(target.size()), big(k));
      bound.canonicalize();
      j["map"] = to_json(map);
      j["distance"] = to_pq(d);
      j["bound"] = to_pq(bound);
      j["decimal"] = {{"distance", to_double(d)}, {"bound", to_double(bound)}};
      j["holds"] = d <= bound;
      out.emit(j);
      return;
    }
    const auto code = load_code(code_path);
    NoiselessIdCode noiseless;
    if (const auto* s = std::get_if<SetSystem>(&code)) noiseless = set_system_code(*s);
    else if (const auto* c = std::get_if<NoiselessIdCode>(&code)) noiseless = *c;
    else fail("cli", errc::precondition, "the collision check needs a noiseless or setsystem code");
    const auto r = pigeonhole_collision_check(noiseless, resolution(noiseless.N), max_pairs);
    Json rep = to_json(r);
    rep.erase("schema");
    j.update(rep);
    out.emit(j);
    if (!r.holds) throw ViolationExit{};
  }
};

// ---- feedback ----

struct FeedbackCmd {
  std::uint32_t n = 0, q = 2, l = 2;
  std::uint64_t M = 0, trials = 100000, matrix_cap = 16, budget = kDefaultFeedbackBudget;
  std::optional<std::uint64_t> seed, retry;
  std::string code_path, mode = "exact", save;
  bool target = false, no_tables = false;
  Output out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("feedback", "build and evaluate the two-phase feedback scheme");
    c->add_option("--n", n, "block length");
    c->add_option("--q", q, "alphabet size");
    c->add_option("--l", l, "number of blocks (>= 2)");
    c->add_option("--M", M, "number of messages");
    c->add_option("--code", code_path, "load a feedback code file instead of building");
    c->add_option("--seed", seed, "root seed (falls back to PERMID_SEED)");
    c->add_option("--mode", mode, "exact, mc or none")->check(CLI::IsMember({"exact", "mc", "none"}));
    c->add_option("--trials", trials, "Monte Carlo trials per message");
    c->add_flag("--target-test", target, "check lambda2 <= 2/N exactly");
    c->add_option("--retry", retry, "re-draw the maps until the target test passes, at most this many times");
    c->add_option("--budget", budget, "largest allowed size of the map tables in bytes");
    c->add_option("--matrix-cap", matrix_cap, "largest M whose pair counts are reported");
    c->add_option("--save", save, "write the code file");
    c->add_flag("--no-tables", no_tables, "save only the seed, not the map tables");
    out.add(c, true);
    c->callback([this] { run(); });
  }

  void run() {
    Json j = header("feedback");
    std::optional<FeedbackCode> code;
    if (!code_path.empty()) {
      code = std::get<FeedbackCode>([&]() -> AnyCode {
        auto c = load_code(code_path);
        if (!std::holds_alternative<FeedbackCode>(c)) fail("cli", errc::precondition, "--code must hold a feedback code");
        return c;
      }());
    } else {
      if (n == 0 || M == 0) fail("cli", errc::precondition, "pass --n and --M, or --code");
      const RngStream root = RngStream(resolve_seed(seed)).split("feedback");
      if (retry) {
        auto r = retry_until_pass(n, q, l, M, root, *retry, budget);
        j["retry"] = {{"budget", *retry}, {"draws", r.draws}, {"passed", r.passed}};
        if (!r.passed) {
          out.emit(j);
          return;
        }
        code = std::move(r.code);
      } else {
        RngStream rng = root;
        code = build_feedback_code(n, q, l, M, rng, budget);
      }
    }
    const auto star = max_typeclass(code->n, code->q);
    j["code"] = {{"n", code->n}, {"q", code->q}, {"l", code->l}, {"M", code->M}, {"N", code->N}, {"domain", code->domain},
                 {"pilot", io::word(code->pilot)}};
    if (code->seed) j["code"]["seed"] = *code->seed;
    j["max_type"] = {{"counts", star.type.counts}, {"size", io::bigint(star.size)}, {"upper_bound_holds", star.upper_bound_holds}};
    if (star.lower_bound_holds) j["max_type"]["lower_bound_holds"] = *star.lower_bound_holds;
    std::string csv;
    bool violated = !star.upper_bound_holds || !star.lower_bound_holds.value_or(true);
    std::optional<Rational> exact_lambda2;
    if (mode == "exact") {
      const auto r = eval_feedback_exact(*code, matrix_cap);
      exact_lambda2 = r.lambda2;
      Json rep = to_json(r);
      rep.erase("schema");
      j["report"] = std::move(rep);
      csv = to_csv(r);
      violated = violated || r.lambda1 != 0 || !r.symmetric;
    } else if (mode == "mc") {
      const auto r = eval_feedback_mc(*code, trials, RngStream(resolve_seed(seed)).split("feedback-mc"), matrix_cap);
      Json rep = to_json(r);
      rep.erase("schema");
      j["report"] = std::move(rep);
      csv = to_csv(r.estimate);
      violated = violated || r.estimate.lambda1 != 0;
    }
    if (target) {
      const auto t = target_test(*code);
      Rational goal(2, static_cast<unsigned long>(code->N));
      goal.canonicalize();
      if (!exact_lambda2) exact_lambda2 = eval_feedback_exact(*code, 0).lambda2;
      j["target_test"] = {{"pass", t.pass}, {"lambda2", to_pq(*exact_lambda2)}, {"target", to_pq(goal)}};
      if (t.failing_pair) j["target_test"]["failing_pair"] = {t.failing_pair->first, t.failing_pair->second};
    }
    if (!save.empty()) save_json(save, to_json(*code, !no_tables));
    out.emit(j, csv);
    if (violated) throw ViolationExit{};
  }
};

// ---- bounds ----

struct BoundsCmd {
  std::string kind;
  std::vector<std::uint64_t> Ns, Ms, Gammas, Deltas, ds, ws;
  std::vector<std::string> alphas, bigMs;
  std::vector<std::uint32_t> ns, qs, ls;
  Output out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("bounds", "parameter sweeps of the counting and set-system bounds");
    c->add_option("kind", kind, "types, prop2, lemma6, johnson or converse")
        ->required()
        ->check(CLI::IsMember({"types", "prop2", "lemma6", "johnson", "converse"}));
    c->add_option("--N", Ns, "ground set sizes")->delimiter(',');
    c->add_option("--M", bigMs, "message counts (decimal integers of any size)")->delimiter(',');
    c->add_option("--alpha", alphas, "alpha values as p/q")->delimiter(',');
    c->add_option("--Gamma", Gammas, "set sizes")->delimiter(',');
    c->add_option("--Delta", Deltas, "largest intersections")->delimiter(',');
    c->add_option("--d", ds, "Johnson distances")->delimiter(',');
    c->add_option("--w", ws, "Johnson weights")->delimiter(',');
    c->add_option("--n", ns, "block lengths")->delimiter(',');
    c->add_option("--q", qs, "alphabet sizes")->delimiter(',');
    c->add_option("--l", ls, "block counts")->delimiter(',');
    out.add(c, true);
    c->callback([this] { run(); });
  }

  static BigInt big_arg(const std::string& s) {
    BigInt v;
    if (v.set_str(s, 10) != 0 || sgn(v) < 0) fail("cli", errc::parse, "--M: not a nonnegative integer: " + s);
    return v;
  }

  void need(bool ok, const char* what) const {
    if (!ok) fail("cli", errc::precondition, std::string("bounds ") + kind + " needs " + what);
  }

  void run() {
    std::vector<Json> rows;
    bool violated = false;
    if (kind == "types") {
      need(!ns.empty() && !qs.empty(), "--n and --q");
      for (auto q : qs)
        for (auto n : ns) {
          const auto b = check_N_bounds(n, q);
          Json r{{"n", n}, {"q", q}, {"N", io::bigint(b.N)}, {"lower", b.lower}, {"upper", b.upper},
                 {"loose_upper", b.loose_upper ? Json(*b.loose_upper) : Json()},
                 {"lower_value", to_pq(b.lower_value)}, {"upper_value", to_pq(b.upper_value)}};
          violated = violated || !b.all();
          rows.push_back(std::move(r));
        }
    } else if (kind == "prop2") {
      need(!Ns.empty() && !bigMs.empty() && !alphas.empty(), "--N, --M and --alpha");
      for (const auto& as : alphas)
        for (auto N : Ns)
          for (const auto& ms : bigMs) {
            const Rational a = rational_arg(as, "--alpha");
            const BigInt M = big_arg(ms);
            const bool applicable = Rational(M) > lemma6_size_cap(N, a);
            rows.push_back(Json{{"N", N}, {"M", io::bigint(M)}, {"alpha", to_pq(a)}, {"applicable", applicable},
                                {"bound", applicable ? Json(prop2_bound_value(N, M, a)) : Json()}});
          }
    } else if (kind == "lemma6") {
      need(!Ns.empty() && !Gammas.empty() && !Deltas.empty() && !alphas.empty(), "--N, --Gamma, --Delta and --alpha");
      for (const auto& as : alphas)
        for (auto N : Ns)
          for (auto G : Gammas)
            for (auto D : Deltas) {
              if (G == 0 || G > N || D > G) continue;
              const Rational a = rational_arg(as, "--alpha");
              const bool hyp = Rational(big(D) * big(N)) <= (1 - a) * Rational(big(G) * big(G));
              Json johnson;
              if (D < G) {
                try {
                  johnson = io::bigint(johnson_bound_M(N, 2 * (G - D), G));
                } catch (const Error&) {
                }
              }
              rows.push_back(Json{{"N", N}, {"Gamma", G}, {"Delta", D}, {"alpha", to_pq(a)}, {"hypothesis", hyp},
                                  {"size_cap", to_pq(lemma6_size_cap(N, a))}, {"johnson", johnson}});
            }
    } else if (kind == "johnson") {
      need(!Ns.empty() && !ds.empty() && !ws.empty(), "--N, --d and --w");
      for (auto N : Ns)
        for (auto d : ds)
          for (auto w : ws) {
            Json value;
            try {
              value = io::bigint(johnson_bound_M(N, d, w));
            } catch (const Error&) {
            }
            rows.push_back(Json{{"N", N}, {"d", d}, {"w", w}, {"applicable", !value.is_null()}, {"bound", value}});
          }
    } else {
      need(!ns.empty() && !qs.empty() && !ls.empty() && !bigMs.empty(), "--n, --q, --l and --M");
      for (auto q : qs)
        for (auto n : ns)
          for (auto l : ls)
            for (const auto& ms : bigMs)
              rows.push_back(Json{{"n", n}, {"q", q}, {"l", l}, {"M", ms}, {"holds", feedback_counting_converse(n, q, l, big_arg(ms))}});
    }
    Json j = header("bounds");
    j["kind"] = kind;
    j["rows"] = rows;
    out.emit(j, rows_to_csv(rows));
    if (violated) throw ViolationExit{};
  }
};

void report_error(std::string_view origin, std::string_view code, const std::string& message) {
  Json j{{"schema", kSchema}, {"error", {{"origin", origin}, {"code", code}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identification codes over permutation channels"};
  app.require_subcommand(1);
  TypesCmd types;
  SetSystemCmd setsystem;
  BuildCmd build;
  EvalCmd eval;
  TransformCmd transform;
  ApproxCmd approx;
  FeedbackCmd feedback;
  BoundsCmd bounds;
  types.setup(app);
  setsystem.setup(app);
  build.setup(app);
  eval.setup(app);
  transform.setup(app);
  approx.setup(app);
  feedback.setup(app);
  bounds.setup(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ViolationExit&) {
    return 2;
  } catch (const Error& e) {
    report_error(e.origin(), e.code(), e.what());
    return e.code() == errc::bound_violation || e.code() == errc::invariant ? 2 : 1;
  } catch (const std::exception& e) {
    report_error("cli", "internal", e.what());
    return 1;
  }
  return 0;
}
