#pragma once

// JSON and CSV forms of codes and reports. Probabilities are exact "p/q"
// strings; decimal fields are a convenience and are never read back.

#include "permid/approx.hpp"
#include "permid/core.hpp"
#include "permid/feedback.hpp"
#include "permid/idcode.hpp"
#include "permid/setsystem.hpp"
#include "permid/transforms.hpp"

#include <json.hpp>

#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace permid {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "permid/1";

namespace io {

inline std::string rat(const Rational& r) { return to_pq(r); }

/// Same double rendering in JSON and CSV.
inline std::string decimal_text(double v) { return Json(v).dump(); }

inline Json rat_matrix(const std::vector<std::vector<Rational>>& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(rat(v));
    out.push_back(std::move(r));
  }
  return out;
}

/// Unsigned integers that may exceed 64 bits: a number when it fits, a decimal string otherwise.
inline Json bigint(const BigInt& v) {
  if (fits_u64(v)) return Json(to_u64(v, "io", "integer"));
  return Json(v.get_str());
}

inline BigInt parse_bigint(const Json& j) {
  if (j.is_number_unsigned()) return big(j.get<std::uint64_t>());
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0) fail("io", errc::parse, "negative integer where a count is expected");
    return big(static_cast<std::uint64_t>(v));
  }
  if (j.is_string()) {
    BigInt v;
    if (v.set_str(j.get<std::string>(), 10) != 0 || sgn(v) < 0) fail("io", errc::parse, "bad integer '" + j.get<std::string>() + "'");
    return v;
  }
  fail("io", errc::parse, "expected an integer");
}

inline Rational parse_rat(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  fail("io", errc::parse, "expected a \"p/q\" string");
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail("io", errc::parse, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail("io", errc::parse, std::string("field '") + key + "': " + e.what());
  }
}

inline void check_schema(const Json& j) {
  const auto schema = get<std::string>(j, "schema");
  if (schema != kSchema) fail("io", errc::parse, "unsupported schema '" + schema + "'");
}

inline Json word(const Word& w) {
  Json out = Json::array();
  for (auto s : w) out.push_back(s);
  return out;
}

inline Word parse_word(const Json& j) {
  if (!j.is_array()) fail("io", errc::parse, "word must be an array of symbols");
  Word w;
  for (const auto& s : j) w.push_back(s.get<Symbol>());
  return w;
}

}  // namespace io

// ---- codes ----

inline Json to_json(const NoiselessIdCode& code) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "noiseless";
  j["N"] = code.N;
  j["M"] = code.M();
  Json enc = Json::array();
  for (const auto& e : code.encoders) {
    Json atoms = Json::array();
    for (auto k : e.support()) atoms.push_back(Json::array({k, io::rat(e[k])}));
    enc.push_back(std::move(atoms));
  }
  j["encoders"] = std::move(enc);
  Json dec;
  if (code.deterministic) {
    Json sets = Json::array();
    for (std::uint64_t i = 0; i < code.M(); ++i) sets.push_back(code.decoder_set(i));
    dec["deterministic"] = std::move(sets);
  } else {
    dec["stochastic"] = io::rat_matrix(code.accept);
  }
  j["decoders"] = std::move(dec);
  return j;
}

inline Json to_json(const PermIdCode& code) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "perm";
  j["n"] = code.n;
  j["q"] = code.q;
  j["l"] = code.l;
  j["N"] = code.types_per_block();
  j["M"] = code.M();
  Json enc = Json::array();
  for (const auto& e : code.encoders) {
    Json atoms = Json::array();
    for (const auto& [w, p] : e.atoms()) atoms.push_back(Json::array({io::word(w), io::rat(p)}));
    enc.push_back(std::move(atoms));
  }
  j["encoders"] = std::move(enc);
  Json counts = Json::array();
  for (const auto& row : code.accept_counts) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(io::bigint(c));
    counts.push_back(std::move(r));
  }
  Json dec;
  dec["typecounts"] = std::move(counts);
  if (code.decoder_sets) {
    Json sets = Json::array();
    for (const auto& s : *code.decoder_sets) {
      Json words = Json::array();
      for (const auto& w : s) words.push_back(io::word(w));
      sets.push_back(std::move(words));
    }
    dec["explicit"] = std::move(sets);
  }
  j["decoders"] = std::move(dec);
  return j;
}

/// With tables = false only the seed is written, and loading regenerates the
/// tables from a fresh stream with that seed.
inline Json to_json(const FeedbackCode& code, bool tables = true) {
  if (!tables && !code.seed) fail("io", errc::precondition, "feedback code without a seed must be written with tables");
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "feedback";
  j["n"] = code.n;
  j["q"] = code.q;
  j["l"] = code.l;
  j["N"] = code.N;
  j["M"] = code.M;
  j["domain"] = code.domain;
  j["pilot"] = io::word(code.pilot);
  if (code.seed) j["seed"] = *code.seed;
  if (tables) {
    Json phi = Json::array();
    for (std::uint64_t i = 0; i < code.M; ++i) phi.push_back(std::vector<std::uint32_t>(code.row(i), code.row(i) + code.domain));
    j["decoders"] = Json{{"phi", std::move(phi)}};
  }
  return j;
}

inline Json to_json(const SetSystem& S) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "setsystem";
  j["N"] = S.N;
  j["M"] = S.size();
  j["sets"] = S.sets;
  return j;
}

using AnyCode = std::variant<PermIdCode, NoiselessIdCode, FeedbackCode, SetSystem>;

inline NoiselessIdCode noiseless_from_json(const Json& j) {
  const auto N = io::get<std::uint64_t>(j, "N");
  const auto M = io::get<std::uint64_t>(j, "M");
  std::vector<Dist> enc;
  for (const auto& atoms : io::field(j, "encoders")) {
    std::vector<Rational> p(N);
    for (const auto& a : atoms) {
      const auto k = a.at(0).get<std::uint64_t>();
      if (k >= N) fail("io", errc::parse, "encoder index outside [N]");
      p[k] += io::parse_rat(a.at(1));
    }
    enc.emplace_back(std::move(p));
  }
  if (enc.size() != M) fail("io", errc::parse, "encoder count differs from M");
  const auto& dec = io::field(j, "decoders");
  if (dec.contains("deterministic")) {
    auto sets = dec.at("deterministic").get<std::vector<std::vector<std::uint64_t>>>();
    if (sets.size() != M) fail("io", errc::parse, "decoder count differs from M");
    return NoiselessIdCode::make_deterministic(N, std::move(enc), sets);
  }
  if (dec.contains("stochastic")) {
    std::vector<std::vector<Rational>> accept;
    for (const auto& row : dec.at("stochastic")) {
      std::vector<Rational> r;
      for (const auto& v : row) r.push_back(io::parse_rat(v));
      accept.push_back(std::move(r));
    }
    return NoiselessIdCode::make_stochastic(N, std::move(enc), std::move(accept));
  }
  fail("io", errc::parse, "noiseless decoders must be deterministic or stochastic");
}

inline PermIdCode perm_from_json(const Json& j) {
  PermIdCode code;
  code.n = io::get<std::uint32_t>(j, "n");
  code.q = io::get<std::uint32_t>(j, "q");
  code.l = io::get<std::uint32_t>(j, "l");
  check_nq(code.n, code.q);
  for (const auto& atoms : io::field(j, "encoders")) {
    std::vector<std::pair<Word, Rational>> a;
    for (const auto& x : atoms) a.emplace_back(io::parse_word(x.at(0)), io::parse_rat(x.at(1)));
    code.encoders.emplace_back(std::move(a));
  }
  const auto& dec = io::field(j, "decoders");
  for (const auto& row : io::field(dec, "typecounts")) {
    std::vector<BigInt> r;
    for (const auto& c : row) r.push_back(io::parse_bigint(c));
    code.accept_counts.push_back(std::move(r));
  }
  if (dec.contains("explicit")) {
    std::vector<std::vector<Word>> sets;
    for (const auto& s : dec.at("explicit")) {
      std::vector<Word> words;
      for (const auto& w : s) words.push_back(io::parse_word(w));
      sets.push_back(std::move(words));
    }
    code.decoder_sets = std::move(sets);
  }
  if (code.M() != io::get<std::uint64_t>(j, "M")) fail("io", errc::parse, "encoder count differs from M");
  code.validate();
  return code;
}

inline FeedbackCode feedback_from_json(const Json& j) {
  const auto n = io::get<std::uint32_t>(j, "n");
  const auto q = io::get<std::uint32_t>(j, "q");
  const auto l = io::get<std::uint32_t>(j, "l");
  const auto M = io::get<std::uint64_t>(j, "M");
  FeedbackCode code;
  if (j.contains("decoders")) {
    code.n = n;
    code.q = q;
    code.l = l;
    code.M = M;
    code.N = io::get<std::uint64_t>(j, "N");
    code.domain = io::get<std::uint64_t>(j, "domain");
    code.pilot = io::parse_word(io::field(j, "pilot"));
    if (j.contains("seed")) code.seed = j.at("seed").get<std::uint64_t>();
    const auto& phi = io::field(io::field(j, "decoders"), "phi");
    if (phi.size() != M) fail("io", errc::parse, "Phi table count differs from M");
    code.phi.reserve(M * code.domain);
    for (const auto& row : phi) {
      if (row.size() != code.domain) fail("io", errc::parse, "Phi table length differs from the domain size");
      for (const auto& v : row) code.phi.push_back(v.get<std::uint32_t>());
    }
  } else {
    RngStream rng(io::get<std::uint64_t>(j, "seed"));
    code = build_feedback_code(n, q, l, M, rng);
  }
  code.validate();
  return code;
}

inline SetSystem setsystem_from_json(const Json& j) {
  auto S = SetSystem::make(io::get<std::uint64_t>(j, "N"), io::get<std::vector<Subset>>(j, "sets"));
  if (S.size() != io::get<std::uint64_t>(j, "M")) fail("io", errc::parse, "set count differs from M");
  return S;
}

inline AnyCode code_from_json(const Json& j) {
  io::check_schema(j);
  const auto kind = io::get<std::string>(j, "kind");
  try {
    if (kind == "perm") return perm_from_json(j);
    if (kind == "noiseless") return noiseless_from_json(j);
    if (kind == "feedback") return feedback_from_json(j);
    if (kind == "setsystem") return setsystem_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    fail("io", errc::parse, std::string("malformed ") + kind + " code: " + e.what());
  }
  fail("io", errc::parse, "unknown code kind '" + kind + "'");
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail("io", errc::parse, e.what());
  }
}

// ---- reports ----

inline Json to_json(const ErrorReport& r) {
  Json j;
  j["schema"] = kSchema;
  j["M"] = r.M;
  j["lambda1"] = io::rat(r.lambda1);
  j["lambda2"] = io::rat(r.lambda2);
  j["lambda"] = io::rat(r.lambda);
  j["decimal"] = {{"lambda1", to_double(r.lambda1)}, {"lambda2", to_double(r.lambda2)}, {"lambda", to_double(r.lambda)}};
  if (r.matrix) j["matrix"] = io::rat_matrix(*r.matrix);
  if (r.missed) {
    Json m = Json::array();
    for (const auto& v : *r.missed) m.push_back(io::rat(v));
    j["missed"] = std::move(m);
  }
  return j;
}

inline Json to_json(const McReport& r) {
  Json j = to_json(r.estimate);
  Json mc;
  mc["trials"] = r.trials;
  mc["stderr"] = {{"lambda1", r.lambda1_stderr}, {"lambda2", r.lambda2_stderr}};
  if (r.matrix_stderr) mc["matrix_stderr"] = *r.matrix_stderr;
  if (r.missed_stderr) mc["missed_stderr"] = *r.missed_stderr;
  j["mc"] = std::move(mc);
  return j;
}

inline ErrorReport error_report_from_json(const Json& j) {
  io::check_schema(j);
  ErrorReport r;
  r.M = io::get<std::uint64_t>(j, "M");
  r.lambda1 = io::parse_rat(io::field(j, "lambda1"));
  r.lambda2 = io::parse_rat(io::field(j, "lambda2"));
  r.lambda = io::parse_rat(io::field(j, "lambda"));
  if (j.contains("matrix")) {
    std::vector<std::vector<Rational>> m;
    for (const auto& row : j.at("matrix")) {
      std::vector<Rational> rr;
      for (const auto& v : row) rr.push_back(io::parse_rat(v));
      m.push_back(std::move(rr));
    }
    r.matrix = std::move(m);
  }
  if (j.contains("missed")) {
    std::vector<Rational> m;
    for (const auto& v : j.at("missed")) m.push_back(io::parse_rat(v));
    r.missed = std::move(m);
  }
  return r;
}

inline Json to_json(const CollisionReport& r) {
  Json j;
  j["schema"] = kSchema;
  j["M"] = r.M;
  j["N"] = r.N;
  j["domain"] = r.domain;
  j["pairs"] = r.pairs;
  j["lambda1"] = io::rat(r.lambda1);
  j["lambda2"] = io::rat(r.lambda2);
  j["lambda"] = io::rat(r.lambda1 + r.lambda2);
  j["target"] = io::rat(r.target);
  j["pass"] = r.pass;
  j["max_count"] = r.max_count;
  if (r.argmax) j["argmax"] = {r.argmax->first, r.argmax->second};
  j["symmetric"] = r.symmetric;
  j["mean_fraction"] = r.mean_fraction;
  j["decimal"] = {{"lambda1", to_double(r.lambda1)}, {"lambda2", to_double(r.lambda2)}, {"target", to_double(r.target)}};
  if (r.counts) j["counts"] = *r.counts;
  return j;
}

inline Json to_json(const LemmaCheck& c) {
  return Json{{"lemma", c.lemma},       {"checked", c.checked}, {"violations", c.violations}, {"undecided", c.undecided},
              {"vacuous", c.vacuous},   {"ok", c.ok()},         {"failures", c.failures}};
}

inline Json to_json(const IntersectionProfile& p) {
  return Json{{"Gamma", p.Gamma},
              {"Delta", p.Delta},
              {"epsilon", io::rat(p.epsilon)},
              {"delta", io::rat(p.delta)},
              {"ratio", io::rat(p.ratio())},
              {"decimal", {{"epsilon", to_double(p.epsilon)}, {"delta", to_double(p.delta)}, {"ratio", to_double(p.ratio())}}}};
}

inline Json to_json(const PipelineReport& r, bool with_matrices = false) {
  Json j;
  j["schema"] = kSchema;
  j["gamma"] = io::rat(r.gamma);
  j["ok"] = r.ok();
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json e = to_json(s.report);
    e.erase("schema");
    if (!with_matrices) {
      e.erase("matrix");
      e.erase("missed");
    }
    steps.push_back(Json{{"name", s.name}, {"M", s.M}, {"report", std::move(e)}, {"check", to_json(s.check)}});
  }
  j["steps"] = std::move(steps);
  j["kappa"] = r.kappa;
  j["chosen_bin"] = r.chosen_bin;
  j["factors"] = {{"loose", r.loose_factor}, {"internal", r.internal_factor}};
  j["support_size"] = r.support_size;
  j["kept"] = r.kept;
  j["profile"] = to_json(r.profile);
  j["distinct"] = r.distinct;
  j["ratio_matches_lambda2"] = r.ratio_matches_lambda2;
  if (r.prop2_bound) j["prop2"] = {{"bound", *r.prop2_bound}, {"holds", r.prop2_holds.value_or(false)}};
  j["system"] = to_json(r.system);
  return j;
}

inline Json to_json(const AchievableReport& r) {
  Json j;
  j["ground"] = r.ground;
  j["eps_prime"] = static_cast<double>(r.eps_prime);
  j["eps_prime_N"] = static_cast<double>(r.eps_prime_N);
  j["lambda2n"] = static_cast<double>(r.lambda2n);
  j["hypotheses_hold"] = r.hypotheses_hold;
  j["Gamma"] = r.Gamma;
  j["cap"] = r.cap;
  j["target"] = r.target;
  j["built"] = r.system.size();
  j["attempts"] = r.attempts;
  j["exhausted"] = r.exhausted;
  j["lambda2_bound"] = io::rat(r.lambda2_bound);
  return j;
}

inline Json to_json(const ApproxMap& m) {
  return Json{{"N", m.N}, {"K", m.K}, {"atoms", m.atoms}};
}

inline Json to_json(const PigeonholeReport& r) {
  Json j;
  j["schema"] = kSchema;
  j["K"] = r.K;
  j["distinct_maps"] = io::bigint(r.distinct_maps);
  j["guaranteed"] = r.guaranteed;
  Json d = Json::array();
  for (const auto& v : r.distances) d.push_back(io::rat(v));
  j["distances"] = std::move(d);
  Json c = Json::array();
  for (const auto& p : r.collisions) c.push_back(Json{{"j", p.j}, {"k", p.k}, {"floor", io::rat(p.floor_value)}});
  j["collisions"] = std::move(c);
  if (r.best_floor) j["best_floor"] = io::rat(*r.best_floor);
  j["lambda"] = io::rat(r.lambda);
  j["holds"] = r.holds;
  Json maps = Json::array();
  for (const auto& m : r.maps) maps.push_back(to_json(m));
  j["maps"] = std::move(maps);
  return j;
}

// ---- CSV ----

namespace io {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_cell(const Json& v) {
  if (v.is_string()) return csv_field(v.get<std::string>());
  if (v.is_null()) return "";
  return csv_field(v.dump());
}

}  // namespace io

/// One row per flat JSON object; columns follow the first row's keys.
inline std::string rows_to_csv(const std::vector<Json>& rows) {
  if (rows.empty()) return "";
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, v] : rows.front().items()) {
    out << (first ? "" : ",") << io::csv_field(k);
    first = false;
  }
  out << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& [k, v] : rows.front().items()) {
      out << (first ? "" : ",") << (row.contains(k) ? io::csv_cell(row.at(k)) : "");
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

/// Rows kind,i,j,value,decimal: the three summary values, then each matrix entry
/// (false_alarm for i != j, missed on the diagonal) when the report holds one.
inline std::string to_csv(const ErrorReport& r) {
  std::vector<Json> rows;
  auto add = [&](const char* kind, Json i, Json j, const Rational& v) {
    rows.push_back(Json{{"kind", kind}, {"i", std::move(i)}, {"j", std::move(j)}, {"value", io::rat(v)}, {"decimal", to_double(v)}});
  };
  add("lambda1", nullptr, nullptr, r.lambda1);
  add("lambda2", nullptr, nullptr, r.lambda2);
  add("lambda", nullptr, nullptr, r.lambda);
  if (r.matrix && r.missed)
    for (std::uint64_t i = 0; i < r.M; ++i)
      for (std::uint64_t j = 0; j < r.M; ++j) {
        if (i == j) add("missed", i, j, (*r.missed)[i]);
        else add("false_alarm", i, j, (*r.matrix)[i][j]);
      }
  return rows_to_csv(rows);
}

/// Rows j,k,count,value,decimal for unordered pairs, after the summary rows.
inline std::string to_csv(const CollisionReport& r) {
  std::vector<Json> rows;
  auto add = [&](const char* kind, Json j, Json k, Json count, const Rational& v) {
    rows.push_back(Json{{"kind", kind}, {"j", std::move(j)}, {"k", std::move(k)}, {"count", std::move(count)}, {"value", io::rat(v)}, {"decimal", to_double(v)}});
  };
  add("lambda1", nullptr, nullptr, nullptr, r.lambda1);
  add("lambda2", nullptr, nullptr, r.max_count, r.lambda2);
  add("target", nullptr, nullptr, nullptr, r.target);
  if (r.counts)
    for (std::uint64_t j = 0; j < r.M; ++j)
      for (std::uint64_t k = j + 1; k < r.M; ++k) {
        Rational f(big((*r.counts)[j][k]), big(r.domain));
        f.canonicalize();
        add("pair", j, k, (*r.counts)[j][k], f);
      }
  return rows_to_csv(rows);
}

}  // namespace permid
