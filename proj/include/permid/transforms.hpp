#pragma once

// Code-to-code maps that turn an arbitrary permutation-channel ID code into a
// set system: the noiseless image, stochastic-to-deterministic decoders,
// uniform encoders, decoders equal to supports, and equal support sizes.
// Each map re-checks its error inequalities with exact arithmetic.

#include "permid/core.hpp"
#include "permid/dist.hpp"
#include "permid/idcode.hpp"
#include "permid/setsystem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace permid {

inline constexpr std::uint64_t kFullMatrix = std::numeric_limits<std::uint64_t>::max();

/// Tally of per-entry inequality checks.
struct LemmaCheck {
  std::string lemma;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::uint64_t undecided = 0;  // irrational bound not separated at the finest precision
  std::uint64_t vacuous = 0;    // bound >= 1, so it says nothing
  std::vector<std::string> failures;

  bool ok() const { return violations == 0 && undecided == 0; }

  void record(bool holds, const std::string& what) {
    ++checked;
    if (holds) return;
    ++violations;
    if (failures.size() < 8) failures.push_back(what);
  }
};

enum class Verdict { holds, violated, undecided };

inline std::string entry_name(std::uint64_t i, std::uint64_t j) {
  return i == j ? "miss(" + std::to_string(i) + ")" : "alarm(" + std::to_string(i) + "->" + std::to_string(j) + ")";
}

inline const Rational& entry(const ErrorReport& r, std::uint64_t i, std::uint64_t j) {
  return i == j ? (*r.missed)[i] : (*r.matrix)[i][j];
}

/// Noiseless image over [N^l]: Q'_i(v) is the encoder mass on the block type
/// tuple v and P_i(1|v) = c_{i,v} / prod |T_{j_b}|. Errors are preserved exactly.
inline NoiselessIdCode perm_to_noiseless_multishot(const PermIdCode& code, std::uint32_t l) {
  code.validate();
  if (l != code.l) fail("transforms", errc::mismatch, "code has l = " + std::to_string(code.l) + ", not " + std::to_string(l));
  const TypeSpace space(code.n, code.q);
  const auto radix = code.radix();
  const auto total = radix.total();
  std::vector<Dist> encoders;
  for (const auto& enc : code.encoders) {
    std::vector<Rational> mass(total);
    for (const auto& [x, p] : enc.atoms()) mass[block_type_index(x, code.n, code.q, radix)] += p;
    encoders.emplace_back(std::move(mass));
  }
  std::vector<std::vector<Rational>> accept(code.M(), std::vector<Rational>(total));
  bool deterministic = true;
  for (std::uint64_t v = 0; v < total; ++v) {
    const BigInt size = code.product_class_size(space, v);
    for (std::uint64_t i = 0; i < code.M(); ++i) {
      Rational a(code.accept_counts[i][v], size);
      a.canonicalize();
      deterministic = deterministic && (sgn(a) == 0 || a == 1);
      accept[i][v] = std::move(a);
    }
  }
  NoiselessIdCode out = NoiselessIdCode::make_stochastic(total, std::move(encoders), std::move(accept));
  out.deterministic = deterministic;
  return out;
}

inline NoiselessIdCode perm_to_noiseless(const PermIdCode& code) {
  if (code.l != 1) fail("transforms", errc::precondition, "one-shot map needs l = 1; use the multi-block form");
  return perm_to_noiseless_multishot(code, 1);
}

/// Returns the code re-flagged as deterministic when every acceptance is 0 or 1.
inline NoiselessIdCode as_deterministic_if_possible(NoiselessIdCode code) {
  code.deterministic = std::all_of(code.accept.begin(), code.accept.end(), [](const auto& row) {
    return std::all_of(row.begin(), row.end(), [](const Rational& a) { return sgn(a) == 0 || a == 1; });
  });
  return code;
}

template <class Extra = std::monostate>
struct TransformResult {
  NoiselessIdCode code;
  ErrorReport before;
  ErrorReport after;
  LemmaCheck check;
  Extra extra{};
};

/// Threshold decoders D_i = {k : P_i(1|k) > sqrt(lambda2)}; with lambda2 = 0 the rule is P_i(1|k) > 0.
inline TransformResult<> stoch_to_det_decoders(const NoiselessIdCode& code) {
  TransformResult<> out;
  out.before = eval_noiseless(code, kFullMatrix);
  const Rational& l2 = out.before.lambda2;
  std::vector<std::vector<std::uint64_t>> decoders(code.M());
  for (std::uint64_t i = 0; i < code.M(); ++i)
    for (std::uint64_t k = 0; k < code.N; ++k) {
      const Rational& a = code.accept[i][k];
      if (sgn(a) > 0 && a * a > l2) decoders[i].push_back(k);
    }
  out.code = NoiselessIdCode::make_deterministic(code.N, code.encoders, decoders);
  out.after = eval_noiseless(out.code, kFullMatrix);
  out.check.lemma = "threshold decoders";
  for (std::uint64_t i = 0; i < code.M(); ++i)
    for (std::uint64_t j = 0; j < code.M(); ++j) {
      const Rational& old_v = entry(out.before, i, j);
      const Rational& new_v = entry(out.after, i, j);
      if (i == j) {
        // new <= old + sqrt(lambda2)
        const Rational d = new_v - old_v;
        out.check.record(sgn(d) <= 0 || d * d <= l2, entry_name(i, j) + " exceeds old + sqrt(lambda2)");
      } else {
        out.check.record(new_v * new_v <= old_v, entry_name(i, j) + " exceeds sqrt(old)");
        // new <= old / alpha with alpha = sqrt(lambda2)
        if (sgn(l2) > 0) out.check.record(new_v * new_v * l2 <= old_v * old_v, entry_name(i, j) + " exceeds old / alpha");
        else out.check.record(sgn(new_v) == 0, entry_name(i, j) + " nonzero with lambda2 = 0");
      }
    }
  return out;
}

namespace detail {

/// Certified test of lhs <= rhs_scale * F, where F is bracketed by a callback
/// returning [lo, hi] at a given precision.
template <class Bracket>
Verdict certified_leq(const Rational& lhs, const Rational& rhs_scale, Bracket&& bracket) {
  if (sgn(rhs_scale) == 0) return sgn(lhs) <= 0 ? Verdict::holds : Verdict::violated;
  for (unsigned long bits : {64UL, 256UL, 1024UL, 4096UL}) {
    auto [lo, hi] = bracket(bits);
    if (lhs <= rhs_scale * lo) return Verdict::holds;
    if (lhs > rhs_scale * hi) return Verdict::violated;
  }
  return Verdict::undecided;
}

}  // namespace detail

/// Factors of the uniform-encoder step for ground size N and gamma = a/b.
class UniformFactor {
 public:
  UniformFactor(std::uint64_t N, const Rational& gamma) : N_(N), gamma_(gamma) {
    require(N >= 2, "transforms", "uniform-encoder step needs N >= 2");
    require(sgn(gamma) > 0 && gamma < 1, "transforms", "gamma must lie in (0,1)");
    a_ = to_u64(gamma.get_num(), "transforms", "gamma numerator");
    b_ = to_u64(gamma.get_den(), "transforms", "gamma denominator");
    kappa_ = to_u64(ceil(Rational(1) / gamma), "transforms", "kappa") + 1;
  }

  std::uint64_t kappa() const { return kappa_; }
  std::uint64_t a() const { return a_; }
  std::uint64_t b() const { return b_; }
  std::uint64_t N() const { return N_; }

  /// N^{gamma * e} bracketed (exact when it is an integer).
  RootBracket power(std::uint64_t e_num, unsigned long bits) const { return nth_root_bracket(pow(big(N_), e_num), b_, bits); }

  /// (1 + 2 gamma) N^gamma / (gamma (1 - N^-gamma)), increasing in the numerator and the denominator separately.
  std::pair<Rational, Rational> loose(unsigned long bits) const {
    const auto x = power(a_, bits);
    auto f = [&](const Rational& num_x, const Rational& den_x) -> Rational {
      return (1 + 2 * gamma_) * num_x / (gamma_ * (1 - 1 / den_x));
    };
    return {f(x.lo, x.hi), f(x.hi, x.lo)};
  }

  /// kappa N^gamma / (1 - N^-(gamma kappa - 1)).
  std::pair<Rational, Rational> internal(unsigned long bits) const {
    const auto x = power(a_, bits);
    const auto y = power(a_ * kappa_ - b_, bits);
    auto f = [&](const Rational& num_x, const Rational& den_y) -> Rational { return Rational(big(kappa_)) * num_x / (1 - 1 / den_y); };
    return {f(x.lo, y.hi), f(x.hi, y.lo)};
  }

  double loose_value() const {
    const double x = std::pow(static_cast<double>(N_), gamma_.get_d());
    return (1 + 2 * gamma_.get_d()) * x / (gamma_.get_d() * (1 - 1 / x));
  }
  double internal_value() const {
    const double x = std::pow(static_cast<double>(N_), gamma_.get_d());
    const double y = std::pow(static_cast<double>(N_), gamma_.get_d() * static_cast<double>(kappa_) - 1);
    return static_cast<double>(kappa_) * x / (1 - 1 / y);
  }

  /// Bin index l in [1, kappa] with N^{-gamma l} < Q <= N^{-gamma (l-1)}, or 0 if Q <= N^{-gamma kappa}.
  std::uint64_t bin_of(const Rational& Q) const {
    if (sgn(Q) <= 0) return 0;
    const BigInt qb_num = pow(Q.get_num(), b_);
    const BigInt qb_den = pow(Q.get_den(), b_);
    BigInt Npow = 1;
    const BigInt Na = pow(big(N_), a_);
    for (std::uint64_t l = 1; l <= kappa_; ++l) {
      Npow *= Na;                        // N^{a l}
      if (qb_num * Npow > qb_den) return l;  // Q^b N^{a l} > 1
    }
    return 0;
  }

 private:
  std::uint64_t N_;
  Rational gamma_;
  std::uint64_t a_ = 0;
  std::uint64_t b_ = 1;
  std::uint64_t kappa_ = 0;
};

struct UniformStepInfo {
  std::uint64_t kappa = 0;
  std::vector<std::uint64_t> chosen_bin;  // l_i^*, 1-based bin labels
  double loose_factor = 0;
  double internal_factor = 0;
  LemmaCheck internal_check;
};

/// Each encoder becomes uniform on its heaviest bin B(l_i^*, i); ties go to the smallest l.
inline TransformResult<UniformStepInfo> to_uniform_encoders(const NoiselessIdCode& code, const Rational& gamma) {
  if (!code.deterministic) fail("transforms", errc::precondition, "uniform-encoder step needs deterministic decoders");
  const UniformFactor factor(code.N, gamma);
  TransformResult<UniformStepInfo> out;
  out.before = eval_noiseless(code, kFullMatrix);
  out.extra.kappa = factor.kappa();
  out.extra.loose_factor = factor.loose_value();
  out.extra.internal_factor = factor.internal_value();
  std::vector<Dist> encoders;
  for (std::uint64_t i = 0; i < code.M(); ++i) {
    std::vector<std::vector<std::uint64_t>> bins(factor.kappa() + 1);
    std::vector<Rational> bin_mass(factor.kappa() + 1);
    for (auto k : code.encoders[i].support()) {
      const auto l = factor.bin_of(code.encoders[i][k]);
      if (l == 0) continue;
      bins[l].push_back(k);
      bin_mass[l] += code.encoders[i][k];
    }
    std::uint64_t best = 0;
    for (std::uint64_t l = 1; l <= factor.kappa(); ++l)
      if (!bins[l].empty() && (best == 0 || bin_mass[l] > bin_mass[best])) best = l;
    if (best == 0) fail("transforms", errc::invariant, "encoder " + std::to_string(i) + " has every bin empty");
    out.extra.chosen_bin.push_back(best);
    encoders.push_back(Dist::uniform_on(code.N, bins[best]));
  }
  std::vector<std::vector<std::uint64_t>> decoders;
  for (std::uint64_t i = 0; i < code.M(); ++i) decoders.push_back(code.decoder_set(i));
  out.code = NoiselessIdCode::make_deterministic(code.N, std::move(encoders), decoders);
  out.after = eval_noiseless(out.code, kFullMatrix);

  out.check.lemma = "uniform encoders (published factor)";
  out.extra.internal_check.lemma = "uniform encoders (kappa factor)";
  for (std::uint64_t i = 0; i < code.M(); ++i)
    for (std::uint64_t j = 0; j < code.M(); ++j) {
      const Rational& old_v = entry(out.before, i, j);
      const Rational& new_v = entry(out.after, i, j);
      auto run = [&](LemmaCheck& check, auto bracket) {
        const Verdict v = detail::certified_leq(new_v, old_v, bracket);
        if (v == Verdict::undecided) {
          ++check.checked;
          ++check.undecided;
          return;
        }
        check.record(v == Verdict::holds, entry_name(i, j) + " exceeds factor bound");
        if (sgn(old_v) > 0 && old_v * bracket(64).first >= 1) ++check.vacuous;
      };
      run(out.check, [&](unsigned long bits) { return factor.loose(bits); });
      run(out.extra.internal_check, [&](unsigned long bits) { return factor.internal(bits); });
    }
  return out;
}

/// gamma = mu / (4 (q - 1)): one-shot and second multi-block choice.
inline Rational gamma_preset_oneshot(const Rational& mu, std::uint32_t q) {
  Rational g = mu / (4 * Rational(q - 1));
  g.canonicalize();
  return g;
}

/// gamma = mu / (4 l (q - 1)): first multi-block choice.
inline Rational gamma_preset_multishot(const Rational& mu, std::uint32_t q, std::uint32_t l) {
  Rational g = mu / (4 * Rational(static_cast<unsigned long>(l) * (q - 1)));
  g.canonicalize();
  return g;
}

inline bool is_uniform_encoder_code(const NoiselessIdCode& code) {
  return std::all_of(code.encoders.begin(), code.encoders.end(), [](const Dist& d) { return d.is_uniform_on_support(); });
}

/// G_i = supp(Q_i) intersect D_i used as both support and decoder.
inline TransformResult<> decoder_equals_support(const NoiselessIdCode& code) {
  if (!code.deterministic) fail("transforms", errc::precondition, "support step needs deterministic decoders");
  if (!is_uniform_encoder_code(code)) fail("transforms", errc::precondition, "support step needs uniform encoders");
  TransformResult<> out;
  out.before = eval_noiseless(code, kFullMatrix);
  std::vector<Dist> encoders;
  std::vector<std::vector<std::uint64_t>> decoders;
  for (std::uint64_t i = 0; i < code.M(); ++i) {
    std::vector<std::uint64_t> G;
    for (auto k : code.encoders[i].support())
      if (code.accept[i][k] == 1) G.push_back(k);
    if (G.empty())
      fail("transforms", errc::infeasible,
           "support step inapplicable: message " + std::to_string(i) + " has empty support-decoder intersection (miss probability 1)");
    encoders.push_back(Dist::uniform_on(code.N, G));
    decoders.push_back(std::move(G));
  }
  out.code = NoiselessIdCode::make_deterministic(code.N, std::move(encoders), decoders);
  out.after = eval_noiseless(out.code, kFullMatrix);
  out.check.lemma = "decoders equal supports";
  for (std::uint64_t i = 0; i < code.M(); ++i)
    for (std::uint64_t j = 0; j < code.M(); ++j) {
      const Rational& new_v = entry(out.after, i, j);
      if (i == j) {
        out.check.record(sgn(new_v) == 0, entry_name(i, j) + " is not zero");
      } else {
        // new <= old / (1 - miss_i)
        const Rational keep = 1 - (*out.before.missed)[i];
        out.check.record(new_v * keep <= entry(out.before, i, j), entry_name(i, j) + " exceeds old / (1 - miss)");
      }
    }
  return out;
}

struct EqualSizeInfo {
  std::uint64_t support_size = 0;      // k*
  std::vector<std::uint64_t> kept;     // original message indices
};

/// Keeps the most populated support-size class; ties go to the smallest size.
inline TransformResult<EqualSizeInfo> equal_size_supports(const NoiselessIdCode& code) {
  if (!code.deterministic || !is_uniform_encoder_code(code))
    fail("transforms", errc::precondition, "equal-size step needs uniform encoders and deterministic decoders");
  for (std::uint64_t i = 0; i < code.M(); ++i)
    if (code.encoders[i].support() != code.decoder_set(i))
      fail("transforms", errc::precondition, "equal-size step needs decoders equal to supports");
  TransformResult<EqualSizeInfo> out;
  out.before = eval_noiseless(code, kFullMatrix);
  std::map<std::uint64_t, std::vector<std::uint64_t>> bins;
  for (std::uint64_t i = 0; i < code.M(); ++i) bins[code.encoders[i].support().size()].push_back(i);
  auto best = bins.begin();
  for (auto it = bins.begin(); it != bins.end(); ++it)
    if (it->second.size() > best->second.size()) best = it;
  out.extra.support_size = best->first;
  out.extra.kept = best->second;
  std::vector<Dist> encoders;
  std::vector<std::vector<std::uint64_t>> decoders;
  for (auto i : out.extra.kept) {
    encoders.push_back(code.encoders[i]);
    decoders.push_back(code.decoder_set(i));
  }
  out.code = NoiselessIdCode::make_deterministic(code.N, std::move(encoders), decoders);
  out.after = eval_noiseless(out.code, kFullMatrix);
  out.check.lemma = "equal support sizes";
  const BigInt floor_count = ceil(Rational(big(code.M()), big(code.N)));
  out.check.record(big(out.code.M()) >= floor_count, "kept " + std::to_string(out.code.M()) + " < ceil(M/N)");
  out.check.record(out.after.lambda1 <= out.before.lambda1, "lambda1 increased");
  out.check.record(out.after.lambda2 <= out.before.lambda2, "lambda2 increased");
  return out;
}

struct PipelineStep {
  std::string name;
  ErrorReport report;
  LemmaCheck check;
  std::uint64_t M = 0;
};

struct PipelineReport {
  Rational gamma;
  std::vector<PipelineStep> steps;  // step 0 is the input code
  std::vector<std::uint64_t> chosen_bin;
  std::uint64_t kappa = 0;
  double loose_factor = 0;
  double internal_factor = 0;
  std::uint64_t support_size = 0;
  std::vector<std::uint64_t> kept;
  SetSystem system;
  IntersectionProfile profile;
  bool distinct = false;
  bool ratio_matches_lambda2 = false;
  std::optional<double> prop2_bound;  // when M' > 1 + N/alpha
  std::optional<bool> prop2_holds;
  NoiselessIdCode final_code;

  bool ok() const {
    for (const auto& s : steps)
      if (!s.check.ok()) return false;
    return ratio_matches_lambda2 && prop2_holds.value_or(true);
  }
};

/// Runs every step in order; any step that cannot apply throws with its origin.
inline PipelineReport soft_converse_pipeline(const PermIdCode& code, const Rational& gamma,
                                             std::optional<Rational> alpha = std::nullopt) {
  PipelineReport out;
  out.gamma = gamma;
  const auto input = eval_perm_exact(code, kFullMatrix);
  out.steps.push_back({"input", input, LemmaCheck{"input", 0, 0, 0, 0, {}}, code.M()});

  auto noiseless = perm_to_noiseless_multishot(code, code.l);
  PipelineStep s1{"noiseless image", eval_noiseless(noiseless, kFullMatrix), LemmaCheck{"noiseless image is error-exact", 0, 0, 0, 0, {}}, noiseless.M()};
  s1.check.record(s1.report == input, "error matrices differ");
  out.steps.push_back(std::move(s1));

  auto s2 = stoch_to_det_decoders(noiseless);
  out.steps.push_back({"threshold decoders", s2.after, s2.check, s2.code.M()});

  auto s3 = to_uniform_encoders(s2.code, gamma);
  out.chosen_bin = s3.extra.chosen_bin;
  out.kappa = s3.extra.kappa;
  out.loose_factor = s3.extra.loose_factor;
  out.internal_factor = s3.extra.internal_factor;
  out.steps.push_back({"uniform encoders", s3.after, s3.check, s3.code.M()});
  out.steps.push_back({"uniform encoders (kappa factor)", s3.after, s3.extra.internal_check, s3.code.M()});

  auto s4 = decoder_equals_support(s3.code);
  out.steps.push_back({"decoders equal supports", s4.after, s4.check, s4.code.M()});

  auto s5 = equal_size_supports(s4.code);
  out.support_size = s5.extra.support_size;
  out.kept = s5.extra.kept;
  out.steps.push_back({"equal support sizes", s5.after, s5.check, s5.code.M()});

  std::vector<Subset> sets;
  for (const auto& d : s5.code.encoders) {
    Subset s;
    for (auto k : d.support()) s.push_back(static_cast<std::uint32_t>(k));
    sets.push_back(std::move(s));
  }
  out.system = SetSystem::make(s5.code.N, std::move(sets));
  out.distinct = out.system.is_distinct();
  out.profile = verify_profile(out.system);
  out.ratio_matches_lambda2 = out.profile.ratio() == s5.after.lambda2;
  if (alpha) {
    const BigInt M = big(out.system.size());
    if (Rational(M) > lemma6_size_cap(out.system.N, *alpha)) {
      out.prop2_bound = prop2_lower_bound(out.system.N, M, *alpha);
      out.prop2_holds = out.profile.ratio().get_d() >= *out.prop2_bound - 1e-12;
    }
  }
  out.final_code = std::move(s5.code);
  return out;
}

}  // namespace permid
