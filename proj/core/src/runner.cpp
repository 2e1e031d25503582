#include "wittkit/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <thread>

#include "wittkit/almost.hpp"
#include "wittkit/errors.hpp"
#include "wittkit/modifications.hpp"
#include "wittkit/polyparse.hpp"
#include "wittkit/splitting.hpp"
#include "wittkit/towers.hpp"
#include "wittkit/witt_checks.hpp"

namespace wittkit {

using json = nlohmann::ordered_json;

namespace {

/// Comma-separated items with the column of each item's first character.
std::vector<std::pair<std::string, int>> items_with_columns(const SpecEntry& e) {
  std::vector<std::pair<std::string, int>> out;
  std::size_t start = 0;
  while (start <= e.value.size()) {
    std::size_t end = e.value.find(',', start);
    if (end == std::string::npos) end = e.value.size();
    std::string item = e.value.substr(start, end - start);
    std::size_t lead = item.find_first_not_of(" \t");
    if (lead == std::string::npos) throw SyntaxError("empty list item in " + e.key, e.line, e.column + static_cast<int>(start));
    item = item.substr(lead, item.find_last_not_of(" \t") - lead + 1);
    out.emplace_back(item, e.column + static_cast<int>(start + lead));
    start = end + 1;
  }
  return out;
}

PolyElement parse_entry(const AlgebraPtr& alg, const SpecEntry& e) {
  return parse_polynomial(e.value, alg, e.line, e.column);
}

std::vector<PolyElement> parse_entry_list(const AlgebraPtr& alg, const SpecEntry& e) {
  std::vector<PolyElement> out;
  for (const auto& [item, col] : items_with_columns(e)) out.push_back(parse_polynomial(item, alg, e.line, col));
  return out;
}

json strings(const std::vector<PolyElement>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.str());
  return out;
}

json certificate_json(const MembershipCertificate& c, bool& all_verified) {
  json out;
  out["target"] = c.target.str();
  out["generators"] = strings(c.generators);
  out["member"] = c.is_member();
  out["coefficients"] = c.coefficients ? strings(*c.coefficients) : json(nullptr);
  const bool ok = !c.is_member() || c.verify();
  out["verified"] = ok;
  all_verified = all_verified && ok;
  return out;
}

json precision_json(const AlgebraPtr& alg, json n) {
  json out;
  out["N"] = alg->effective_precision();
  out["n"] = std::move(n);
  out["D"] = alg->cap() ? json(*alg->cap()) : json(nullptr);
  return out;
}

Verdict verdict_of(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

std::string expect_of(const SpecBlock& b, const std::string& fallback, const std::vector<std::string>& allowed) {
  const auto* e = b.entry("expect");
  if (!e) return fallback;
  if (std::find(allowed.begin(), allowed.end(), e->value) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw SyntaxError("expect must be one of " + list, e->line, e->column);
  }
  return e->value;
}

/// The ring a check runs over: a declared algebra or a tower level.
struct Ring {
  AlgebraPtr A;
  std::optional<TowerLevel> level;
  json n = nullptr;
};

Ring ring_of(const SpecBlock& b, const SpecEnvironment& env, long default_level = 1) {
  Ring r;
  if (auto t = b.get("tower")) {
    const long n = entry_int(b, "level", default_level, 0, kMaxLevel);
    r.level = build_level(env.towers.at(*t), static_cast<int>(n));
    r.A = r.level->A;
    r.n = n;
  } else {
    r.A = env.algebras.at(*b.get("algebra"));
    r.n = r.A->level();
  }
  return r;
}

std::vector<PolyElement> sop_of(const SpecBlock& b, const Ring& r) {
  if (const auto* e = b.entry("sop")) return parse_entry_list(r.A, *e);
  return canonical_sop(*r.level);
}

// ---------------------------------------------------------------- checks

void run_witt_identities(const SpecBlock& b, std::uint64_t seed, CheckResult& out) {
  const long p = entry_int(b, "p", 2, 2, 5);
  const int n = static_cast<int>(entry_int(b, "n", 1, 1, kMaxLevel));
  const int samples = static_cast<int>(entry_int(b, "samples", 100, 1, 100000));
  const int modulus_exp = 6;
  const auto rep = witt_property_suite(p, n, samples, seed, modulus_exp);
  json props = json::array();
  for (const auto& t : rep.properties) props.push_back({{"name", t.name}, {"samples", t.samples}, {"failures", t.failures}});
  out.details["p"] = p;
  out.details["seed"] = seed;
  out.details["properties"] = std::move(props);
  out.precision = {{"N", modulus_exp}, {"n", n}, {"D", nullptr}};
  out.verdict = verdict_of(rep.pass());
}

void run_tower_frobenius(const SpecBlock& b, const SpecEnvironment& env, CheckResult& out) {
  const auto& spec = env.towers.at(*b.get("tower"));
  const int n = static_cast<int>(entry_int(b, "level", 0, 0, kMaxLevel));
  const std::int64_t degree = entry_int(b, "degree", 6, 0, 1000);
  const auto rep = frob_surjectivity_report(spec, n, degree);
  json unrooted = json::array();
  bool roots_ok = true;
  for (const auto& r : rep.roots)
    if (!r.verified) {
      unrooted.push_back(r.monomial);
      roots_ok = false;
    }
  out.details["up_to_degree"] = rep.up_to_degree;
  out.details["monomials"] = rep.roots.size();
  out.details["rooted"] = rep.rooted;
  out.details["same_level_rooted"] = rep.same_level_rooted;
  out.details["unrooted"] = std::move(unrooted);
  out.details["nilpotent"] = rep.nilpotent;
  out.details["nilpotency_bound"] = rep.nilpotency_bound;
  out.details["nilpotency_exact"] = rep.nilpotency_exact ? json(*rep.nilpotency_exact) : json(nullptr);
  out.details["nilpotency_certified"] = rep.nilpotency_certified;
  out.details["witness_nonzero_mod_p"] = rep.witness_nonzero_mod_p;
  out.certificates_verified = roots_ok && rep.nilpotency_certified;
  out.precision = precision_json(build_level(spec, n).A, n);
  const bool exact_ok = !rep.nilpotency_exact || *rep.nilpotency_exact <= rep.nilpotency_bound;
  // At level 0 the witness is p itself, so only nilpotency is asked for.
  const bool witness_ok = n == 0 || rep.witness_nonzero_mod_p;
  out.verdict = verdict_of(rep.all_rooted() && rep.nilpotency_certified && witness_ok && exact_ok);
}

void run_p_big(const SpecBlock& b, const SpecEnvironment& env, CheckResult& out) {
  const auto& spec = env.towers.at(*b.get("tower"));
  const int m = static_cast<int>(entry_int(b, "levels", 1, 0, kMaxLevel));
  const auto w = p_big_sequence(spec, m);
  out.details["pis"] = strings(w.pis);
  out.details["units"] = strings(w.units);
  out.details["verified"] = w.verified;
  out.certificates_verified = w.verified;
  out.precision = precision_json(build_level(spec, m).A, m);
  out.verdict = verdict_of(w.verified);
}

void run_uniformizer(const SpecBlock& b, const SpecEnvironment& env, CheckResult& out) {
  const auto& spec = env.towers.at(*b.get("tower"));
  const int n = static_cast<int>(entry_int(b, "level", 1, 1, kMaxLevel));
  const auto level = build_level(spec, n);
  const auto u = ramified_uniformizer(level, default_decomposition(spec));
  out.details["pi"] = u.pi.str();
  out.details["u"] = u.u.str();
  out.details["u_inverse"] = u.u_inverse.str();
  // pi^p = p u and u u^{-1} = 1, recomputed here rather than trusted.
  const bool relation = u.pi.pow(static_cast<std::uint64_t>(spec.p)) == u.u * Integer(spec.p);
  const bool unit = (u.u * u.u_inverse).is_one();
  out.details["pi_p_equals_p_u"] = relation;
  out.details["u_unit"] = unit;
  out.certificates_verified = u.verified && relation && unit;
  out.precision = precision_json(level.A, n);
  out.verdict = verdict_of(out.certificates_verified);
}

void run_witt_perfect(const SpecBlock& b, const SpecEnvironment& env, CheckResult& out) {
  const auto& spec = env.towers.at(*b.get("tower"));
  const int n = static_cast<int>(entry_int(b, "level", 1, 0, kMaxLevel));
  const auto w = witt_perfect_criterion(spec, n);
  bool ok = true;
  out.details["r"] = w.r.str();
  out.details["s"] = w.s.str();
  out.details["N"] = w.Nexp;
  out.details["congruence"] = certificate_json(w.congruence, ok);
  out.details["power"] = certificate_json(w.power, ok);
  out.certificates_verified = ok;
  out.precision = precision_json(w.r.algebra(), w.level);
  out.verdict = verdict_of(w.verified() && w.congruence.is_member() && w.power.is_member());
}

void run_colon_defect(const SpecBlock& b, const SpecEnvironment& env, CheckResult& out) {
  const auto ring = ring_of(b, env, 0);
  const auto sop = sop_of(b, ring);
  const std::string expect = expect_of(b, "almost-zero", {"almost-zero", "Zero", "AlmostZeroAtScale", "NotAlmostZero"});
  const std::vector<Killer> killers = ring.level ? tower_killers(*ring.level) : std::vector<Killer>{};
  std::vector<int> indices;
  if (b.entry("index")) {
    indices.push_back(static_cast<int>(entry_int(b, "index", 0, 0, static_cast<long>(sop.size()) - 2)));
  } else {
    for (int i = 0; i + 1 < static_cast<int>(sop.size()); ++i) indices.push_back(i);
  }
  bool all = true;
  json per = json::array();
  for (int i : indices) {
    const auto rep = colon_defect(sop, i, killers);
    json k = json::object();
    for (const auto& [lvl, kills] : rep.killers) k[std::to_string(lvl)] = kills;
    const std::string v = to_string(rep.verdict);
    per.push_back({{"index", i},
                   {"verdict", v},
                   {"colon_dimension", rep.colon_basis.size()},
                   {"killers", std::move(k)},
                   {"witness", rep.witness}});
    all = all && (expect == "almost-zero" ? rep.verdict != DefectVerdict::NotAlmostZero : v == expect);
  }
  out.details["sop"] = strings(sop);
  out.details["expect"] = expect;
  out.details["indices"] = std::move(per);
  out.precision = precision_json(ring.A, ring.n);
  out.verdict = verdict_of(all);
}

ParameterRelation relation_of(const SpecBlock& b, const Module& M, const std::vector<PolyElement>& sop) {
  const int k = static_cast<int>(entry_int(b, "k", 1, 0, static_cast<long>(sop.size()) - 1));
  const auto* ue = b.entry("u");
  if (!ue) throw SyntaxError("missing key 'u' in " + b.name, b.line, b.column);
  const auto us = parse_entry_list(M.ring, *ue);
  if (static_cast<int>(us.size()) != k + 1)
    throw SyntaxError("u needs k+1 = " + std::to_string(k + 1) + " entries", ue->line, ue->column);
  ParameterRelation rel;
  rel.k = k;
  rel.xs.assign(sop.begin(), sop.begin() + k + 1);
  for (const auto& u : us) rel.us.push_back(to_vector(u));
  return rel;
}

void run_random_sequences(const SpecBlock& b, const Ring& ring, std::uint64_t seed, CheckResult& out) {
  const auto sop = sop_of(b, ring);
  const int sequences = static_cast<int>(entry_int(b, "sequences", 50, 1, 10000));
  const int steps = static_cast<int>(entry_int(b, "steps", 3, 1, 10));
  const int N = static_cast<int>(entry_int(b, "N", 1, 0, 6));
  int bad = 0;
  std::size_t max_dim = 0;
  json bad_seeds = json::array();
  for (int s = 1; s <= sequences; ++s) {
    const std::uint64_t seq_seed = seed + static_cast<std::uint64_t>(s);
    const int r = 1 + static_cast<int>(seq_seed % static_cast<std::uint64_t>(steps));
    const auto seq = random_admissible_sequence(ring.A, sop, r, N, seq_seed);
    max_dim = std::max(max_dim, seq.final_module().dim);
    if (seq.bad) {
      ++bad;
      bad_seeds.push_back(seq_seed);
    }
  }
  out.details["seed"] = seed;
  out.details["sequences"] = sequences;
  out.details["max_steps"] = steps;
  out.details["bad"] = bad;
  out.details["bad_seeds"] = std::move(bad_seeds);
  out.details["max_dimension"] = max_dim;
  out.precision = precision_json(ring.A, ring.n);
  out.verdict = verdict_of(bad == 0);
}

void run_modification(const SpecBlock& b, const SpecEnvironment& env, std::uint64_t seed, CheckResult& out) {
  const auto ring = ring_of(b, env);
  if (b.entry("sequences")) return run_random_sequences(b, ring, seed, out);
  const auto M = module_from_algebra(ring.A);
  const auto sop = sop_of(b, ring);
  const int N = static_cast<int>(entry_int(b, "N", 1, 0, 6));
  const auto mod = build_modification(M, relation_of(b, M, sop), N);
  const auto cert = check_trivialization(mod);
  const bool verified = cert.holds && cert.verify(mod);
  out.details["source_dimension"] = M.dim;
  out.details["target_dimension"] = mod.target.dim;
  out.details["blocks"] = mod.x_monomials.size();
  out.details["denominator_generators"] = mod.denominator_generators;
  out.details["trivialized"] = cert.holds;
  out.details["certificate_verified"] = verified;
  out.certificates_verified = !cert.holds || verified;
  out.precision = precision_json(ring.A, ring.n);
  out.verdict = verdict_of(verified);
}

void run_lemma51(const SpecBlock& b, const SpecEnvironment& env, CheckResult& out) {
  const auto ring = ring_of(b, env);
  const auto M = module_from_algebra(ring.A);
  const auto sop = sop_of(b, ring);
  const int N = static_cast<int>(entry_int(b, "N", 1, 0, 6));
  const int alpha_exp = static_cast<int>(entry_int(b, "alpha_exp", 1, 0, 20));
  const std::string expect = expect_of(b, "pass", {"pass", "violation"});
  const PolyElement c = b.entry("c") ? parse_entry(ring.A, *b.entry("c")) : ring.A->unit();
  const auto mod = build_modification(M, relation_of(b, M, sop), N);
  out.details["c"] = c.str();
  out.details["expect"] = expect;
  out.precision = precision_json(ring.A, ring.n);
  try {
    const auto r = lemma51_beta(mod, inclusion_map(M, c, alpha_exp));
    bool ok = true;
    out.details["hypothesis"] = certificate_json(r.hypothesis, ok);
    out.details["alpha_linear"] = r.alpha_linear;
    out.details["square_commutes"] = r.square_commutes;
    out.details["kills_denominator"] = r.kills_denominator;
    out.details["beta_linear"] = r.beta_linear;
    out.details["denominator_exponent"] = r.beta.denom_exp;
    out.details["bound"] = r.bound;
    out.certificates_verified = ok;
    out.verdict = verdict_of(expect == "pass" && r.verified());
  } catch (const AlmostCMViolation& e) {
    out.details["violation"] = e.what();
    out.verdict = verdict_of(expect == "violation");
  }
}

/// Coefficients h_0..h_m of a polynomial in z over `base`.
std::vector<PolyElement> z_coefficients(const AlgebraPtr& base, const SpecEntry& h, const std::string& z) {
  if (base->var_index(z)) throw SyntaxError("generator '" + z + "' clashes with a base variable", h.line, h.column);
  AlgebraSpec spec = base->spec();
  spec.vars.push_back(Variable{z, 1, false});
  const auto Az = TruncatedAlgebra::create(spec);
  const auto poly = parse_entry(Az, h);
  const int zi = Az->nvars() - 1;
  std::map<std::int64_t, Terms> by_degree;
  for (const auto& [mono, coeff] : poly.terms()) {
    if (mono.exps[static_cast<std::size_t>(zi)] % Az->scale() != 0)
      throw SyntaxError("h needs integral powers of " + z, h.line, h.column);
    auto exps = mono.exps;
    const std::int64_t deg = exps[static_cast<std::size_t>(zi)] / Az->scale();
    exps[static_cast<std::size_t>(zi)] = 0;
    by_degree[deg][Az->monomial(exps)] += coeff;
  }
  if (by_degree.empty()) throw NotMonic("h is zero");
  std::vector<PolyElement> out(static_cast<std::size_t>(by_degree.rbegin()->first) + 1, base->zero());
  for (auto& [deg, terms] : by_degree) out[static_cast<std::size_t>(deg)] = PolyElement(Az, terms).convert(base);
  return out;
}

FiniteAlgebraPresentation presentation_of(const SpecBlock& b, const SpecEnvironment& env) {
  const auto& R = env.algebras.at(*b.get("base"));
  if (auto t = b.get("target")) {
    const auto& S = env.algebras.at(*t);
    std::vector<PolyElement> images;
    for (const auto& v : R->vars()) {
      if (!S->var_index(v.name)) throw InvalidSpec("target " + *t + " has no variable " + v.name);
      images.push_back(S->var(v.name));
    }
    return presentation_from_map(R, S, images);
  }
  const std::string z = b.get("z").value_or("z");
  return monogenic_extension(R, z_coefficients(R, *b.entry("h"), z), z);
}

json etale_json(const EtaleReport& rep, bool& ok) {
  json out;
  out["verdict"] = to_string(rep.verdict);
  out["discriminant"] = rep.disc.str();
  out["a"] = rep.a >= 0 ? json(rep.a) : json(nullptr);
  out["searched_up_to"] = rep.searched_up_to;
  out["certificate"] = rep.certificate ? certificate_json(*rep.certificate, ok) : json(nullptr);
  return out;
}

void run_split(const SpecBlock& b, const SpecEnvironment& env, CheckResult& out) {
  const auto P = presentation_of(b, env);
  const auto sop = parse_entry_list(P.base, *b.entry("sop"));
  const int k_max = static_cast<int>(entry_int(b, "k", 3, 1, 8));
  const int a_max = static_cast<int>(entry_int(b, "a_max", 5, 0, 60));
  const std::string expect = expect_of(b, "split", {"split", "member", "nonsplit"});
  bool ok = true;
  SplitVerdict split;
  std::optional<EtaleReport> etale;
  if (P.monic) etale = etale_away_from_p(P, a_max);
  split.per_k = monomial_check(P, sop, k_max);
  split.retraction = retraction_solver(P);
  json per = json::array();
  bool any_member = false, all_nonmember = true;
  for (const auto& [k, c] : split.per_k) {
    per.push_back({{"k", k}, {"verdict", c.member() ? "Member" : "NonMemberAtTruncation"},
                   {"certificate", certificate_json(c.certificate, ok)}});
    any_member = any_member || c.member();
    all_nonmember = all_nonmember && !c.member();
  }
  const bool retraction = split.retraction && split.retraction->verified;
  out.details["etale"] = etale ? etale_json(*etale, ok) : json(nullptr);
  out.details["monomial"] = std::move(per);
  json phi = nullptr;
  if (split.retraction) {
    phi = json::object();
    phi["values"] = strings(split.retraction->values);
    phi["phi_one"] = split.retraction->apply(P, P.one()).str();
    phi["verified"] = split.retraction->verified;
    ok = ok && split.retraction->verified;
  }
  out.details["retraction"] = std::move(phi);
  out.details["expect"] = expect;
  out.certificates_verified = ok;
  out.precision = precision_json(P.S, P.S->level());
  bool pass = false;
  if (expect == "split") {
    pass = (!etale || etale->verdict == EtaleVerdict::Etale) && all_nonmember && retraction;
  } else if (expect == "member") {
    pass = any_member;
  } else {
    pass = !split.retraction;
  }
  out.verdict = verdict_of(pass);
}

void run_etale(const SpecBlock& b, const SpecEnvironment& env, CheckResult& out) {
  const auto P = presentation_of(b, env);
  const int a_max = static_cast<int>(entry_int(b, "a_max", 5, 0, 60));
  const std::string expect = expect_of(b, "Etale", {"Etale", "NotEtaleAwayFromP"});
  const auto rep = etale_away_from_p(P, a_max);
  bool ok = true;
  out.details = etale_json(rep, ok);
  out.details["expect"] = expect;
  out.certificates_verified = ok;
  out.precision = precision_json(P.base, P.base->level());
  out.verdict = verdict_of(to_string(rep.verdict) == expect);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Error: return "error";
  }
  return "error";
}

bool RunReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.verdict == Verdict::Pass && c.certificates_verified; });
}

json RunReport::to_json(bool timing) const {
  json out;
  out["schema"] = "wittkit/1";
  out["seed"] = seed;
  json list = json::array();
  for (const auto& c : checks) {
    json r;
    r["name"] = c.name;
    r["kind"] = c.kind;
    r["verdict"] = to_string(c.verdict);
    r["certificates_verified"] = c.certificates_verified;
    r["precision"] = c.precision;
    r["details"] = c.details;
    if (timing) r["wall_time_ms"] = c.wall_time_ms;
    list.push_back(std::move(r));
  }
  out["checks"] = std::move(list);
  out["overall"] = pass() ? "pass" : "fail";
  return out;
}

CheckResult run_check(const SpecBlock& b, const SpecEnvironment& env, const RunOptions& options) {
  CheckResult out;
  out.name = b.name;
  out.kind = b.kind;
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed =
      b.entry("seed") ? static_cast<std::uint64_t>(entry_int(b, "seed", 0, 0, 1L << 62)) : options.seed;
  try {
    if (b.kind == "witt-identities") {
      run_witt_identities(b, seed, out);
    } else if (b.kind == "tower-frobenius") {
      run_tower_frobenius(b, env, out);
    } else if (b.kind == "p-big") {
      run_p_big(b, env, out);
    } else if (b.kind == "uniformizer") {
      run_uniformizer(b, env, out);
    } else if (b.kind == "witt-perfect") {
      run_witt_perfect(b, env, out);
    } else if (b.kind == "colon-defect") {
      run_colon_defect(b, env, out);
    } else if (b.kind == "modification") {
      run_modification(b, env, seed, out);
    } else if (b.kind == "lemma51") {
      run_lemma51(b, env, out);
    } else if (b.kind == "split") {
      run_split(b, env, out);
    } else if (b.kind == "etale") {
      run_etale(b, env, out);
    } else {
      throw InvalidSpec("unknown check kind " + b.kind);
    }
  } catch (const Error& e) {
    out.verdict = Verdict::Error;
    out.details = {{"error", e.kind()}, {"message", e.what()}};
  } catch (const std::exception& e) {
    out.verdict = Verdict::Error;
    out.details = {{"error", "internal"}, {"message", e.what()}};
  }
  out.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunReport run_checks(const CheckPlan& plan, const RunOptions& options) {
  const auto env = build_environment(plan);
  std::vector<const SpecBlock*> checks;
  for (const auto& b : plan.blocks)
    if (b.type == BlockType::Check) checks.push_back(&b);

  RunReport report;
  report.seed = options.seed;
  report.checks.resize(checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < checks.size(); i = next++) report.checks[i] = run_check(*checks[i], env, options);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(checks.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

}  // namespace wittkit
