#include "wittkit/algebra.hpp"

#include <algorithm>
#include <sstream>

#include "wittkit/errors.hpp"

namespace wittkit {

namespace {

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool divides(const Monomial& a, const Monomial& b) {
  for (int i = 0; i < kMaxVars; ++i)
    if (a.exps[i] > b.exps[i]) return false;
  return true;
}

std::int64_t checked_pow(long p, int e) {
  std::int64_t out = 1;
  for (int i = 0; i < e; ++i) {
    if (out > (std::int64_t{1} << 40)) throw CapExceeded("level too large");
    out *= p;
  }
  return out;
}

}  // namespace

bool Monomial::is_one() const {
  return std::all_of(exps.begin(), exps.end(), [](std::int32_t e) { return e == 0; });
}

std::string format_exponent(std::int64_t scaled, long p, int level) {
  while (level > 0 && scaled % p == 0) {
    scaled /= p;
    --level;
  }
  if (level == 0) return scaled == 1 ? "" : "^" + std::to_string(scaled);
  std::string den = level == 1 ? "p" : "p^" + std::to_string(level);
  return "^(" + std::to_string(scaled) + "/" + den + ")";
}

// ---------------------------------------------------------------------------
// TruncatedAlgebra

TruncatedAlgebra::TruncatedAlgebra(AlgebraSpec spec) : spec_(std::move(spec)) {
  if (!is_prime(spec_.p)) throw InvalidAlgebra("p = " + std::to_string(spec_.p) + " is not prime");
  if (spec_.vars.size() > static_cast<std::size_t>(kMaxVars))
    throw CapExceeded("at most " + std::to_string(kMaxVars) + " variables");
  if (spec_.level < 0) throw InvalidAlgebra("negative level");
  if (spec_.modulus < 0) throw InvalidAlgebra("negative modulus");
  if (spec_.cap && *spec_.cap < 0) throw InvalidAlgebra("negative degree cap");
  for (std::size_t i = 0; i < spec_.vars.size(); ++i) {
    if (spec_.vars[i].weight <= 0) throw InvalidAlgebra("variable weights must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (spec_.vars[i].name == spec_.vars[j].name)
        throw InvalidAlgebra("duplicate variable " + spec_.vars[i].name);
  }
  scale_ = checked_pow(spec_.p, spec_.level);
}

AlgebraPtr TruncatedAlgebra::create(AlgebraSpec spec) {
  return std::make_shared<const TruncatedAlgebra>(std::move(spec));
}

std::optional<std::int64_t> TruncatedAlgebra::scaled_cap() const {
  if (!spec_.cap) return std::nullopt;
  return *spec_.cap * scale_;
}

std::optional<int> TruncatedAlgebra::var_index(const std::string& name) const {
  for (int i = 0; i < nvars(); ++i)
    if (spec_.vars[i].name == name) return i;
  return std::nullopt;
}

Monomial TruncatedAlgebra::monomial(const std::array<std::int32_t, kMaxVars>& exps) const {
  Monomial m;
  m.exps = exps;
  for (int i = 0; i < nvars(); ++i) {
    if (exps[i] < 0) throw PreconditionViolation("negative exponent");
    if (spec_.vars[i].graded) m.degree += static_cast<std::int64_t>(spec_.vars[i].weight) * exps[i];
  }
  for (int i = nvars(); i < kMaxVars; ++i)
    if (exps[i] != 0) throw PreconditionViolation("exponent on undeclared variable");
  return m;
}

Monomial TruncatedAlgebra::var_monomial(int index, std::int32_t scaled_exp) const {
  std::array<std::int32_t, kMaxVars> e{};
  e[index] = scaled_exp;
  return monomial(e);
}

Monomial TruncatedAlgebra::multiply(const Monomial& a, const Monomial& b) const {
  Monomial m;
  m.degree = a.degree + b.degree;
  for (int i = 0; i < kMaxVars; ++i) m.exps[i] = a.exps[i] + b.exps[i];
  return m;
}

Terms TruncatedAlgebra::normalize(Terms raw) const {
  const auto cap = scaled_cap();
  Terms work = std::move(raw);
  Terms result;
  auto push = [&](const Monomial& m, Integer c) {
    if (cap && m.degree > *cap) return;
    if (c == 0) return;
    auto it = result.find(m);
    if (it != result.end()) {
      c += it->second;
      result.erase(it);
    }
    work[m] += c;
  };
  while (!work.empty()) {
    auto it = work.begin();
    const Monomial m = it->first;
    Integer c = std::move(it->second);
    work.erase(it);
    if (cap && m.degree > *cap) continue;
    if (spec_.modulus != 0) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), spec_.modulus.get_mpz_t());
    if (c == 0) continue;
    bool rewritten = false;
    for (const auto& rw : rewrites_) {
      if (!divides(rw.lead, m)) continue;
      Monomial q;
      q.degree = m.degree - rw.lead.degree;
      for (int i = 0; i < kMaxVars; ++i) q.exps[i] = m.exps[i] - rw.lead.exps[i];
      for (const auto& [tm, tc] : rw.tail) push(multiply(q, tm), c * tc);
      rewritten = true;
      break;
    }
    if (rewritten) continue;
    if (carry_) {
      Integer digit;
      mpz_fdiv_r_ui(digit.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(spec_.p));
      Integer up = c - digit;
      mpz_divexact_ui(up.get_mpz_t(), up.get_mpz_t(), static_cast<unsigned long>(spec_.p));
      if (up != 0)
        for (const auto& [gm, gc] : *carry_) push(multiply(m, gm), up * gc);
      c = digit;
      if (c == 0) continue;
    }
    result.emplace(m, std::move(c));
  }
  return result;
}

Terms TruncatedAlgebra::rescale_terms(const Terms& t, int from_level) const {
  Terms out;
  for (const auto& [m, c] : t) {
    std::array<std::int32_t, kMaxVars> e = m.exps;
    for (auto& x : e) {
      if (spec_.level >= from_level) {
        x = static_cast<std::int32_t>(x * checked_pow(spec_.p, spec_.level - from_level));
      } else {
        const auto f = checked_pow(spec_.p, from_level - spec_.level);
        if (x % f != 0) throw ExponentLevelMismatch("relation exponent not representable at level " +
                                                     std::to_string(spec_.level));
        x = static_cast<std::int32_t>(x / f);
      }
    }
    out[monomial(e)] += c;
  }
  return out;
}

AlgebraPtr TruncatedAlgebra::at_level(int level) const {
  AlgebraSpec s = spec_;
  s.level = level;
  auto out = std::make_shared<TruncatedAlgebra>(s);
  for (const auto& rw : rewrites_) {
    Terms lead_terms{{rw.lead, 1}};
    auto lead = out->rescale_terms(lead_terms, spec_.level).begin()->first;
    out->rewrites_.push_back({lead, out->rescale_terms(rw.tail, spec_.level)});
  }
  if (carry_) out->carry_ = out->rescale_terms(*carry_, spec_.level);
  return out;
}

AlgebraPtr TruncatedAlgebra::with_modulus(Integer modulus) const {
  if (carry_ && modulus != 0) throw InvalidAlgebra("p-carry models carry no coefficient modulus");
  auto out = std::make_shared<TruncatedAlgebra>(*this);
  out->spec_.modulus = std::move(modulus);
  out->rewrites_.clear();
  for (const auto& rw : rewrites_) {
    Terms tail;
    for (const auto& [m, c] : rw.tail) {
      Integer v = c;
      if (out->spec_.modulus != 0) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), out->spec_.modulus.get_mpz_t());
      if (v != 0) tail.emplace(m, v);
    }
    out->rewrites_.push_back({rw.lead, tail});
  }
  return out;
}

AlgebraPtr TruncatedAlgebra::lift() const {
  AlgebraSpec s = spec_;
  s.modulus = 0;
  return create(s);
}

TruncatedAlgebra::TruncatedAlgebra(const TruncatedAlgebra& o)
    : std::enable_shared_from_this<TruncatedAlgebra>(),
      spec_(o.spec_),
      scale_(o.scale_),
      rewrites_(o.rewrites_),
      carry_(o.carry_) {}

AlgebraPtr TruncatedAlgebra::with_rewrites(
    const std::vector<std::pair<PolyElement, PolyElement>>& rules) const {
  auto out = std::make_shared<TruncatedAlgebra>(*this);
  for (const auto& [lead, tail] : rules) {
    if (!same_shape(*lead.algebra()) || !same_shape(*tail.algebra()))
      throw InvalidAlgebra("relation uses a different variable set");
    if (lead.size() != 1 || lead.terms().begin()->second != 1)
      throw InvalidAlgebra("relation left-hand side must be a monomial with coefficient 1");
    Terms lt{{lead.terms().begin()->first, 1}};
    const Monomial lm = out->rescale_terms(lt, lead.algebra()->level()).begin()->first;
    if (lm.is_one()) throw InvalidAlgebra("relation left-hand side must not be constant");
    Terms tt = out->rescale_terms(tail.terms(), tail.algebra()->level());
    if (spec_.modulus != 0)
      for (auto& [m, c] : tt) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), spec_.modulus.get_mpz_t());
    std::erase_if(tt, [](const auto& kv) { return kv.second == 0; });
    out->rewrites_.push_back({lm, std::move(tt)});
  }
  out->check_rewrites();
  return out;
}

AlgebraPtr TruncatedAlgebra::with_p_carry(const PolyElement& g) const {
  if (spec_.modulus != 0) throw InvalidAlgebra("p-carry models need integer coefficients");
  if (!spec_.cap) throw InvalidAlgebra("p-carry models need a degree cap");
  if (!same_shape(*g.algebra())) throw InvalidAlgebra("G uses a different variable set");
  auto out = std::make_shared<TruncatedAlgebra>(*this);
  Terms gt = out->rescale_terms(g.terms(), g.algebra()->level());
  for (const auto& [m, c] : gt)
    if (m.degree <= 0) throw InvalidAlgebra("G must lie in the maximal ideal (no constant or ungraded term)");
  out->carry_ = std::move(gt);
  out->check_rewrites();
  return out;
}

void TruncatedAlgebra::check_rewrites() const {
  for (const auto& rw : rewrites_) {
    for (const auto& [m, c] : rw.tail) {
      if (m.degree < rw.lead.degree)
        throw InvalidAlgebra("relation tail must not have lower degree than its leading monomial");
      if (divides(rw.lead, m)) throw InvalidAlgebra("relation tail is divisible by its leading monomial");
    }
  }
  // Overlapping leading monomials: both reduction paths must agree.
  for (std::size_t i = 0; i < rewrites_.size(); ++i) {
    for (std::size_t j = i + 1; j < rewrites_.size(); ++j) {
      const auto& a = rewrites_[i];
      const auto& b = rewrites_[j];
      bool overlap = false;
      std::array<std::int32_t, kMaxVars> l{};
      for (int k = 0; k < kMaxVars; ++k) {
        l[k] = std::max(a.lead.exps[k], b.lead.exps[k]);
        if (a.lead.exps[k] > 0 && b.lead.exps[k] > 0) overlap = true;
      }
      if (!overlap) continue;
      const Monomial lcm = monomial(l);
      if (scaled_cap() && lcm.degree > *scaled_cap()) continue;
      auto path = [&](const Rewrite& r) {
        Monomial q;
        q.degree = lcm.degree - r.lead.degree;
        for (int k = 0; k < kMaxVars; ++k) q.exps[k] = lcm.exps[k] - r.lead.exps[k];
        Terms t;
        for (const auto& [m, c] : r.tail) t[multiply(q, m)] += c;
        return normalize(std::move(t));
      };
      if (path(a) != path(b)) throw InvalidAlgebra("relations are not confluent within the degree cap");
    }
  }
}

bool TruncatedAlgebra::same_shape(const TruncatedAlgebra& o) const {
  if (o.nvars() != nvars() || o.p() != p()) return false;
  for (int i = 0; i < nvars(); ++i)
    if (o.spec_.vars[i].name != spec_.vars[i].name || o.spec_.vars[i].graded != spec_.vars[i].graded ||
        o.spec_.vars[i].weight != spec_.vars[i].weight)
      return false;
  return true;
}

bool TruncatedAlgebra::is_finite() const {
  if (spec_.modulus == 0 && !carry_) return false;
  for (int i = 0; i < nvars(); ++i) {
    if (spec_.vars[i].graded) {
      if (!spec_.cap) return false;
      continue;
    }
    bool bounded = false;
    for (const auto& rw : rewrites_) {
      bool pure = rw.lead.exps[i] > 0;
      for (int k = 0; k < kMaxVars; ++k)
        if (k != i && rw.lead.exps[k] != 0) pure = false;
      bounded = bounded || pure;
    }
    if (!bounded) return false;
  }
  return true;
}

Integer TruncatedAlgebra::linear_modulus() const {
  if (spec_.modulus != 0) return spec_.modulus;
  if (carry_) {
    std::int64_t ord = carry_->begin()->first.degree;
    for (const auto& [m, c] : *carry_) ord = std::min(ord, m.degree);
    return ipow(spec_.p, static_cast<std::uint64_t>(*scaled_cap() / ord + 1));
  }
  throw NotFiniteDimensional("coefficients in Z without a p-carry relation");
}

int TruncatedAlgebra::effective_precision() const {
  if (spec_.modulus == 0 && !carry_) return 0;
  const Integer m = linear_modulus();
  Integer q = m;
  int e = 0;
  while (q % spec_.p == 0) {
    q /= spec_.p;
    ++e;
  }
  return q == 1 ? e : 0;
}

const LinearModel& TruncatedAlgebra::linear_model() const {
  std::call_once(model_once_, [this] {
    if (!is_finite()) throw NotFiniteDimensional(describe() + " is not finite-dimensional");
    auto model = std::make_unique<LinearModel>();
    model->modulus = linear_modulus();
    {
      Integer q = model->modulus;
      int e = 0;
      while (q % spec_.p == 0) {
        q /= spec_.p;
        ++e;
      }
      if (q != 1) throw NotFiniteDimensional("coefficient modulus is not a power of p");
      model->modulus_exponent = e;
    }
    if (model->modulus > Integer("4611686018427387904"))
      throw CapExceeded("coefficient modulus exceeds 2^62");
    model->modulus_u64 = model->modulus.get_ui();

    std::array<std::int32_t, kMaxVars> bound{};
    for (int i = 0; i < nvars(); ++i) {
      if (spec_.vars[i].graded) {
        bound[i] = static_cast<std::int32_t>(*scaled_cap() / spec_.vars[i].weight);
      } else {
        std::int32_t b = 0;
        for (const auto& rw : rewrites_) {
          bool pure = rw.lead.exps[i] > 0;
          for (int k = 0; k < kMaxVars; ++k)
            if (k != i && rw.lead.exps[k] != 0) pure = false;
          if (pure) b = (b == 0) ? rw.lead.exps[i] - 1 : std::min(b, rw.lead.exps[i] - 1);
        }
        bound[i] = b;
      }
    }
    const std::int64_t cap = scaled_cap().value_or(0);
    std::array<std::int32_t, kMaxVars> e{};
    const std::size_t limit = 20000;
    auto rec = [&](auto&& self, int i, std::int64_t deg) -> void {
      if (i == nvars()) {
        Monomial m = monomial(e);
        for (const auto& rw : rewrites_)
          if (divides(rw.lead, m)) return;
        if (model->basis.size() >= limit) throw CapExceeded("monomial basis exceeds " + std::to_string(limit));
        model->basis.push_back(m);
        return;
      }
      for (std::int32_t x = 0; x <= bound[i]; ++x) {
        std::int64_t d = deg + (spec_.vars[i].graded ? std::int64_t{spec_.vars[i].weight} * x : 0);
        if (spec_.vars[i].graded && d > cap) break;
        e[i] = x;
        self(self, i + 1, d);
      }
      e[i] = 0;
    };
    rec(rec, 0, 0);
    std::sort(model->basis.begin(), model->basis.end());
    for (std::size_t k = 0; k < model->basis.size(); ++k) model->index[model->basis[k]] = k;

    if (carry_) {
      const std::uint64_t mod = model->modulus_u64;
      for (std::size_t k = 0; k < model->basis.size(); ++k) {
        std::vector<std::uint64_t> v(model->basis.size(), 0);
        v[k] = static_cast<std::uint64_t>(spec_.p) % mod;
        Terms raw;
        raw[model->basis[k]] = spec_.p;
        for (const auto& [m, c] : normalize(std::move(raw))) {
          Integer r = -c;
          mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), model->modulus.get_mpz_t());
          auto& slot = v[model->index.at(m)];
          slot = (slot + r.get_ui()) % mod;
        }
        model->extra_relations.push_back(std::move(v));
      }
    }
    model_ = std::move(model);
  });
  return *model_;
}

bool TruncatedAlgebra::is_local() const {
  std::call_once(local_once_, [this] {
    if (!is_finite()) {
      local_ = false;
      return;
    }
    if (spec_.modulus != 0) {
      Integer q = spec_.modulus;
      while (q % spec_.p == 0) q /= spec_.p;
      if (q != 1) {
        local_ = false;
        return;
      }
    }
    for (int i = 0; i < nvars(); ++i) {
      if (spec_.vars[i].graded && spec_.cap) continue;
      // Repeated squaring of the smallest positive power of the variable.
      PolyElement x(shared_from_this(), Terms{{var_monomial(i, 1), 1}});
      bool nil = false;
      for (int step = 0; step < 48 && !nil; ++step) {
        if (x.is_zero()) nil = true;
        else x = x * x;
      }
      if (!nil) {
        local_ = false;
        return;
      }
    }
    local_ = true;
  });
  return local_;
}

std::string TruncatedAlgebra::describe() const {
  std::ostringstream os;
  os << (spec_.modulus == 0 ? std::string("Z") : "Z/" + spec_.modulus.get_str()) << "[";
  for (int i = 0; i < nvars(); ++i) os << (i ? "," : "") << spec_.vars[i].name;
  os << "] p=" << spec_.p << " level=" << spec_.level;
  if (spec_.cap) os << " cap=" << *spec_.cap;
  if (carry_) os << " (p=G)";
  if (!rewrites_.empty()) os << " rels=" << rewrites_.size();
  return os.str();
}

PolyElement TruncatedAlgebra::zero() const { return PolyElement(shared_from_this(), {}); }
PolyElement TruncatedAlgebra::unit() const { return constant(1); }
PolyElement TruncatedAlgebra::constant(const Integer& c) const {
  return PolyElement(shared_from_this(), Terms{{one(), c}});
}
PolyElement TruncatedAlgebra::var(const std::string& name) const { return var_power(name, 1, 0); }

PolyElement TruncatedAlgebra::var_power(const std::string& name, std::int64_t num, int den_exp) const {
  const auto idx = var_index(name);
  if (!idx) throw UnknownReference("variable " + name);
  if (den_exp > spec_.level)
    throw ExponentLevelMismatch("exponent denominator p^" + std::to_string(den_exp) + " exceeds level " +
                                std::to_string(spec_.level));
  const std::int64_t scaled = num * checked_pow(spec_.p, spec_.level - den_exp);
  return PolyElement(shared_from_this(), Terms{{var_monomial(*idx, static_cast<std::int32_t>(scaled)), 1}});
}

// ---------------------------------------------------------------------------
// PolyElement

PolyElement::PolyElement(AlgebraPtr alg, Terms raw) : alg_(std::move(alg)) {
  terms_ = alg_->normalize(std::move(raw));
}

bool PolyElement::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.is_one() && terms_.begin()->second == 1;
}

Integer PolyElement::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Integer(0) : it->second;
}

Integer PolyElement::constant_term() const { return coefficient(alg_->one()); }

std::optional<std::int64_t> PolyElement::order() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first.degree;
}

int PolyElement::min_valuation() const {
  const int cap = 1 << 20;
  int v = cap;
  for (const auto& [m, c] : terms_) v = std::min(v, valuation(c, alg_->p(), cap));
  return v;
}

void PolyElement::check_same(const PolyElement& o) const {
  if (!alg_ || !o.alg_) throw PreconditionViolation("uninitialized element");
  if (alg_ != o.alg_) throw PreconditionViolation("elements belong to different algebras");
}

PolyElement PolyElement::operator+(const PolyElement& o) const {
  check_same(o);
  Terms t = terms_;
  for (const auto& [m, c] : o.terms_) t[m] += c;
  return PolyElement(alg_, std::move(t));
}

PolyElement PolyElement::operator-(const PolyElement& o) const {
  check_same(o);
  Terms t = terms_;
  for (const auto& [m, c] : o.terms_) t[m] -= c;
  return PolyElement(alg_, std::move(t));
}

PolyElement PolyElement::operator-() const {
  Terms t;
  for (const auto& [m, c] : terms_) t.emplace(m, -c);
  return PolyElement(alg_, std::move(t));
}

PolyElement PolyElement::operator*(const PolyElement& o) const {
  check_same(o);
  const auto cap = alg_->scaled_cap();
  Terms acc;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      if (cap && ma.degree + mb.degree > *cap) break;  // terms are sorted by degree
      acc[alg_->multiply(ma, mb)] += ca * cb;
    }
  }
  return PolyElement(alg_, std::move(acc));
}

PolyElement PolyElement::operator*(const Integer& c) const {
  Terms t;
  for (const auto& [m, v] : terms_) t.emplace(m, v * c);
  return PolyElement(alg_, std::move(t));
}

PolyElement PolyElement::pow(std::uint64_t e) const {
  PolyElement result = alg_->unit();
  PolyElement base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

bool PolyElement::operator==(const PolyElement& o) const {
  check_same(o);
  return terms_ == o.terms_;
}

PolyElement PolyElement::convert(const AlgebraPtr& target) const {
  std::array<int, kMaxVars> map{};
  for (int i = 0; i < alg_->nvars(); ++i) {
    auto j = target->var_index(alg_->vars()[i].name);
    map[i] = j ? *j : -1;
  }
  const int from = alg_->level();
  const int to = target->level();
  Terms raw;
  for (const auto& [m, c] : terms_) {
    std::array<std::int32_t, kMaxVars> e{};
    for (int i = 0; i < alg_->nvars(); ++i) {
      if (m.exps[i] == 0) continue;
      if (map[i] < 0) throw PreconditionViolation("variable " + alg_->vars()[i].name + " missing in target");
      std::int64_t x = m.exps[i];
      if (to >= from) {
        x *= checked_pow(alg_->p(), to - from);
      } else {
        const auto f = checked_pow(alg_->p(), from - to);
        if (x % f != 0) throw ExponentLevelMismatch("exponent not representable at level " + std::to_string(to));
        x /= f;
      }
      e[map[i]] = static_cast<std::int32_t>(x);
    }
    raw[target->monomial(e)] += c;
  }
  return PolyElement(target, std::move(raw));
}

std::string PolyElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool neg = c < 0;
    Integer a = neg ? Integer(-c) : c;
    if (first) os << (neg ? "-" : "");
    else os << (neg ? " - " : " + ");
    first = false;
    std::vector<std::string> factors;
    for (int i = 0; i < alg_->nvars(); ++i)
      if (m.exps[i] != 0)
        factors.push_back(alg_->vars()[i].name + format_exponent(m.exps[i], alg_->p(), alg_->level()));
    if (factors.empty()) {
      os << a.get_str();
      continue;
    }
    if (a != 1) os << a.get_str() << "*";
    for (std::size_t k = 0; k < factors.size(); ++k) os << (k ? "*" : "") << factors[k];
  }
  return os.str();
}

// ---------------------------------------------------------------------------

PolyElement alg_reduce(const std::vector<RationalTerm>& raw, const AlgebraPtr& alg) {
  Terms t;
  const Integer scale = alg->scale();
  for (const auto& term : raw) {
    if (static_cast<int>(term.exponents.size()) > alg->nvars())
      throw PreconditionViolation("too many exponents");
    std::array<std::int32_t, kMaxVars> e{};
    for (std::size_t i = 0; i < term.exponents.size(); ++i) {
      mpq_class q = term.exponents[i] * mpq_class(scale);
      q.canonicalize();
      if (q.get_den() != 1)
        throw ExponentLevelMismatch("exponent " + term.exponents[i].get_str() + " needs a denominator beyond p^" +
                                    std::to_string(alg->level()));
      if (q < 0) throw PreconditionViolation("negative exponent");
      e[i] = static_cast<std::int32_t>(q.get_num().get_si());
    }
    t[alg->monomial(e)] += term.coefficient;
  }
  return PolyElement(alg, std::move(t));
}

PolyElement exact_div_p(const PolyElement& e, int k) {
  const auto& alg = e.algebra();
  if (k < 0) throw PreconditionViolation("negative division exponent");
  if (alg->carry()) throw PreconditionViolation("divide in the lift algebra of a p-carry model");
  const Integer pk = ipow(alg->p(), static_cast<std::uint64_t>(k));
  AlgebraPtr target = alg;
  if (alg->modulus() != 0) {
    const int n = alg->effective_precision();
    if (n <= k)
      throw InexactDivision("precision N=" + std::to_string(n) + " too small to divide by p^" + std::to_string(k));
    target = alg->with_modulus(ipow(alg->p(), static_cast<std::uint64_t>(n - k)));
  }
  Terms out;
  for (const auto& [m, c] : e.terms()) {
    if (mpz_divisible_p(c.get_mpz_t(), pk.get_mpz_t()) == 0)
      throw InexactDivision("coefficient " + c.get_str() + " is not divisible by " + pk.get_str());
    Integer q;
    mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), pk.get_mpz_t());
    out.emplace(m, q);
  }
  return PolyElement(target, std::move(out));
}

// ---------------------------------------------------------------------------

RingMap::RingMap(AlgebraPtr source, AlgebraPtr target, std::vector<PolyElement> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != source_->nvars())
    throw PreconditionViolation("ring map needs one image per source variable");
  for (const auto& im : images_)
    if (im.algebra() != target_) throw PreconditionViolation("ring map image outside target");
}

PolyElement RingMap::operator()(const PolyElement& x) const {
  if (x.algebra() != source_) throw PreconditionViolation("ring map applied outside its source");
  const std::int64_t scale = source_->scale();
  PolyElement sum = target_->zero();
  for (const auto& [m, c] : x.terms()) {
    PolyElement term = target_->constant(c);
    for (int i = 0; i < source_->nvars(); ++i) {
      const std::int64_t s = m.exps[i];
      if (s == 0) continue;
      if (s % scale == 0) {
        term = term * images_[i].pow(static_cast<std::uint64_t>(s / scale));
        continue;
      }
      const auto& im = images_[i];
      if (im.size() != 1 || im.terms().begin()->second != 1)
        throw ExponentLevelMismatch("fractional power of a non-monomial image");
      std::array<std::int32_t, kMaxVars> e{};
      for (int k = 0; k < kMaxVars; ++k) {
        const std::int64_t num = im.terms().begin()->first.exps[k] * s;
        if (num % scale != 0) throw ExponentLevelMismatch("fractional image exponent not representable");
        e[k] = static_cast<std::int32_t>(num / scale);
      }
      term = term * PolyElement(target_, Terms{{target_->monomial(e), 1}});
    }
    sum = sum + term;
  }
  return sum;
}

}  // namespace wittkit
