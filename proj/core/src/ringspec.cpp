#include "wittkit/ringspec.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "wittkit/errors.hpp"
#include "wittkit/polyparse.hpp"
#include "wittkit/witt.hpp"

namespace wittkit {

namespace {

struct KeySpec {
  std::set<std::string> allowed;
  std::set<std::string> required;
  std::set<std::string> repeatable;
};

const std::map<std::string, KeySpec>& block_keys() {
  static const std::map<std::string, KeySpec> keys = {
      {"tower", {{"kind", "p", "d", "G", "N", "D"}, {"kind", "p"}, {}}},
      {"algebra", {{"p", "vars", "ungraded", "mod", "cap", "level", "rel"}, {"p", "vars"}, {"rel"}}},
      {"witt-identities", {{"p", "n", "samples", "seed"}, {"p", "n"}, {}}},
      {"tower-frobenius", {{"tower", "level", "degree"}, {"tower", "level"}, {}}},
      {"p-big", {{"tower", "levels"}, {"tower", "levels"}, {}}},
      {"uniformizer", {{"tower", "level"}, {"tower", "level"}, {}}},
      {"witt-perfect", {{"tower", "level"}, {"tower"}, {}}},
      {"colon-defect", {{"tower", "level", "algebra", "sop", "index", "expect"}, {}, {}}},
      {"modification",
       {{"tower", "level", "algebra", "sop", "k", "u", "N", "sequences", "steps", "seed"}, {"N"}, {}}},
      {"lemma51", {{"tower", "level", "algebra", "sop", "k", "u", "N", "c", "alpha_exp", "expect"}, {"k", "u", "N"}, {}}},
      {"split", {{"base", "h", "z", "target", "sop", "k", "a_max", "expect"}, {"base", "sop"}, {}}},
      {"etale", {{"base", "h", "z", "a_max", "expect"}, {"base", "h"}, {}}},
  };
  return keys;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : t_(text) {}

  void skip() {
    while (pos_ < t_.size()) {
      const char c = t_[pos_];
      if (c == '#') {
        while (pos_ < t_.size() && t_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  bool done() {
    skip();
    return pos_ >= t_.size();
  }
  char peek() {
    skip();
    return pos_ < t_.size() ? t_[pos_] : '\0';
  }
  /// Identifier, or a check kind when `dashes` is set.
  std::string word(const char* what, bool dashes = false) {
    skip();
    const std::size_t start = pos_;
    if (pos_ < t_.size() && (is_ident_start(t_[pos_]) || (dashes && std::isdigit(static_cast<unsigned char>(t_[pos_])))))
      while (pos_ < t_.size() && (is_ident_char(t_[pos_]) || (dashes && t_[pos_] == '-'))) advance();
    if (pos_ == start) fail(std::string("expected ") + what);
    return t_.substr(start, pos_ - start);
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }
  /// Raw text up to ';' on the current line.
  std::string value(int& line, int& column) {
    while (pos_ < t_.size() && (t_[pos_] == ' ' || t_[pos_] == '\t')) advance();
    line = line_;
    column = col_;
    const std::size_t start = pos_;
    while (pos_ < t_.size() && t_[pos_] != ';') {
      const char c = t_[pos_];
      if (c == '\n' || c == '{' || c == '}' || c == '#') fail("expected ';' after value");
      advance();
    }
    if (pos_ >= t_.size()) fail("expected ';' after value");
    std::string v = trim(t_.substr(start, pos_ - start));
    advance();  // ';'
    if (v.empty()) throw SyntaxError("empty value", line, column);
    return v;
  }
  int line() {
    skip();
    return line_;
  }
  int column() {
    skip();
    return col_;
  }
  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(msg, line_, col_); }

 private:
  void advance() {
    if (t_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  const std::string& t_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const char* block_word(BlockType t) {
  switch (t) {
    case BlockType::Tower: return "tower";
    case BlockType::Algebra: return "algebra";
    case BlockType::Check: return "check";
  }
  return "check";
}

std::string key_table_name(const SpecBlock& b) { return b.type == BlockType::Check ? b.kind : block_word(b.type); }

[[noreturn]] void fail_at(const SpecEntry& e, const std::string& msg) { throw SyntaxError(msg, e.line, e.column); }

long parse_long(const SpecEntry& e) {
  try {
    std::size_t used = 0;
    const long v = std::stol(e.value, &used);
    if (used != e.value.size()) fail_at(e, "expected an integer for " + e.key);
    return v;
  } catch (const std::logic_error&) {
    fail_at(e, "expected an integer for " + e.key);
  }
}

void check_prime(const SpecEntry& e, long p) {
  if (p != 2 && p != 3 && p != 5) throw CapExceeded("p must be 2, 3 or 5 (line " + std::to_string(e.line) + ")");
}

std::size_t binom_capped(std::size_t n, std::size_t k) {
  long double r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return r > 1e12L ? static_cast<std::size_t>(1e12) : static_cast<std::size_t>(r + 0.5L);
}

struct AlgebraVar {
  std::string name;
  int weight = 1;
};

/// Monomials with weighted degree <= L.
std::size_t count_monomials(const std::vector<int>& weights, std::int64_t L) {
  if (L < 0) return 0;
  if (L > 1000000) return kMaxBasisDimension + 1;
  std::vector<std::size_t> ways(static_cast<std::size_t>(L) + 1, 0);
  ways[0] = 1;
  for (int w : weights)
    for (std::int64_t d = w; d <= L; ++d)
      ways[static_cast<std::size_t>(d)] = std::min(ways[static_cast<std::size_t>(d)] + ways[static_cast<std::size_t>(d - w)],
                                                   kMaxBasisDimension * 10);
  std::size_t total = 0;
  for (auto v : ways) total = std::min(total + v, kMaxBasisDimension * 10);
  return total;
}

TowerSpec build_tower(const SpecBlock& b) {
  TowerSpec s;
  const auto* kind = b.entry("kind");
  try {
    s.kind = tower_kind_from_string(kind->value);
  } catch (const Error&) {
    fail_at(*kind, "unknown tower kind '" + kind->value + "'");
  }
  s.p = entry_int(b, "p", 0, 2, 1000000);
  check_prime(*b.entry("p"), s.p);
  s.d = static_cast<int>(entry_int(b, "d", 1, 1, 6));
  s.N = static_cast<int>(entry_int(b, "N", 4, 1, 30));
  s.D = entry_int(b, "D", 6, 0, 1000);
  if (auto G = b.get("G")) s.G = *G;
  if (s.kind == TowerKind::Ramified) {
    if (s.G.empty()) throw SyntaxError("ramified tower needs G", b.line, b.column);
    try {
      (void)tower_G(s);
    } catch (const SyntaxError& e) {
      const auto* g = b.entry("G");
      throw SyntaxError(e.what(), g->line, g->column);
    }
  }
  return s;
}

AlgebraPtr build_algebra(const SpecBlock& b) {
  AlgebraSpec spec;
  spec.p = entry_int(b, "p", 0, 2, 1000000);
  check_prime(*b.entry("p"), spec.p);
  spec.level = static_cast<int>(entry_int(b, "level", 0, 0, kMaxLevel));
  if (b.get("cap")) spec.cap = entry_int(b, "cap", 0, 0, 100000);
  if (const auto* m = b.entry("mod")) {
    const std::string v = m->value;
    if (v == "0") {
      spec.modulus = 0;
    } else if (v.rfind("p^", 0) == 0) {
      SpecEntry tmp{m->key, v.substr(2), m->line, m->column + 2};
      const long e = parse_long(tmp);
      if (e < 1 || e > 60) fail_at(*m, "precision out of range");
      spec.modulus = ipow(spec.p, static_cast<std::uint64_t>(e));
    } else {
      const long k = parse_long(*m);
      Integer q = k;
      while (q > 1 && q % spec.p == 0) q /= spec.p;
      if (k < 2 || q != 1) fail_at(*m, "modulus must be 0 or a power of p");
      spec.modulus = k;
    }
  }
  std::set<std::string> ungraded;
  if (auto u = b.get("ungraded"))
    for (auto& name : split_list(*u)) ungraded.insert(name);
  std::vector<int> weights;
  const auto* vars = b.entry("vars");
  for (const auto& item : split_list(vars->value)) {
    Variable v;
    const auto colon = item.find(':');
    v.name = trim(item.substr(0, colon));
    if (colon != std::string::npos) {
      SpecEntry tmp{vars->key, trim(item.substr(colon + 1)), vars->line, vars->column};
      v.weight = static_cast<int>(parse_long(tmp));
      if (v.weight < 1) fail_at(*vars, "weights must be positive");
    }
    if (v.name.empty() || !is_ident_start(v.name[0]) || !std::all_of(v.name.begin(), v.name.end(), is_ident_char) ||
        v.name == "p")
      fail_at(*vars, "bad variable name '" + v.name + "'");
    v.graded = !ungraded.count(v.name);
    if (v.graded) weights.push_back(v.weight);
    spec.vars.push_back(v);
  }
  for (const auto& name : ungraded)
    if (std::none_of(spec.vars.begin(), spec.vars.end(), [&](const Variable& v) { return v.name == name; }))
      fail_at(*b.entry("ungraded"), "ungraded variable '" + name + "' is not declared");
  if (static_cast<int>(spec.vars.size()) > kMaxVars) throw CapExceeded("too many variables");
  if (!weights.empty() && !spec.cap) throw InvalidSpec("algebra " + b.name + " needs cap= for its graded variables");

  const std::int64_t scale = ipow(spec.p, static_cast<std::uint64_t>(spec.level)).get_si();
  std::size_t dim = count_monomials(weights, spec.cap.value_or(0) * scale);
  for (std::size_t i = 0; i < ungraded.size(); ++i) dim *= static_cast<std::size_t>(scale);
  if (dim > kMaxBasisDimension) throw CapExceeded("algebra " + b.name + " exceeds 10^4 basis monomials");

  AlgebraPtr alg;
  try {
    alg = TruncatedAlgebra::create(spec);
  } catch (const Error& e) {
    throw InvalidSpec("algebra " + b.name + ": " + e.what());
  }
  std::vector<std::pair<PolyElement, PolyElement>> rules;
  for (const auto* r : b.all("rel")) {
    const auto eq = r->value.find('=');
    if (eq == std::string::npos) fail_at(*r, "relation needs 'lhs = rhs'");
    const std::string lhs = r->value.substr(0, eq), rhs = r->value.substr(eq + 1);
    rules.emplace_back(parse_polynomial(lhs, alg, r->line, r->column),
                       parse_polynomial(rhs, alg, r->line, r->column + static_cast<int>(eq) + 1));
  }
  if (!rules.empty()) {
    try {
      alg = alg->with_rewrites(rules);
    } catch (const SyntaxError&) {
      throw;
    } catch (const Error& e) {
      throw InvalidSpec("algebra " + b.name + ": " + e.what());
    }
  }
  return alg;
}

void require_ref(const SpecBlock& b, const std::string& key, const SpecEnvironment& env, bool tower) {
  const auto* e = b.entry(key);
  if (!e) return;
  const bool found = tower ? env.towers.count(e->value) > 0 : env.algebras.count(e->value) > 0;
  if (!found)
    throw UnknownReference(std::string(tower ? "tower" : "algebra") + " '" + e->value + "' is not declared before line " +
                           std::to_string(b.line));
}

void validate_check(const SpecBlock& b, const SpecEnvironment& env) {
  require_ref(b, "tower", env, true);
  require_ref(b, "algebra", env, false);
  require_ref(b, "base", env, false);
  require_ref(b, "target", env, false);
  if (b.kind == "witt-identities") {
    const long p = entry_int(b, "p", 0, 2, 1000000);
    check_prime(*b.entry("p"), p);
    // The identities also evaluate at index n + 1 (F lowers the length).
    if (const auto* n = b.entry("n"); n && (parse_long(*n) >= witt_index_cap() || parse_long(*n) < 1))
      throw CapExceeded("Witt index n must be in 1.." + std::to_string(witt_index_cap() - 1) + " (line " +
                        std::to_string(n->line) + ")");
    entry_int(b, "samples", 20, 1, 100000);
    return;
  }
  const bool has_tower = b.entry("tower") != nullptr;
  if (b.kind == "colon-defect" || b.kind == "modification" || b.kind == "lemma51") {
    if (has_tower == (b.entry("algebra") != nullptr))
      throw SyntaxError(b.kind + " needs exactly one of tower= or algebra=", b.line, b.column);
    if (!has_tower && !b.entry("sop")) throw SyntaxError(b.kind + " on an algebra needs sop=", b.line, b.column);
  }
  if (has_tower) {
    const TowerSpec& spec = env.towers.at(*b.get("tower"));
    const char* level_key = b.kind == "p-big" ? "levels" : "level";
    const long fallback = b.kind == "witt-perfect" ? 1 : 0;
    const auto* le = b.entry(level_key);
    if (le && parse_long(*le) > kMaxLevel)
      throw CapExceeded(std::string(level_key) + " must be at most 4 (line " + std::to_string(le->line) + ")");
    const long n = entry_int(b, level_key, fallback, 0, kMaxLevel);
    if (tower_level_dimension(spec, static_cast<int>(n)) > kMaxBasisDimension)
      throw CapExceeded("tower level " + std::to_string(n) + " exceeds 10^4 basis monomials");
    if ((b.kind == "uniformizer" || b.kind == "witt-perfect") && spec.kind == TowerKind::Ramified && n < 1)
      throw SyntaxError(b.kind + " needs level >= 1", b.line, b.column);
  }
  if (b.kind == "split" && (b.entry("h") != nullptr) == (b.entry("target") != nullptr))
    throw SyntaxError("split needs exactly one of h= or target=", b.line, b.column);
  if (b.kind == "modification" && b.entry("sequences") && !has_tower)
    throw SyntaxError("random sequences need tower=", b.line, b.column);
}

}  // namespace

std::optional<std::string> SpecBlock::get(const std::string& key) const {
  if (const auto* e = entry(key)) return e->value;
  return std::nullopt;
}

const SpecEntry* SpecBlock::entry(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

std::vector<const SpecEntry*> SpecBlock::all(const std::string& key) const {
  std::vector<const SpecEntry*> out;
  for (const auto& e : entries)
    if (e.key == key) out.push_back(&e);
  return out;
}

std::size_t CheckPlan::check_count() const {
  return static_cast<std::size_t>(
      std::count_if(blocks.begin(), blocks.end(), [](const SpecBlock& b) { return b.type == BlockType::Check; }));
}

const std::vector<std::string>& check_kinds() {
  static const std::vector<std::string> kinds = {"witt-identities", "tower-frobenius", "p-big",    "uniformizer",
                                                 "witt-perfect",    "colon-defect",    "modification", "lemma51",
                                                 "split",           "etale"};
  return kinds;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

long entry_int(const SpecBlock& b, const std::string& key, long fallback, long lo, long hi) {
  const auto* e = b.entry(key);
  if (!e) return fallback;
  const long v = parse_long(*e);
  if (v < lo || v > hi)
    fail_at(*e, key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

std::size_t tower_level_dimension(const TowerSpec& spec, int n) {
  const std::size_t pn = static_cast<std::size_t>(ipow(spec.p, static_cast<std::uint64_t>(n)).get_ui());
  const std::size_t L = static_cast<std::size_t>(spec.D) * pn;
  switch (spec.kind) {
    case TowerKind::Valuation: return pn;
    case TowerKind::Unramified: return pn * binom_capped(L + static_cast<std::size_t>(spec.d) - 1, static_cast<std::size_t>(spec.d) - 1);
    case TowerKind::Ramified: return binom_capped(L + static_cast<std::size_t>(spec.d), static_cast<std::size_t>(spec.d));
  }
  return 0;
}

CheckPlan parse_ringspec(const std::string& text, bool validate) {
  CheckPlan plan;
  Lexer lx(text);
  std::set<std::string> names;
  while (!lx.done()) {
    SpecBlock b;
    b.line = lx.line();
    b.column = lx.column();
    const std::string head = lx.word("'tower', 'algebra' or 'check'");
    if (head == "tower") {
      b.type = BlockType::Tower;
    } else if (head == "algebra") {
      b.type = BlockType::Algebra;
    } else if (head == "check") {
      b.type = BlockType::Check;
      const int kl = lx.line(), kc = lx.column();
      b.kind = lx.word("a check kind", true);
      const auto& kinds = check_kinds();
      if (std::find(kinds.begin(), kinds.end(), b.kind) == kinds.end())
        throw SyntaxError("unknown check kind '" + b.kind + "'", kl, kc);
    } else {
      throw SyntaxError("expected 'tower', 'algebra' or 'check', found '" + head + "'", b.line, b.column);
    }
    const int nl = lx.line(), nc = lx.column();
    b.name = lx.word("a name");
    if (!names.insert(b.name).second) throw SyntaxError("duplicate name '" + b.name + "'", nl, nc);
    lx.expect('{');
    const auto& table = block_keys().at(key_table_name(b));
    while (lx.peek() != '}') {
      if (lx.done()) lx.fail("unterminated block '" + b.name + "'");
      SpecEntry e;
      const int kl = lx.line(), kc = lx.column();
      e.key = lx.word("a key");
      lx.expect('=');
      e.value = lx.value(e.line, e.column);
      if (validate) {
        if (!table.allowed.count(e.key)) throw SyntaxError("unknown key '" + e.key + "' in " + key_table_name(b), kl, kc);
        if (!table.repeatable.count(e.key) && b.entry(e.key))
          throw SyntaxError("duplicate key '" + e.key + "'", kl, kc);
      }
      b.entries.push_back(std::move(e));
    }
    lx.expect('}');
    if (validate)
      for (const auto& k : table.required)
        if (!b.entry(k)) throw SyntaxError("missing key '" + k + "' in " + b.name, b.line, b.column);
    plan.blocks.push_back(std::move(b));
  }
  if (validate) (void)build_environment(plan);
  return plan;
}

std::string print_ringspec(const CheckPlan& plan) {
  std::ostringstream os;
  for (const auto& b : plan.blocks) {
    os << block_word(b.type);
    if (b.type == BlockType::Check) os << ' ' << b.kind;
    os << ' ' << b.name << " {";
    for (const auto& e : b.entries) os << ' ' << e.key << '=' << e.value << ';';
    os << " }\n";
  }
  return os.str();
}

SpecEnvironment build_environment(const CheckPlan& plan) {
  SpecEnvironment env;
  for (const auto& b : plan.blocks) {
    switch (b.type) {
      case BlockType::Tower: env.towers.emplace(b.name, build_tower(b)); break;
      case BlockType::Algebra: env.algebras.emplace(b.name, build_algebra(b)); break;
      case BlockType::Check: validate_check(b, env); break;
    }
  }
  return env;
}

}  // namespace wittkit
