#include "lmplan/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace lmplan::pddl {

ParseError::ParseError(SourceLocation loc, const std::string& message)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message),
      loc_(loc) {}

const PredicateDecl* DomainAst::find_predicate(std::string_view name) const {
  for (const auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

namespace {

// ---------------------------------------------------------------------------
// S-expressions

struct SExpr {
  bool is_list = false;
  std::string symbol;
  std::vector<SExpr> items;
  SourceLocation loc;

  bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_document() {
    skip();
    if (at_end()) throw ParseError(here(), "empty input");
    SExpr e = read();
    skip();
    if (!at_end()) throw ParseError(here(), "unexpected content after top-level expression");
    return e;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  SourceLocation here() const { return {line_, col_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (!at_end()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (!at_end() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (at_end()) throw ParseError(here(), "unexpected end of input");
    SExpr e;
    e.loc = here();
    const char c = text_[pos_];
    if (c == ')') throw ParseError(here(), "unexpected ')'");
    if (c == '(') {
      e.is_list = true;
      advance();
      while (true) {
        skip();
        if (at_end()) throw ParseError(e.loc, "unbalanced '(' (missing ')')");
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    while (!at_end()) {
      const char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      if (static_cast<unsigned char>(d) < 0x20) throw ParseError(here(), "control character in symbol");
      e.symbol += static_cast<char>(std::tolower(static_cast<unsigned char>(d)));
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const SExpr& expect_list(const SExpr& e, std::string_view what) {
  if (!e.is_list) throw ParseError(e.loc, "expected list for " + std::string(what));
  return e;
}

const std::string& expect_symbol(const SExpr& e, std::string_view what) {
  if (e.is_list) throw ParseError(e.loc, "expected symbol for " + std::string(what));
  return e.symbol;
}

bool is_variable(std::string_view s) { return !s.empty() && s.front() == '?'; }

/// "a b - t c" style lists.
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t begin) {
  std::vector<TypedName> out;
  std::vector<std::string> pending;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const std::string& tok = expect_symbol(items[i], "typed list");
    if (tok == "-") {
      if (i + 1 >= items.size()) throw ParseError(items[i].loc, "missing type after '-'");
      if (items[i + 1].is_list) throw ParseError(items[i + 1].loc, "either-types are not supported");
      const std::string& type = items[i + 1].symbol;
      if (pending.empty()) throw ParseError(items[i].loc, "type without names");
      for (auto& n : pending) out.push_back({std::move(n), type});
      pending.clear();
      ++i;
    } else {
      pending.push_back(tok);
    }
  }
  for (auto& n : pending) out.push_back({std::move(n), ""});
  return out;
}

void check_requirement(const SExpr& e) {
  static const std::set<std::string> kSupported = {":strips", ":typing", ":equality"};
  const std::string& r = expect_symbol(e, "requirement");
  if (!kSupported.count(r)) throw ParseError(e.loc, "unsupported requirement " + r);
}

AtomSchema to_atom_schema(const SExpr& e) {
  expect_list(e, "atom");
  if (e.items.empty()) throw ParseError(e.loc, "empty atom");
  AtomSchema a;
  a.predicate = expect_symbol(e.items[0], "predicate");
  for (std::size_t i = 1; i < e.items.size(); ++i) a.terms.push_back(expect_symbol(e.items[i], "term"));
  return a;
}

// Flattens (and ...) conjunctions.
void flatten_conjunction(const SExpr& e, std::vector<const SExpr*>& out) {
  expect_list(e, "formula");
  if (!e.items.empty() && e.items[0].is_symbol("and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) flatten_conjunction(e.items[i], out);
  } else if (!e.items.empty()) {
    out.push_back(&e);
  }
}

bool type_matches(const std::string& object_type, const std::string& wanted) {
  if (wanted.empty() || wanted == "object") return true;
  return object_type == wanted;
}

class DomainChecker {
 public:
  explicit DomainChecker(const DomainAst& d) : d_(d) {}

  void check_type(const std::string& type, SourceLocation loc) const {
    if (type.empty() || type == "object") return;
    if (std::find(d_.types.begin(), d_.types.end(), type) == d_.types.end())
      throw ParseError(loc, "undeclared type " + type);
  }

  const PredicateDecl& predicate(const std::string& name, std::size_t arity, SourceLocation loc) const {
    const PredicateDecl* p = d_.find_predicate(name);
    if (!p) throw ParseError(loc, "undeclared predicate " + name);
    if (p->params.size() != arity)
      throw ParseError(loc, "arity mismatch for " + name + ": expected " + std::to_string(p->params.size()) +
                                ", got " + std::to_string(arity));
    return *p;
  }

  const TypedName* constant(const std::string& name) const {
    for (const auto& c : d_.constants)
      if (c.name == name) return &c;
    return nullptr;
  }

 private:
  const DomainAst& d_;
};

void check_schema_atom(const DomainChecker& checker, const ActionSchema& act, const AtomSchema& atom,
                       SourceLocation loc) {
  const PredicateDecl& decl = checker.predicate(atom.predicate, atom.terms.size(), loc);
  for (std::size_t i = 0; i < atom.terms.size(); ++i) {
    const std::string& t = atom.terms[i];
    std::string type;
    if (is_variable(t)) {
      auto it = std::find_if(act.params.begin(), act.params.end(), [&](const TypedName& p) { return p.name == t; });
      if (it == act.params.end()) throw ParseError(loc, "unbound variable " + t + " in " + act.name);
      type = it->type;
    } else {
      const TypedName* c = checker.constant(t);
      if (!c) throw ParseError(loc, "unknown constant " + t + " in " + act.name);
      type = c->type;
    }
    const std::string& wanted = decl.params[i].type;
    // A parameter typed with a different declared type can never match.
    if (!type.empty() && type != "object" && !type_matches(type, wanted))
      throw ParseError(loc, "type mismatch for argument " + std::to_string(i + 1) + " of " + atom.predicate);
  }
}

ActionSchema parse_action(const SExpr& e, const DomainChecker& checker, bool equality_allowed) {
  ActionSchema act;
  if (e.items.size() < 2) throw ParseError(e.loc, "action without name");
  act.name = expect_symbol(e.items[1], "action name");
  for (std::size_t i = 2; i < e.items.size(); i += 2) {
    const std::string& key = expect_symbol(e.items[i], "action field");
    if (i + 1 >= e.items.size()) throw ParseError(e.items[i].loc, "missing value for " + key);
    const SExpr& value = e.items[i + 1];
    if (key == ":parameters") {
      act.params = parse_typed_list(expect_list(value, ":parameters").items, 0);
      for (const auto& p : act.params) {
        if (!is_variable(p.name)) throw ParseError(value.loc, "parameter must start with '?': " + p.name);
        checker.check_type(p.type, value.loc);
      }
    } else if (key == ":precondition") {
      std::vector<const SExpr*> conj;
      flatten_conjunction(value, conj);
      for (const SExpr* c : conj) {
        if (c->items[0].is_symbol("not")) {
          if (c->items.size() == 2 && c->items[1].is_list && !c->items[1].items.empty() &&
              c->items[1].items[0].is_symbol("=")) {
            if (!equality_allowed) throw ParseError(c->loc, "equality requires :equality");
            AtomSchema eq = to_atom_schema(c->items[1]);
            if (eq.terms.size() != 2) throw ParseError(c->loc, "'=' takes two terms");
            act.equalities.push_back({eq.terms[0], eq.terms[1], false});
            continue;
          }
          throw ParseError(c->loc, "negative preconditions are not supported");
        }
        AtomSchema atom = to_atom_schema(*c);
        if (atom.predicate == "=") {
          if (!equality_allowed) throw ParseError(c->loc, "equality requires :equality");
          if (atom.terms.size() != 2) throw ParseError(c->loc, "'=' takes two terms");
          act.equalities.push_back({atom.terms[0], atom.terms[1], true});
          continue;
        }
        if (atom.predicate == "or" || atom.predicate == "imply" || atom.predicate == "forall" ||
            atom.predicate == "exists")
          throw ParseError(c->loc, "ADL construct '" + atom.predicate + "' is not supported");
        act.pre.push_back(std::move(atom));
        check_schema_atom(checker, act, act.pre.back(), c->loc);
      }
    } else if (key == ":effect") {
      std::vector<const SExpr*> conj;
      flatten_conjunction(value, conj);
      for (const SExpr* c : conj) {
        if (c->items[0].is_symbol("not")) {
          if (c->items.size() != 2) throw ParseError(c->loc, "malformed negative effect");
          act.del.push_back(to_atom_schema(c->items[1]));
          check_schema_atom(checker, act, act.del.back(), c->items[1].loc);
        } else {
          if (c->items[0].is_symbol("when") || c->items[0].is_symbol("forall"))
            throw ParseError(c->loc, "conditional/quantified effects are not supported");
          act.add.push_back(to_atom_schema(*c));
          check_schema_atom(checker, act, act.add.back(), c->loc);
        }
      }
    } else {
      throw ParseError(e.items[i].loc, "unknown action field " + key);
    }
  }
  for (const auto& eq : act.equalities) {
    for (const std::string* t : {&eq.lhs, &eq.rhs}) {
      if (is_variable(*t)) {
        if (std::none_of(act.params.begin(), act.params.end(), [&](const TypedName& p) { return p.name == *t; }))
          throw ParseError(e.loc, "unbound variable " + *t + " in equality of " + act.name);
      } else if (!checker.constant(*t)) {
        throw ParseError(e.loc, "unknown constant " + *t + " in " + act.name);
      }
    }
  }
  return act;
}

void expect_header(const SExpr& doc, std::string_view kind, std::string& name) {
  expect_list(doc, "define");
  if (doc.items.size() < 2 || !doc.items[0].is_symbol("define"))
    throw ParseError(doc.loc, "expected (define ...)");
  const SExpr& head = expect_list(doc.items[1], "header");
  if (head.items.size() != 2 || !head.items[0].is_symbol(kind))
    throw ParseError(head.loc, "expected (" + std::string(kind) + " <name>)");
  name = expect_symbol(head.items[1], "name");
}

Atom to_ground_atom(const SExpr& e) {
  AtomSchema s = to_atom_schema(e);
  for (const auto& t : s.terms)
    if (is_variable(t)) throw ParseError(e.loc, "variable in ground atom: " + t);
  return Atom{std::move(s.predicate), std::move(s.terms)};
}

}  // namespace

DomainAst parse_domain(std::string_view text) {
  const SExpr doc = Reader(text).read_document();
  DomainAst d;
  expect_header(doc, "domain", d.name);

  bool equality = false;
  // Declarations first so that action bodies can be checked in one pass.
  std::vector<const SExpr*> actions;
  for (std::size_t i = 2; i < doc.items.size(); ++i) {
    const SExpr& sec = expect_list(doc.items[i], "domain section");
    if (sec.items.empty()) throw ParseError(sec.loc, "empty section");
    const std::string& key = expect_symbol(sec.items[0], "section keyword");
    if (key == ":requirements") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        check_requirement(sec.items[j]);
        d.requirements.push_back(sec.items[j].symbol);
        if (sec.items[j].symbol == ":equality") equality = true;
      }
    } else if (key == ":types") {
      for (const auto& t : parse_typed_list(sec.items, 1)) {
        if (!t.type.empty() && t.type != "object")
          throw ParseError(sec.loc, "type hierarchies are not supported (" + t.name + " - " + t.type + ")");
        if (t.name != "object") d.types.push_back(t.name);
      }
    } else if (key == ":constants") {
      d.constants = parse_typed_list(sec.items, 1);
    } else if (key == ":predicates") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        const SExpr& p = expect_list(sec.items[j], "predicate declaration");
        if (p.items.empty()) throw ParseError(p.loc, "empty predicate declaration");
        PredicateDecl decl;
        decl.name = expect_symbol(p.items[0], "predicate name");
        decl.params = parse_typed_list(p.items, 1);
        if (d.find_predicate(decl.name)) throw ParseError(p.loc, "duplicate predicate " + decl.name);
        d.predicates.push_back(std::move(decl));
      }
    } else if (key == ":action") {
      actions.push_back(&sec);
    } else {
      throw ParseError(sec.loc, "unsupported domain section " + key);
    }
  }
  const bool typing = std::find(d.requirements.begin(), d.requirements.end(), ":typing") != d.requirements.end();
  if (!d.types.empty() && !typing) throw ParseError(doc.loc, ":types requires :typing");
  DomainChecker checker(d);
  for (const auto& c : d.constants) checker.check_type(c.type, doc.loc);
  for (const auto& p : d.predicates)
    for (const auto& param : p.params) checker.check_type(param.type, doc.loc);
  for (const SExpr* a : actions) d.actions.push_back(parse_action(*a, checker, equality));
  return d;
}

namespace {

ProblemAst parse_problem_impl(std::string_view text, const DomainAst* domain) {
  const SExpr doc = Reader(text).read_document();
  ProblemAst p;
  expect_header(doc, "problem", p.name);
  std::vector<std::pair<Atom, SourceLocation>> atoms;  // for the reference check
  for (std::size_t i = 2; i < doc.items.size(); ++i) {
    const SExpr& sec = expect_list(doc.items[i], "problem section");
    if (sec.items.empty()) throw ParseError(sec.loc, "empty section");
    const std::string& key = expect_symbol(sec.items[0], "section keyword");
    if (key == ":domain") {
      if (sec.items.size() != 2) throw ParseError(sec.loc, "malformed :domain");
      p.domain = expect_symbol(sec.items[1], "domain name");
    } else if (key == ":objects") {
      p.objects = parse_typed_list(sec.items, 1);
    } else if (key == ":init") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        p.init.push_back(to_ground_atom(sec.items[j]));
        atoms.emplace_back(p.init.back(), sec.items[j].loc);
      }
    } else if (key == ":goal") {
      if (sec.items.size() != 2) throw ParseError(sec.loc, "malformed :goal");
      std::vector<const SExpr*> conj;
      flatten_conjunction(sec.items[1], conj);
      for (const SExpr* c : conj) {
        if (c->items[0].is_symbol("not") || c->items[0].is_symbol("or"))
          throw ParseError(c->loc, "only conjunctive positive goals are supported");
        p.goal.push_back(to_ground_atom(*c));
        atoms.emplace_back(p.goal.back(), c->loc);
      }
    } else {
      throw ParseError(sec.loc, "unsupported problem section " + key);
    }
  }
  std::map<std::string, std::string> object_types;
  for (const auto& o : p.objects) object_types[o.name] = o.type;
  if (domain) {
    if (!p.domain.empty() && p.domain != domain->name)
      throw ParseError(doc.loc, "problem is for domain " + p.domain + ", not " + domain->name);
    for (const auto& c : domain->constants) object_types.emplace(c.name, c.type);
    DomainChecker checker(*domain);
    for (const auto& o : p.objects) checker.check_type(o.type, doc.loc);
  }
  for (const auto& [atom, loc] : atoms) {
    for (const auto& arg : atom.args)
      if (!object_types.count(arg)) throw ParseError(loc, "unknown object " + arg);
    if (domain) {
      const PredicateDecl* decl = domain->find_predicate(atom.predicate);
      if (!decl) throw ParseError(loc, "undeclared predicate " + atom.predicate);
      if (decl->params.size() != atom.args.size())
        throw ParseError(loc, "arity mismatch for " + atom.predicate);
      for (std::size_t k = 0; k < atom.args.size(); ++k) {
        const std::string& ot = object_types[atom.args[k]];
        if (!ot.empty() && ot != "object" && !type_matches(ot, decl->params[k].type))
          throw ParseError(loc, "type mismatch for " + atom.args[k] + " in " + atom.predicate);
      }
    }
  }
  return p;
}

}  // namespace

ProblemAst parse_problem(std::string_view text) { return parse_problem_impl(text, nullptr); }

ProblemAst parse_problem(std::string_view text, const DomainAst& domain) {
  return parse_problem_impl(text, &domain);
}

// ---------------------------------------------------------------------------
// Grounding

namespace {

struct GroundAction {
  Atom name;
  std::vector<Atom> pre, add, del;
};

struct Constraint {
  enum class Kind { StaticAtom, Equality } kind;
  const AtomSchema* atom = nullptr;
  const Equality* eq = nullptr;
  int last_param = -1;  // constraint is decidable once this parameter is bound
};

class Grounder {
 public:
  Grounder(const DomainAst& d, const ProblemAst& p) : d_(d) {
    for (const auto& o : d.constants) add_object(o);
    for (const auto& o : p.objects) add_object(o);
    std::sort(objects_.begin(), objects_.end(), [](const TypedName& a, const TypedName& b) { return a.name < b.name; });
    for (const auto& act : d.actions) {
      for (const auto& a : act.add) fluent_.insert(a.predicate);
      for (const auto& a : act.del) fluent_.insert(a.predicate);
    }
    for (const auto& a : p.init)
      if (!fluent_.count(a.predicate)) static_true_.insert(a);
  }

  bool is_static(const std::string& predicate) const { return !fluent_.count(predicate); }
  bool static_holds(const Atom& a) const { return static_true_.count(a) > 0; }

  std::vector<GroundAction> instantiate_all() const {
    std::vector<GroundAction> out;
    for (const auto& schema : d_.actions) instantiate(schema, out);
    return out;
  }

 private:
  void add_object(const TypedName& o) {
    for (const auto& existing : objects_)
      if (existing.name == o.name) return;
    objects_.push_back(o);
  }

  std::vector<std::string> objects_of(const std::string& type) const {
    std::vector<std::string> out;
    for (const auto& o : objects_)
      if (type_matches(o.type, type)) out.push_back(o.name);
    return out;
  }

  static std::string bind(const std::string& term, const ActionSchema& s, const std::vector<std::string>& binding) {
    if (!is_variable(term)) return term;
    for (std::size_t i = 0; i < s.params.size(); ++i)
      if (s.params[i].name == term) return binding[i];
    return term;  // unreachable after parsing
  }

  static Atom bind(const AtomSchema& a, const ActionSchema& s, const std::vector<std::string>& binding) {
    Atom out{a.predicate, {}};
    for (const auto& t : a.terms) out.args.push_back(bind(t, s, binding));
    return out;
  }

  static int last_param_of(const std::vector<std::string>& terms, const ActionSchema& s) {
    int last = -1;
    for (const auto& t : terms)
      for (std::size_t i = 0; i < s.params.size(); ++i)
        if (s.params[i].name == t) last = std::max(last, static_cast<int>(i));
    return last;
  }

  bool holds(const Constraint& c, const ActionSchema& s, const std::vector<std::string>& binding) const {
    if (c.kind == Constraint::Kind::Equality)
      return (bind(c.eq->lhs, s, binding) == bind(c.eq->rhs, s, binding)) == c.eq->equal;
    return static_holds(bind(*c.atom, s, binding));
  }

  void instantiate(const ActionSchema& s, std::vector<GroundAction>& out) const {
    std::vector<Constraint> constraints;
    for (const auto& a : s.pre)
      if (is_static(a.predicate))
        constraints.push_back({Constraint::Kind::StaticAtom, &a, nullptr, last_param_of(a.terms, s)});
    for (const auto& e : s.equalities)
      constraints.push_back({Constraint::Kind::Equality, nullptr, &e, last_param_of({e.lhs, e.rhs}, s)});

    std::vector<std::vector<std::string>> domains;
    for (const auto& p : s.params) domains.push_back(objects_of(p.type));
    std::vector<std::string> binding(s.params.size());

    auto check_level = [&](int level) {
      for (const auto& c : constraints)
        if (c.last_param == level && !holds(c, s, binding)) return false;
      return true;
    };
    if (!check_level(-1)) return;

    auto emit = [&] {
      GroundAction g;
      g.name.predicate = s.name;
      g.name.args = binding;
      for (const auto& a : s.pre)
        if (!is_static(a.predicate)) g.pre.push_back(bind(a, s, binding));
      for (const auto& a : s.add) g.add.push_back(bind(a, s, binding));
      for (const auto& a : s.del) g.del.push_back(bind(a, s, binding));
      out.push_back(std::move(g));
    };

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == s.params.size()) {
        emit();
        return;
      }
      for (const auto& obj : domains[i]) {
        binding[i] = obj;
        if (check_level(static_cast<int>(i))) rec(i + 1);
      }
    };
    rec(0);
  }

  const DomainAst& d_;
  std::vector<TypedName> objects_;
  std::set<std::string> fluent_;
  std::set<Atom> static_true_;
};

}  // namespace

Task ground(const DomainAst& domain, const ProblemAst& problem) {
  Grounder g(domain, problem);
  std::vector<GroundAction> candidates = g.instantiate_all();

  // Delete-relaxed reachability over the candidate actions.
  std::map<Atom, std::size_t> temp_ids;
  auto temp_id = [&](const Atom& a) {
    auto [it, fresh] = temp_ids.emplace(a, temp_ids.size());
    return it->second;
  };
  for (const auto& a : problem.init)
    if (!g.is_static(a.predicate)) temp_id(a);
  for (const auto& c : candidates) {
    for (const auto& a : c.pre) temp_id(a);
    for (const auto& a : c.add) temp_id(a);
  }
  std::vector<bool> reached(temp_ids.size(), false);
  std::vector<std::vector<std::size_t>> consumers(temp_ids.size());
  std::vector<std::size_t> missing(candidates.size());
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::set<std::size_t> pre_ids;
    for (const auto& a : candidates[i].pre) pre_ids.insert(temp_ids.at(a));
    missing[i] = pre_ids.size();
    for (std::size_t f : pre_ids) consumers[f].push_back(i);
  }
  std::vector<bool> action_reached(candidates.size(), false);
  auto reach_fact = [&](std::size_t f) {
    if (reached[f]) return;
    reached[f] = true;
    queue.push_back(f);
  };
  for (const auto& a : problem.init)
    if (!g.is_static(a.predicate)) reach_fact(temp_ids.at(a));
  auto fire = [&](std::size_t i) {
    action_reached[i] = true;
    for (const auto& a : candidates[i].add) reach_fact(temp_ids.at(a));
  };
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (missing[i] == 0) fire(i);
  while (!queue.empty()) {
    const std::size_t f = queue.back();
    queue.pop_back();
    for (std::size_t i : consumers[f])
      if (--missing[i] == 0) fire(i);
  }

  std::set<Atom> universe;
  for (const auto& [atom, id] : temp_ids)
    if (reached[id]) universe.insert(atom);
  for (const auto& a : problem.init)
    if (!g.is_static(a.predicate)) universe.insert(a);
  bool unsolvable = false;
  std::vector<Atom> goal_atoms;
  for (const auto& a : problem.goal) {
    if (g.is_static(a.predicate) && g.static_holds(a)) continue;
    universe.insert(a);
    goal_atoms.push_back(a);
  }

  std::vector<Atom> facts(universe.begin(), universe.end());
  std::map<Atom, FactId> ids;
  for (FactId f = 0; f < facts.size(); ++f) ids.emplace(facts[f], f);

  std::vector<Action> actions;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!action_reached[i]) continue;
    Action act;
    act.name = candidates[i].name;
    for (const auto& a : candidates[i].pre) act.pre.push_back(ids.at(a));
    for (const auto& a : candidates[i].add) act.add.push_back(ids.at(a));
    for (const auto& a : candidates[i].del) {
      auto it = ids.find(a);
      if (it != ids.end()) act.del.push_back(it->second);
    }
    actions.push_back(std::move(act));
  }

  State init(facts.size());
  for (const auto& a : problem.init)
    if (!g.is_static(a.predicate)) init.set(ids.at(a));
  FactSet goal(facts.size());
  for (const auto& a : goal_atoms) {
    goal.set(ids.at(a));
    auto it = temp_ids.find(a);
    if (g.is_static(a.predicate) || it == temp_ids.end() || !reached[it->second]) unsolvable = true;
  }
  Task task(std::move(facts), std::move(actions), std::move(init), std::move(goal));
  if (unsolvable) task.mark_provably_unsolvable();
  return task;
}

// ---------------------------------------------------------------------------
// Writing

namespace {

void write_typed_list(std::ostream& os, const std::vector<TypedName>& list) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) os << ' ';
    os << list[i].name;
    const bool last_of_type = i + 1 == list.size() || list[i + 1].type != list[i].type;
    if (!list[i].type.empty() && last_of_type) os << " - " << list[i].type;
  }
}

void write_atom(std::ostream& os, const AtomSchema& a) {
  os << '(' << a.predicate;
  for (const auto& t : a.terms) os << ' ' << t;
  os << ')';
}

}  // namespace

std::string to_pddl(const DomainAst& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    os << "  (:types";
    for (const auto& t : d.types) os << ' ' << t;
    os << ")\n";
  }
  if (!d.constants.empty()) {
    os << "  (:constants ";
    write_typed_list(os, d.constants);
    os << ")\n";
  }
  os << "  (:predicates";
  for (const auto& p : d.predicates) {
    os << "\n    (" << p.name;
    if (!p.params.empty()) {
      os << ' ';
      write_typed_list(os, p.params);
    }
    os << ')';
  }
  os << ")\n";
  for (const auto& a : d.actions) {
    os << "  (:action " << a.name << "\n    :parameters (";
    write_typed_list(os, a.params);
    os << ")\n    :precondition (and";
    for (const auto& p : a.pre) {
      os << ' ';
      write_atom(os, p);
    }
    for (const auto& e : a.equalities) {
      if (e.equal)
        os << " (= " << e.lhs << ' ' << e.rhs << ')';
      else
        os << " (not (= " << e.lhs << ' ' << e.rhs << "))";
    }
    os << ")\n    :effect (and";
    for (const auto& p : a.add) {
      os << ' ';
      write_atom(os, p);
    }
    for (const auto& p : a.del) {
      os << " (not ";
      write_atom(os, p);
      os << ')';
    }
    os << "))\n";
  }
  os << ")\n";
  return os.str();
}

std::string to_pddl(const ProblemAst& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  if (!p.domain.empty()) os << "  (:domain " << p.domain << ")\n";
  os << "  (:objects ";
  write_typed_list(os, p.objects);
  os << ")\n  (:init";
  for (const auto& a : p.init) os << "\n    " << to_string(a);
  os << ")\n  (:goal (and";
  for (const auto& a : p.goal) os << "\n    " << to_string(a);
  os << ")))\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lmplan::pddl
