#include "memweave/litmus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace memweave {

const char* model_name(ModelId id) {
  switch (id) {
    case ModelId::SC: return "SC";
    case ModelId::TSO: return "TSO";
    case ModelId::PSO: return "PSO";
    case ModelId::WMM: return "WMM";
    case ModelId::WMMS: return "WMM-S";
    case ModelId::FM: return "FM";
    case ModelId::WMM_AX: return "WMM-AX";
  }
  return "?";
}

std::optional<ModelId> model_from_name(const std::string& name) {
  for (ModelId id : {ModelId::SC, ModelId::TSO, ModelId::PSO, ModelId::WMM,
                     ModelId::WMMS, ModelId::FM, ModelId::WMM_AX}) {
    if (name == model_name(id)) return id;
  }
  return std::nullopt;
}

std::vector<ModelId> all_operational_models() {
  return {ModelId::SC, ModelId::TSO, ModelId::PSO,
          ModelId::WMM, ModelId::WMMS, ModelId::FM};
}

Expr Expr::constant(Value v) {
  Expr e;
  e.kind = Kind::Const;
  e.value = v;
  return e;
}

Expr Expr::addr(std::string name) {
  Expr e;
  e.kind = Kind::AddrLit;
  e.name = std::move(name);
  return e;
}

Expr Expr::reg(std::string name) {
  Expr e;
  e.kind = Kind::RegRead;
  e.name = std::move(name);
  return e;
}

Expr Expr::add(Expr l, Expr r) {
  Expr e;
  e.kind = Kind::Add;
  e.kids = {std::move(l), std::move(r)};
  return e;
}

Expr Expr::sub(Expr l, Expr r) {
  Expr e;
  e.kind = Kind::Sub;
  e.kids = {std::move(l), std::move(r)};
  return e;
}

Value eval_expr(const Expr& e, const std::map<std::string, Value>& regs,
                const std::map<std::string, Value>& addr_encoding) {
  switch (e.kind) {
    case Expr::Kind::Const: return e.value;
    case Expr::Kind::AddrLit: {
      auto it = addr_encoding.find(e.name);
      return it == addr_encoding.end() ? 0 : it->second;
    }
    case Expr::Kind::RegRead: {
      auto it = regs.find(e.name);
      return it == regs.end() ? 0 : it->second;
    }
    case Expr::Kind::Add:
      return eval_expr(e.kids[0], regs, addr_encoding) +
             eval_expr(e.kids[1], regs, addr_encoding);
    case Expr::Kind::Sub:
      return eval_expr(e.kids[0], regs, addr_encoding) -
             eval_expr(e.kids[1], regs, addr_encoding);
  }
  return 0;
}

const char* rel_name(Rel r) {
  switch (r) {
    case Rel::Eq: return "=";
    case Rel::Ne: return "!=";
    case Rel::Lt: return "<";
    case Rel::Gt: return ">";
  }
  return "?";
}

bool rel_holds(Rel r, Value l, Value v) {
  switch (r) {
    case Rel::Eq: return l == v;
    case Rel::Ne: return l != v;
    case Rel::Lt: return l < v;
    case Rel::Gt: return l > v;
  }
  return false;
}

Instruction Instruction::load(std::string reg, Expr addr) {
  Instruction i;
  i.op = Op::Load;
  i.reg = std::move(reg);
  i.e1 = std::move(addr);
  return i;
}

Instruction Instruction::store(Expr addr, Expr data) {
  Instruction i;
  i.op = Op::Store;
  i.e1 = std::move(addr);
  i.e2 = std::move(data);
  return i;
}

Instruction Instruction::commit() {
  Instruction i;
  i.op = Op::Commit;
  return i;
}

Instruction Instruction::reconcile() {
  Instruction i;
  i.op = Op::Reconcile;
  return i;
}

Instruction Instruction::assign(std::string reg, Expr e) {
  Instruction i;
  i.op = Op::Assign;
  i.reg = std::move(reg);
  i.e1 = std::move(e);
  return i;
}

Instruction Instruction::exit_if(Expr lhs, Rel rel, Expr rhs) {
  Instruction i;
  i.op = Op::ExitIf;
  i.e1 = std::move(lhs);
  i.e2 = std::move(rhs);
  i.rel = rel;
  return i;
}

std::map<std::string, Value> Program::address_encoding() const {
  std::map<std::string, Value> enc;
  Value next = kAddressBase;
  for (const auto& [name, _] : init) enc.emplace(name, next++);
  return enc;
}

bool Program::has_address(const std::string& name) const {
  return std::any_of(init.begin(), init.end(),
                     [&](const auto& p) { return p.first == name; });
}

bool Program::branch_free() const {
  for (const auto& t : threads)
    for (const auto& i : t.code)
      if (i.op == Instruction::Op::ExitIf) return false;
  return true;
}

bool Program::fence_free() const {
  for (const auto& t : threads)
    for (const auto& i : t.code)
      if (i.op == Instruction::Op::Commit || i.op == Instruction::Op::Reconcile)
        return false;
  return true;
}

std::size_t Program::instruction_count() const {
  std::size_t n = 0;
  for (const auto& t : threads) n += t.code.size();
  return n;
}

Condition Condition::reg_eq(std::string thread, std::string reg, Value v) {
  Condition c;
  c.kind = Kind::RegEq;
  c.thread = std::move(thread);
  c.reg = std::move(reg);
  c.value = v;
  return c;
}

Condition Condition::mem_eq(std::string addr, Value v) {
  Condition c;
  c.kind = Kind::MemEq;
  c.addr = std::move(addr);
  c.value = v;
  return c;
}

Condition Condition::conj(std::vector<Condition> kids) {
  if (kids.size() == 1) return kids[0];
  Condition c;
  c.kind = Kind::And;
  c.kids = std::move(kids);
  return c;
}

Condition Condition::disj(std::vector<Condition> kids) {
  if (kids.size() == 1) return kids[0];
  Condition c;
  c.kind = Kind::Or;
  c.kids = std::move(kids);
  return c;
}

std::optional<Verdict> LitmusTest::expectation(ModelId id) const {
  for (const auto& [m, v] : expectations)
    if (m == id) return v;
  return std::nullopt;
}

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ")"),
      line(line),
      col(col) {}

namespace {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  Value value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        bump();
      tok_.kind = Token::Kind::Ident;
      tok_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        bump();
      tok_.kind = Token::Kind::Int;
      tok_.text = text_.substr(start, pos_ - start);
      tok_.value = std::stoll(tok_.text);
      return;
    }
    // Two-character operators.
    if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\\') {
      tok_.kind = Token::Kind::Punct;
      tok_.text = "/\\";
      bump();
      bump();
      return;
    }
    if (c == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
      tok_.kind = Token::Kind::Punct;
      tok_.text = "\\/";
      bump();
      bump();
      return;
    }
    if (c == '!' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
      tok_.kind = Token::Kind::Punct;
      tok_.text = "!=";
      bump();
      bump();
      return;
    }
    tok_.kind = Token::Kind::Punct;
    tok_.text = std::string(1, c);
    bump();
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  LitmusTest parse() {
    LitmusTest t;
    expect_keyword("test");
    t.name = parse_test_name();

    while (lex_.peek().kind != Token::Kind::End) {
      const Token& tok = lex_.peek();
      if (tok.kind != Token::Kind::Ident)
        fail("expected a section keyword", tok);
      if (tok.text == "init") {
        parse_init(t.program);
      } else if (tok.text == "thread") {
        parse_thread(t.program);
      } else if (tok.text == "exists") {
        lex_.take();
        expect_punct("(");
        t.condition = parse_or(t);
        expect_punct(")");
        seen_condition_ = true;
      } else if (tok.text == "expect") {
        parse_expect(t);
      } else if (tok.text == "topology") {
        parse_topology_block(t);
      } else {
        fail("unexpected section '" + tok.text + "'", tok);
      }
    }
    if (!seen_condition_)
      fail("missing exists clause", lex_.peek());
    if (t.program.threads.empty())
      fail("a test needs at least one thread", lex_.peek());
    return t;
  }

 private:
  // Names like "MP+Commit+Reconcile" or "RMO-dep" span several tokens.
  std::string parse_test_name() {
    std::string name = expect_ident("test name");
    while (lex_.peek().kind == Token::Kind::Punct &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      std::string sep = lex_.take().text;
      Token next = lex_.take();
      if (next.kind != Token::Kind::Ident && next.kind != Token::Kind::Int)
        fail("malformed test name", next);
      name += sep + next.text;
    }
    return name;
  }

  void parse_init(Program& p) {
    Token kw = lex_.take();
    if (!p.init.empty()) fail("duplicate init section", kw);
    expect_punct("{");
    if (!try_punct("}")) {
      do {
        Token name = lex_.take();
        if (name.kind != Token::Kind::Ident)
          fail("expected address name", name);
        if (std::any_of(p.init.begin(), p.init.end(),
                        [&](const auto& e) { return e.first == name.text; }))
          fail("duplicate address '" + name.text + "'", name);
        expect_punct("=");
        p.init.emplace_back(name.text, parse_int());
      } while (try_punct(","));
      expect_punct("}");
    }
  }

  void parse_thread(Program& p) {
    lex_.take();
    Token name = lex_.take();
    if (name.kind != Token::Kind::Ident) fail("expected thread name", name);
    for (const auto& t : p.threads)
      if (t.name == name.text)
        fail("duplicate thread name '" + name.text + "'", name);
    Thread th;
    th.name = name.text;
    cur_defined_.clear();
    expect_punct("{");
    while (!try_punct("}")) parse_instruction(p, th.code);
    p.threads.push_back(std::move(th));
    defined_regs_[name.text] = cur_defined_;
  }

  void parse_instruction(Program& p, std::vector<Instruction>& out) {
    Token tok = lex_.take();
    if (tok.kind != Token::Kind::Ident) fail("expected an instruction", tok);
    if (tok.text == "St") {
      Expr addr = parse_expr(p);
      Expr data = parse_expr(p);
      out.push_back(Instruction::store(std::move(addr), std::move(data)));
    } else if (tok.text == "Commit") {
      out.push_back(Instruction::commit());
    } else if (tok.text == "Reconcile") {
      out.push_back(Instruction::reconcile());
    } else if (tok.text == "Fence") {
      // Sugar for Commit;Reconcile; desugars at parse time.
      out.push_back(Instruction::commit());
      out.push_back(Instruction::reconcile());
    } else if (tok.text == "if") {
      Expr lhs = parse_expr(p);
      Rel rel = parse_rel();
      Expr rhs = parse_expr(p);
      expect_keyword("exit");
      out.push_back(Instruction::exit_if(std::move(lhs), rel, std::move(rhs)));
    } else {
      // "r = Ld <expr>" or "r = <expr>"
      if (p.has_address(tok.text))
        fail("address '" + tok.text + "' cannot be an assignment target", tok);
      expect_punct("=");
      if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "Ld") {
        lex_.take();
        out.push_back(Instruction::load(tok.text, parse_expr(p)));
      } else {
        out.push_back(Instruction::assign(tok.text, parse_expr(p)));
      }
      cur_defined_.insert(tok.text);
    }
    expect_punct(";");
  }

  Expr parse_expr(const Program& p) {
    Expr e = parse_primary(p);
    while (lex_.peek().kind == Token::Kind::Punct &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      bool add = lex_.take().text == "+";
      Expr rhs = parse_primary(p);
      e = add ? Expr::add(std::move(e), std::move(rhs))
              : Expr::sub(std::move(e), std::move(rhs));
    }
    return e;
  }

  Expr parse_primary(const Program& p) {
    Token tok = lex_.take();
    if (tok.kind == Token::Kind::Int) return Expr::constant(tok.value);
    if (tok.kind == Token::Kind::Punct && tok.text == "(") {
      Expr e = parse_expr(p);
      expect_punct(")");
      return e;
    }
    if (tok.kind == Token::Kind::Ident) {
      if (p.has_address(tok.text)) return Expr::addr(tok.text);
      if (!cur_defined_.count(tok.text))
        fail("undefined register '" + tok.text + "'", tok);
      return Expr::reg(tok.text);
    }
    fail("expected an expression", tok);
    return Expr::constant(0);
  }

  Rel parse_rel() {
    Token tok = lex_.take();
    if (tok.kind == Token::Kind::Punct) {
      if (tok.text == "=") return Rel::Eq;
      if (tok.text == "!=") return Rel::Ne;
      if (tok.text == "<") return Rel::Lt;
      if (tok.text == ">") return Rel::Gt;
    }
    fail("expected a relational operator", tok);
    return Rel::Eq;
  }

  Condition parse_or(const LitmusTest& t) {
    std::vector<Condition> kids{parse_and(t)};
    while (try_punct("\\/")) kids.push_back(parse_and(t));
    return Condition::disj(std::move(kids));
  }

  Condition parse_and(const LitmusTest& t) {
    std::vector<Condition> kids{parse_atom(t)};
    while (try_punct("/\\")) kids.push_back(parse_atom(t));
    return Condition::conj(std::move(kids));
  }

  Condition parse_atom(const LitmusTest& t) {
    if (try_punct("(")) {
      Condition c = parse_or(t);
      expect_punct(")");
      return c;
    }
    Token tok = lex_.take();
    if (tok.kind != Token::Kind::Ident) fail("expected a condition atom", tok);
    if (tok.text == "m") {
      expect_punct("[");
      Token addr = lex_.take();
      if (addr.kind != Token::Kind::Ident || !t.program.has_address(addr.text))
        fail("unknown address in memory atom", addr);
      expect_punct("]");
      expect_punct("=");
      return Condition::mem_eq(addr.text, parse_atom_value(t));
    }
    // thread.register
    auto thr = std::find_if(t.program.threads.begin(), t.program.threads.end(),
                            [&](const Thread& th) { return th.name == tok.text; });
    if (thr == t.program.threads.end())
      fail("unknown thread '" + tok.text + "' in condition", tok);
    expect_punct(".");
    Token reg = lex_.take();
    if (reg.kind != Token::Kind::Ident) fail("expected register name", reg);
    if (!defined_regs_[tok.text].count(reg.text))
      fail("register '" + reg.text + "' is never assigned in thread '" +
               tok.text + "'",
           reg);
    expect_punct("=");
    return Condition::reg_eq(tok.text, reg.text, parse_atom_value(t));
  }

  // Atom right-hand sides are integers or declared address names (the latter
  // evaluate to their encoding, so conditions like "P2.r1 = a" work).
  Value parse_atom_value(const LitmusTest& t) {
    if (lex_.peek().kind == Token::Kind::Ident) {
      Token tok = lex_.take();
      auto enc = t.program.address_encoding();
      auto it = enc.find(tok.text);
      if (it == enc.end()) fail("unknown address '" + tok.text + "'", tok);
      return it->second;
    }
    return parse_int();
  }

  void parse_expect(LitmusTest& t) {
    Token kw = lex_.take();
    if (!t.expectations.empty()) fail("duplicate expect section", kw);
    expect_punct("{");
    do {
      Token name = lex_.take();
      if (name.kind != Token::Kind::Ident) fail("expected model id", name);
      std::string full = name.text;
      // Hyphenated ids such as WMM-S span several tokens.
      while (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "-") {
        lex_.take();
        Token part = lex_.take();
        if (part.kind != Token::Kind::Ident) fail("expected model id", part);
        full += "-" + part.text;
      }
      auto id = model_from_name(full);
      if (!id) fail("unknown model id '" + full + "'", name);
      for (const auto& [m, _] : t.expectations)
        if (m == *id) fail("duplicate expectation for " + full, name);
      expect_punct(":");
      Token v = lex_.take();
      if (v.kind != Token::Kind::Ident || (v.text != "allow" && v.text != "forbid"))
        fail("expected 'allow' or 'forbid'", v);
      t.expectations.emplace_back(*id, v.text == "allow" ? Verdict::Allow
                                                         : Verdict::Forbid);
    } while (try_punct(","));
    expect_punct("}");
  }

  void parse_topology_block(LitmusTest& t) {
    Token kw = lex_.take();
    if (t.topology) fail("duplicate topology section", kw);
    TopologySpec spec;
    expect_punct("{");
    while (!try_punct("}")) parse_topology_statement(spec);
    validate_topology_shape(spec, kw);
    // Thread bindings must be total and well-formed for this test.
    for (const auto& [proc, seg] : spec.procs) {
      bool known = std::any_of(
          t.program.threads.begin(), t.program.threads.end(),
          [&](const Thread& th) { return th.name == proc; });
      if (!known) fail("proc '" + proc + "' is not a thread of this test", kw);
    }
    for (const auto& th : t.program.threads) {
      bool bound = std::any_of(spec.procs.begin(), spec.procs.end(),
                               [&](const auto& p) { return p.first == th.name; });
      if (!bound)
        fail("thread '" + th.name + "' has no segment binding", kw);
    }
    t.topology = std::move(spec);
  }

  void parse_topology_statement(TopologySpec& spec) {
    Token head = lex_.take();
    if (head.kind != Token::Kind::Ident)
      fail("expected 'seg' or 'proc'", head);
    if (head.text == "seg") {
      std::string name = expect_ident("segment name");
      expect_keyword("parent");
      std::string parent = expect_ident("parent segment");
      for (const auto& [n, _] : spec.segments)
        if (n == name) fail("duplicate segment '" + name + "'", head);
      spec.segments.emplace_back(name, parent);
    } else if (head.text == "proc") {
      std::string proc = expect_ident("processor name");
      expect_keyword("at");
      std::string seg = expect_ident("segment name");
      for (const auto& [p, _] : spec.procs)
        if (p == proc) fail("duplicate proc binding '" + proc + "'", head);
      spec.procs.emplace_back(proc, seg);
    } else {
      fail("expected 'seg' or 'proc'", head);
    }
    expect_punct(";");
  }

  void validate_topology_shape(const TopologySpec& spec, const Token& at) {
    auto find_seg = [&](const std::string& n) {
      return std::find_if(spec.segments.begin(), spec.segments.end(),
                          [&](const auto& s) { return s.first == n; });
    };
    for (const auto& [name, parent] : spec.segments) {
      if (parent != "mem" && find_seg(parent) == spec.segments.end())
        fail("segment '" + name + "' has unknown parent '" + parent + "'", at);
    }
    // Walking to the root must terminate for every segment.
    for (const auto& [name, _] : spec.segments) {
      std::set<std::string> seen;
      std::string cur = name;
      while (cur != "mem") {
        if (!seen.insert(cur).second)
          fail("cycle in segment parents at '" + cur + "'", at);
        cur = find_seg(cur)->second;
      }
    }
    for (const auto& [proc, seg] : spec.procs) {
      if (find_seg(seg) == spec.segments.end())
        fail("proc '" + proc + "' bound to missing segment '" + seg + "'", at);
    }
  }

 public:
  // Standalone topology document (for --topology files).
  TopologySpec parse_topology_only() {
    TopologySpec spec;
    bool braced = false;
    if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "topology") {
      lex_.take();
      expect_punct("{");
      braced = true;
    }
    while (lex_.peek().kind != Token::Kind::End) {
      if (braced && try_punct("}")) break;
      parse_topology_statement(spec);
    }
    if (lex_.peek().kind != Token::Kind::End)
      fail("trailing input after topology", lex_.peek());
    validate_topology_shape(spec, lex_.peek());
    return spec;
  }

 private:

  Value parse_int() {
    bool neg = try_punct("-");
    Token tok = lex_.take();
    if (tok.kind != Token::Kind::Int) fail("expected an integer", tok);
    return neg ? -tok.value : tok.value;
  }

  std::string expect_ident(const std::string& what) {
    Token tok = lex_.take();
    if (tok.kind != Token::Kind::Ident) fail("expected " + what, tok);
    return tok.text;
  }

  void expect_keyword(const std::string& kw) {
    Token tok = lex_.take();
    if (tok.kind != Token::Kind::Ident || tok.text != kw)
      fail("expected '" + kw + "'", tok);
  }

  void expect_punct(const std::string& p) {
    Token tok = lex_.take();
    if (tok.kind != Token::Kind::Punct || tok.text != p)
      fail("expected '" + p + "'", tok);
  }

  bool try_punct(const std::string& p) {
    if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
      lex_.take();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg, const Token& tok) {
    throw ParseError(msg, tok.line, tok.col);
  }

  Lexer lex_;
  bool seen_condition_ = false;
  std::set<std::string> cur_defined_;
  std::map<std::string, std::set<std::string>> defined_regs_;
};

void print_expr(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const: os << e.value; break;
    case Expr::Kind::AddrLit:
    case Expr::Kind::RegRead: os << e.name; break;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      print_expr(os, e.kids[0]);
      os << (e.kind == Expr::Kind::Add ? " + " : " - ");
      print_expr(os, e.kids[1]);
      break;
  }
}

bool is_atom_expr(const Expr& e) {
  return e.kind == Expr::Kind::Const || e.kind == Expr::Kind::AddrLit ||
         e.kind == Expr::Kind::RegRead;
}

void print_operand(std::ostream& os, const Expr& e) {
  if (is_atom_expr(e)) {
    print_expr(os, e);
  } else {
    os << "(";
    print_expr(os, e);
    os << ")";
  }
}

void print_condition(std::ostream& os, const Condition& c, bool parens) {
  switch (c.kind) {
    case Condition::Kind::RegEq:
      os << c.thread << "." << c.reg << " = " << c.value;
      break;
    case Condition::Kind::MemEq:
      os << "m[" << c.addr << "] = " << c.value;
      break;
    case Condition::Kind::And:
    case Condition::Kind::Or: {
      const char* sep = c.kind == Condition::Kind::And ? " /\\ " : " \\/ ";
      if (parens) os << "(";
      for (std::size_t i = 0; i < c.kids.size(); ++i) {
        if (i) os << sep;
        // Nested disjunctions under a conjunction need their own parens.
        print_condition(os, c.kids[i], c.kids[i].kids.size() > 1);
      }
      if (parens) os << ")";
      break;
    }
  }
}

} // namespace

LitmusTest parse_litmus(const std::string& text) {
  return Parser(text).parse();
}

TopologySpec parse_topology_text(const std::string& text) {
  return Parser(text).parse_topology_only();
}

std::string serialize_litmus(const LitmusTest& test) {
  std::ostringstream os;
  os << "test " << test.name << "\n";
  os << "init {";
  for (std::size_t i = 0; i < test.program.init.size(); ++i) {
    os << (i ? ", " : " ") << test.program.init[i].first << "="
       << test.program.init[i].second;
  }
  os << " }\n";
  for (const auto& th : test.program.threads) {
    os << "thread " << th.name << " {";
    for (const auto& ins : th.code) {
      os << " ";
      switch (ins.op) {
        case Instruction::Op::Load:
          os << ins.reg << " = Ld ";
          print_operand(os, ins.e1);
          break;
        case Instruction::Op::Store:
          os << "St ";
          print_operand(os, ins.e1);
          os << " ";
          print_operand(os, ins.e2);
          break;
        case Instruction::Op::Commit: os << "Commit"; break;
        case Instruction::Op::Reconcile: os << "Reconcile"; break;
        case Instruction::Op::Assign:
          os << ins.reg << " = ";
          print_expr(os, ins.e1);
          break;
        case Instruction::Op::ExitIf:
          os << "if ";
          print_expr(os, ins.e1);
          os << " " << rel_name(ins.rel) << " ";
          print_expr(os, ins.e2);
          os << " exit";
          break;
      }
      os << ";";
    }
    os << " }\n";
  }
  os << "exists (";
  print_condition(os, test.condition, false);
  os << ")\n";
  if (!test.expectations.empty()) {
    os << "expect {";
    for (std::size_t i = 0; i < test.expectations.size(); ++i) {
      os << (i ? ", " : " ") << model_name(test.expectations[i].first) << ": "
         << verdict_name(test.expectations[i].second);
    }
    os << " }\n";
  }
  if (test.topology) {
    os << "topology {";
    for (const auto& [name, parent] : test.topology->segments)
      os << " seg " << name << " parent " << parent << ";";
    for (const auto& [proc, seg] : test.topology->procs)
      os << " proc " << proc << " at " << seg << ";";
    os << " }\n";
  }
  return os.str();
}

} // namespace memweave
