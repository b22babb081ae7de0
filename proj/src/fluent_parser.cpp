#include "ontonet/fluent_dsl.hpp"

#include <cctype>
#include <map>

namespace ontonet::dsl {

ModelError::ModelError(Kind kind, int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

std::int64_t Param::resolved() const noexcept {
  switch (unit) {
    case Unit::count:
    case Unit::ms: return amount;
    case Unit::s: return amount * 1000;
    case Unit::min: return amount * 60'000;
  }
  return amount;
}

const Param* ModelAst::param(std::string_view wanted) const noexcept {
  for (const auto& p : params)
    if (p.name == wanted) return &p;
  return nullptr;
}

namespace {

enum class Tok { ident, number, define, le, amp, bar, caret, plus, minus, colon, lparen, rparen, comma, equals, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "name";
    case Tok::number: return "number";
    case Tok::define: return "':='";
    case Tok::le: return "'<='";
    case Tok::amp: return "'&'";
    case Tok::bar: return "'|'";
    case Tok::caret: return "'^'";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::colon: return "':'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::equals: return "'='";
    case Tok::end: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    i += n;
    col += static_cast<int>(n);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    const int start = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::ident, std::string(text.substr(i, j - i)), line, start});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::number, std::string(text.substr(i, j - i)), line, start});
      advance(j - i);
      continue;
    }
    auto two = text.substr(i, 2);
    if (two == ":=") {
      out.push_back({Tok::define, ":=", line, start});
      advance(2);
      continue;
    }
    if (two == "<=") {
      out.push_back({Tok::le, "<=", line, start});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '&': kind = Tok::amp; break;
      case '|': kind = Tok::bar; break;
      case '^': kind = Tok::caret; break;
      case '+': kind = Tok::plus; break;
      case '-': kind = Tok::minus; break;
      case ':': kind = Tok::colon; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      case ',': kind = Tok::comma; break;
      case '=': kind = Tok::equals; break;
      default:
        throw ModelError(ModelError::Kind::syntax, line, start,
                         std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), line, start});
    advance(1);
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

struct ParamUse {
  std::string name;
  bool wants_time;
  int line;
  int column;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ConceptGraph* classes)
      : toks_(std::move(tokens)), classes_(classes) {}

  ModelAst parse() {
    ModelAst ast;
    ast.name = expect(Tok::ident, "model name").text;
    expect(Tok::define, "':='");
    ast.root = parse_prec();
    if (peek().kind == Tok::ident && peek().text == "where") {
      next();
      parse_params(ast);
    }
    if (peek().kind != Tok::end) fail(peek(), "unexpected " + show(peek()));
    check_params(ast);
    return ast;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  static std::string show(const Token& t) {
    return t.kind == Tok::ident || t.kind == Tok::number ? "'" + t.text + "'" : describe(t.kind);
  }

  [[noreturn]] static void fail(const Token& at, const std::string& msg,
                                ModelError::Kind kind = ModelError::Kind::syntax) {
    throw ModelError(kind, at.line, at.column, msg);
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what + ", got " + show(peek()));
    return next();
  }

  Node binary(NodeKind kind, Node lhs, Node rhs) {
    Node n;
    n.kind = kind;
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    return n;
  }

  /// Parses the right operand of `op`; a missing operand is reported at the operator.
  template <class Fn>
  Node operand_after(const Token& op, Fn parse_fn) {
    if (peek().kind == Tok::end || peek().kind == Tok::rparen || peek().kind == Tok::le ||
        peek().kind == Tok::amp || peek().kind == Tok::bar ||
        (peek().kind == Tok::ident && peek().text == "where"))
      fail(op, "operator " + show(op) + " has no right operand");
    return parse_fn();
  }

  Node parse_prec() {
    Node lhs = parse_or();
    while (peek().kind == Tok::le) {
      const Token op = next();
      lhs = binary(NodeKind::precedence, std::move(lhs), operand_after(op, [&] { return parse_or(); }));
    }
    return lhs;
  }

  Node parse_or() {
    Node lhs = parse_and();
    while (peek().kind == Tok::bar) {
      const Token op = next();
      lhs = binary(NodeKind::disj, std::move(lhs), operand_after(op, [&] { return parse_and(); }));
    }
    return lhs;
  }

  Node parse_and() {
    Node lhs = parse_term();
    while (peek().kind == Tok::amp) {
      const Token op = next();
      lhs = binary(NodeKind::conj, std::move(lhs), operand_after(op, [&] { return parse_term(); }));
    }
    return lhs;
  }

  Node parse_term() {
    Node inner = parse_primary();
    while (peek().kind == Tok::caret) {
      next();
      Node mask;
      mask.kind = NodeKind::mask;
      mask.state = parse_state();
      mask.children.push_back(std::move(inner));
      inner = std::move(mask);
    }
    return inner;
  }

  bool parse_state() {
    const Token& t = peek();
    if (t.kind == Tok::plus || t.kind == Tok::minus) {
      next();
      return t.kind == Tok::plus;
    }
    fail(t, "expected state '+' or '-', got " + show(t));
  }

  std::string parse_param_ref(bool wants_time) {
    const Token& t = expect(Tok::ident, "parameter name");
    uses_.push_back({t.text, wants_time, t.line, t.column});
    return t.text;
  }

  Node parse_atom() {
    const Token& cls = expect(Tok::ident, "sensor class");
    if (classes_ != nullptr && !classes_->contains(cls.text))
      fail(cls, "unknown sensor class '" + cls.text + "'", ModelError::Kind::unknown_class);
    expect(Tok::colon, "':' after sensor class");
    Node n;
    n.kind = NodeKind::atom;
    n.concept_name = cls.text;
    n.state = parse_state();
    return n;
  }

  Node parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::lparen) {
      next();
      Node inner = parse_prec();
      expect(Tok::rparen, "')'");
      return inner;
    }
    if (t.kind == Tok::ident && t.text == "conv" && toks_[pos_ + 1].kind == Tok::lparen) {
      next();
      next();
      Node atom = parse_atom();
      Node n;
      n.kind = NodeKind::conv;
      n.concept_name = atom.concept_name;
      n.state = atom.state;
      expect(Tok::comma, "','");
      n.param = parse_param_ref(false);
      expect(Tok::comma, "','");
      n.window = parse_param_ref(true);
      if (peek().kind == Tok::comma) {
        next();
        n.derived = expect(Tok::ident, "derived class name").text;
      }
      expect(Tok::rparen, "')'");
      return n;
    }
    if (t.kind != Tok::ident) fail(t, "expected a term, got " + show(t));
    Node atom = parse_atom();
    if (peek().kind == Tok::plus) {
      const Token op = next();
      if (peek().kind != Tok::ident) fail(op, "shift '+' needs a parameter name");
      Node shift;
      shift.kind = NodeKind::shift;
      shift.param = parse_param_ref(true);
      shift.children.push_back(std::move(atom));
      return shift;
    }
    return atom;
  }

  void parse_params(ModelAst& ast) {
    while (peek().kind == Tok::ident) {
      const Token& name = next();
      if (ast.param(name.text) != nullptr)
        fail(name, "parameter '" + name.text + "' declared twice", ModelError::Kind::bad_parameter);
      expect(Tok::equals, "'='");
      const Token& num = expect(Tok::number, "parameter value");
      Param p{name.text, 0, Unit::count};
      try {
        p.amount = std::stoll(num.text);
      } catch (const std::out_of_range&) {
        fail(num, "parameter value out of range", ModelError::Kind::bad_parameter);
      }
      if (peek().kind == Tok::ident) {
        const std::string& u = peek().text;
        if (u == "ms" || u == "s" || u == "min") {
          p.unit = u == "ms" ? Unit::ms : u == "s" ? Unit::s : Unit::min;
          next();
        }
      }
      ast.params.push_back(std::move(p));
    }
  }

  void check_params(const ModelAst& ast) const {
    for (const auto& use : uses_) {
      const Param* p = ast.param(use.name);
      if (p == nullptr)
        throw ModelError(ModelError::Kind::unknown_parameter, use.line, use.column,
                         "parameter '" + use.name + "' has no value");
      if (use.wants_time && p->unit == Unit::count)
        throw ModelError(ModelError::Kind::bad_parameter, use.line, use.column,
                         "parameter '" + use.name + "' needs a time unit");
      if (!use.wants_time && (p->unit != Unit::count || p->amount < 1))
        throw ModelError(ModelError::Kind::bad_parameter, use.line, use.column,
                         "parameter '" + use.name + "' must be a positive count");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ConceptGraph* classes_;
  std::vector<ParamUse> uses_;
};

}  // namespace

ModelAst parse_model(std::string_view text, const ConceptGraph* classes) {
  return Parser(tokenize(text), classes).parse();
}

}  // namespace ontonet::dsl
