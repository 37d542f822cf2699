#include <cctype>
#include <map>

#include "gubs/syntax.hpp"

namespace gubs {
namespace {

enum class Tok {
  Ident,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Comma,
  Plus,
  Dot,
  Colon,
  DoubleColon,
  Tilde,
  Prec,
  Napprox,
  Normal,
  Persistent,
  Remanent,
  Activation,
  Inhibition,
  End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Plus: return "'+'";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::DoubleColon: return "'::'";
    case Tok::Tilde: return "'~'";
    case Tok::Prec: return "'<'";
    case Tok::Napprox: return "'><'";
    case Tok::Normal: return "'->'";
    case Tok::Persistent: return "'=>'";
    case Tok::Remanent: return "'~>'";
    case Tok::Activation: return "'+>'";
    case Tok::Inhibition: return "'-|'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  auto two = [&](char a, char b) { return i + 1 < src.size() && src[i] == a && src[i + 1] == b; };

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (two('/', '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourcePos start = pos;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    struct Fixed {
      const char* text;
      Tok kind;
    };
    static const Fixed fixed[] = {
        {"::", Tok::DoubleColon}, {"><", Tok::Napprox},    {"->", Tok::Normal},
        {"=>", Tok::Persistent},  {"~>", Tok::Remanent},   {"+>", Tok::Activation},
        {"-|", Tok::Inhibition},  {"{", Tok::LBrace},      {"}", Tok::RBrace},
        {"[", Tok::LBracket},     {"]", Tok::RBracket},    {"(", Tok::LParen},
        {")", Tok::RParen},       {",", Tok::Comma},       {"+", Tok::Plus},
        {".", Tok::Dot},          {":", Tok::Colon},       {"~", Tok::Tilde},
        {"<", Tok::Prec},
    };
    bool matched = false;
    for (const auto& f : fixed) {
      std::string_view t(f.text);
      if (src.substr(i, t.size()) == t) {
        out.push_back({f.kind, std::string(t), start});
        advance(t.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw SyntaxError(start, std::string("character '") + c + "'", {"identifier", "operator", "bracket"});
    }
  }
  out.push_back({Tok::End, "", pos});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    expect(Tok::LBrace);
    Program p;
    p.behaviours = behaviours_until_rbrace();
    expect(Tok::RBrace);
    if (peek().kind != Tok::End) fail({tok_name(Tok::End)});
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  bool at(Tok t, std::size_t ahead = 0) const { return peek(ahead).kind == t; }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.pos, found, std::move(expected));
  }

  Token expect(Tok t) {
    if (!at(t)) fail({tok_name(t)});
    return toks_[pos_++];
  }

  bool accept(Tok t) {
    if (at(t)) {
      ++pos_;
      return true;
    }
    return false;
  }

  Ident ident() { return Ident(expect(Tok::Ident).text); }

  std::vector<Behaviour> behaviours_until_rbrace() {
    std::vector<Behaviour> out;
    if (at(Tok::RBrace)) return out;
    for (;;) {
      behaviour(out);
      if (!accept(Tok::Comma)) break;
      if (at(Tok::RBrace)) break;  // trailing comma
    }
    if (!at(Tok::RBrace)) fail({tok_name(Tok::Comma), tok_name(Tok::RBrace)});
    return out;
  }

  // Scans `id (, id)* (: | ::)` without consuming; returns the number of idents.
  std::size_t attr_decl_lookahead() const {
    std::size_t k = 0;
    std::size_t n = 0;
    for (;;) {
      if (!at(Tok::Ident, k)) return 0;
      ++n;
      ++k;
      if (at(Tok::Colon, k)) return n;
      if (at(Tok::DoubleColon, k)) {
        // `x :: {` or `x :: exclusion {` is a declaration, `x :: s` an observation.
        if (at(Tok::LBrace, k + 1)) return n;
        if (at(Tok::Ident, k + 1) && at(Tok::LBrace, k + 2) &&
            (peek(k + 1).text == "exclusion" || peek(k + 1).text == "inclusion")) {
          return n;
        }
        return n > 1 ? n : 0;
      }
      if (!at(Tok::Comma, k)) return 0;
      ++k;
    }
  }

  void behaviour(std::vector<Behaviour>& out) {
    if (at(Tok::LBracket)) {
      ++pos_;
      ContextB ctx;
      ctx.contexts.push_back(ident());
      while (accept(Tok::Comma)) ctx.contexts.push_back(ident());
      expect(Tok::RBracket);
      expect(Tok::LBrace);
      ctx.body = behaviours_until_rbrace();
      expect(Tok::RBrace);
      out.push_back(Behaviour{std::move(ctx)});
      return;
    }
    if (at(Tok::Ident) && at(Tok::LBrace, 1)) {
      CompartmentB comp;
      comp.name = ident();
      expect(Tok::LBrace);
      comp.body = behaviours_until_rbrace();
      expect(Tok::RBrace);
      out.push_back(Behaviour{std::move(comp)});
      return;
    }
    if (attr_decl_lookahead() > 0) {
      out.push_back(Behaviour{attr_decl()});
      return;
    }
    if (at(Tok::Ident) && at(Tok::DoubleColon, 1)) {
      ObservationB obs;
      obs.label = ident();
      expect(Tok::DoubleColon);
      obs.states = collection();
      out.push_back(Behaviour{std::move(obs)});
      return;
    }
    if (!at(Tok::Ident) && !at(Tok::Tilde)) {
      fail({tok_name(Tok::Ident), tok_name(Tok::Tilde), tok_name(Tok::LBracket)});
    }
    dependence(out);
  }

  void dependence(std::vector<Behaviour>& out) {
    StateCollection lhs = collection();
    Tok arrow = peek().kind;
    switch (arrow) {
      case Tok::Normal:
      case Tok::Persistent:
      case Tok::Remanent:
      case Tok::Activation:
      case Tok::Inhibition:
        ++pos_;
        break;
      default:
        fail({tok_name(Tok::Normal), tok_name(Tok::Persistent), tok_name(Tok::Remanent),
              tok_name(Tok::Activation), tok_name(Tok::Inhibition), tok_name(Tok::Plus)});
    }
    StateCollection rhs = collection();
    switch (arrow) {
      case Tok::Normal:
        out.push_back(make_dependence(DependenceKind::Normal, lhs, rhs));
        break;
      case Tok::Persistent:
        out.push_back(make_dependence(DependenceKind::Persistent, lhs, rhs));
        break;
      case Tok::Remanent:
        out.push_back(make_dependence(DependenceKind::Remanent, lhs, rhs));
        break;
      case Tok::Activation:
        // g1 +> g2 == g1 => g2, ~g1 -> ~g2
        out.push_back(make_dependence(DependenceKind::Persistent, lhs, rhs));
        out.push_back(make_dependence(DependenceKind::Normal, negate_each(lhs), negate_each(rhs)));
        break;
      default:
        // g1 -| g2 == ~g1 => g2, g1 -> ~g2
        out.push_back(make_dependence(DependenceKind::Persistent, negate_each(lhs), rhs));
        out.push_back(make_dependence(DependenceKind::Normal, lhs, negate_each(rhs)));
        break;
    }
  }

  StateCollection collection() {
    StateCollection c;
    c.states.push_back(state());
    while (accept(Tok::Plus)) c.states.push_back(state());
    return c;
  }

  AgentState state() {
    AgentState s;
    bool negated = accept(Tok::Tilde);
    std::vector<Ident> names{ident()};
    while (accept(Tok::Dot)) {
      if (!negated && accept(Tok::Tilde)) negated = true;
      names.push_back(ident());
    }
    s.agent = names.back();
    names.pop_back();
    s.path = std::move(names);
    if (accept(Tok::LParen)) {
      if (accept(Tok::Tilde)) negated = true;
      s.attribute = ident();
      expect(Tok::RParen);
    }
    s.polarity = negated ? Polarity::Negative : Polarity::Positive;
    return s;
  }

  AttrDeclB attr_decl() {
    AttrDeclB decl;
    decl.agents.push_back(ident());
    while (accept(Tok::Comma)) decl.agents.push_back(ident());
    if (!accept(Tok::DoubleColon)) expect(Tok::Colon);
    if (at(Tok::Ident) && (peek().text == "exclusion" || peek().text == "inclusion")) {
      bool exclusion = peek().text == "exclusion";
      ++pos_;
      expect(Tok::LBrace);
      std::vector<Ident> names;
      if (!at(Tok::RBrace)) {
        names.push_back(ident());
        while (accept(Tok::Comma)) names.push_back(ident());
      }
      expect(Tok::RBrace);
      if (exclusion) {
        for (std::size_t i = 0; i < names.size(); ++i) {
          for (std::size_t j = i + 1; j < names.size(); ++j) {
            decl.relations.push_back({AttrRelKind::Napprox, names[i], names[j]});
          }
        }
        if (names.size() == 1) decl.relations.push_back({AttrRelKind::Bare, names[0], {}});
      } else {
        for (std::size_t i = 0; i + 1 < names.size(); ++i) {
          decl.relations.push_back({AttrRelKind::Prec, names[i], names[i + 1]});
        }
        if (names.size() == 1) decl.relations.push_back({AttrRelKind::Bare, names[0], {}});
      }
      return decl;
    }
    expect(Tok::LBrace);
    if (!at(Tok::RBrace)) {
      rel_group(decl.relations);
    }
    expect(Tok::RBrace);
    return decl;
  }

  // attrels ::= chain (, chain)*   chain ::= term ((< | ><) term)*
  // term ::= ident | { attrels }
  // Returns every attribute name mentioned.
  std::vector<Ident> rel_group(std::vector<AttrRel>& rels) {
    std::vector<Ident> names;
    for (;;) {
      auto chain_names = rel_chain(rels);
      names.insert(names.end(), chain_names.begin(), chain_names.end());
      if (!accept(Tok::Comma)) break;
    }
    return names;
  }

  std::vector<Ident> rel_term(std::vector<AttrRel>& rels, bool& grouped) {
    if (accept(Tok::LBrace)) {
      grouped = true;
      auto names = rel_group(rels);
      expect(Tok::RBrace);
      return names;
    }
    grouped = false;
    if (!at(Tok::Ident)) fail({tok_name(Tok::Ident), tok_name(Tok::LBrace)});
    return {ident()};
  }

  std::vector<Ident> rel_chain(std::vector<AttrRel>& rels) {
    bool grouped = false;
    std::vector<std::vector<Ident>> terms{rel_term(rels, grouped)};
    std::vector<AttrRelKind> ops;
    while (at(Tok::Prec) || at(Tok::Napprox)) {
      ops.push_back(at(Tok::Prec) ? AttrRelKind::Prec : AttrRelKind::Napprox);
      ++pos_;
      bool g = false;
      terms.push_back(rel_term(rels, g));
    }
    if (ops.empty()) {
      if (!grouped) rels.push_back({AttrRelKind::Bare, terms[0][0], {}});
      return terms[0];
    }
    // A run of >< makes every pair of its terms exclusive; < relates neighbours.
    std::size_t i = 0;
    while (i < ops.size()) {
      if (ops[i] == AttrRelKind::Prec) {
        for (const auto& a : terms[i]) {
          for (const auto& b : terms[i + 1]) rels.push_back({AttrRelKind::Prec, a, b});
        }
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < ops.size() && ops[j] == AttrRelKind::Napprox) ++j;
      for (std::size_t x = i; x <= j; ++x) {
        for (std::size_t y = x + 1; y <= j; ++y) {
          for (const auto& a : terms[x]) {
            for (const auto& b : terms[y]) rels.push_back({AttrRelKind::Napprox, a, b});
          }
        }
      }
      i = j;
    }
    std::vector<Ident> names;
    for (auto& t : terms) names.insert(names.end(), t.begin(), t.end());
    return names;
  }
};

}  // namespace

Program parse_program(std::string_view text) {
  Parser parser(lex(text));
  Program p = parser.program();
  check_unique_labels(p);
  return p;
}

}  // namespace gubs
