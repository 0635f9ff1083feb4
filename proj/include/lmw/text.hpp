#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "lmw/formula.hpp"

namespace lmw {

// Concrete syntax (ASCII), shared by the three languages:
//   ~ strong negation, & and, | or, -> imp (right-assoc),
//   => strong implication macro, <=> strong equivalence macro,
//   &&& ampersand macro, []> would-conditional, <>-> might-conditional macro,
//   [] box, <> diamond, forall vN . / exists vN ., vN = vM,
//   predicates pN(v), S(v), O(v), E(v,v), R(v,v,v), eps(v,v), signed pN+ etc.
// Precedence: ~/[]/<> > &,&&& > | > ->,=>,<=>,[]>,<>->. Binders scope to the
// end of the enclosing (sub)expression. Macros expand at parse time.

namespace text_detail {

enum class Tok {
  End, LParen, RParen, Comma, Dot, Eq, Tilde, Amp, Ampersand3, Pipe,
  Arrow, StrongArrow, StrongEquiv, BoxTo, DiamondTo, Box, Diamond,
  Forall, Exists, Ident
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Eq: return "'='";
    case Tok::Tilde: return "'~'";
    case Tok::Amp: return "'&'";
    case Tok::Ampersand3: return "'&&&'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::StrongArrow: return "'=>'";
    case Tok::StrongEquiv: return "'<=>'";
    case Tok::BoxTo: return "'[]>'";
    case Tok::DiamondTo: return "'<>->'";
    case Tok::Box: return "'[]'";
    case Tok::Diamond: return "'<>'";
    case Tok::Forall: return "'forall'";
    case Tok::Exists: return "'exists'";
    case Tok::Ident: return "identifier";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      std::size_t start = pos_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", {start, start}});
        return out;
      }
      char c = src_[pos_];
      auto push = [&](Tok k, std::size_t len) {
        out.push_back({k, std::string(src_.substr(start, len)), {start, start + len}});
        pos_ += len;
      };
      switch (c) {
        case '(': push(Tok::LParen, 1); continue;
        case ')': push(Tok::RParen, 1); continue;
        case ',': push(Tok::Comma, 1); continue;
        case '.': push(Tok::Dot, 1); continue;
        case '~': push(Tok::Tilde, 1); continue;
        case '|': push(Tok::Pipe, 1); continue;
        case '&':
          if (rest().rfind("&&&", 0) == 0) push(Tok::Ampersand3, 3);
          else push(Tok::Amp, 1);
          continue;
        case '-':
          if (rest().rfind("->", 0) == 0) { push(Tok::Arrow, 2); continue; }
          fail(start, "'->'");
        case '=':
          if (rest().rfind("=>", 0) == 0) push(Tok::StrongArrow, 2);
          else push(Tok::Eq, 1);
          continue;
        case '<':
          if (rest().rfind("<=>", 0) == 0) push(Tok::StrongEquiv, 3);
          else if (rest().rfind("<>->", 0) == 0) push(Tok::DiamondTo, 4);
          else if (rest().rfind("<>", 0) == 0) push(Tok::Diamond, 2);
          else fail(start, "'<=>', '<>->' or '<>'");
          continue;
        case '[':
          if (rest().rfind("[]>", 0) == 0) push(Tok::BoxTo, 3);
          else if (rest().rfind("[]", 0) == 0) push(Tok::Box, 2);
          else fail(start, "'[]' or '[]>'");
          continue;
        default:
          break;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t p = pos_;
        while (p < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[p])) ||
                src_[p] == '_'))
          ++p;
        // a trailing +/- signs the symbol, unless it begins '->'
        if (p < src_.size() && (src_[p] == '+' || src_[p] == '-') &&
            !(src_[p] == '-' && p + 1 < src_.size() && src_[p + 1] == '>'))
          ++p;
        std::string word(src_.substr(pos_, p - pos_));
        Tok k = Tok::Ident;
        if (word == "forall") k = Tok::Forall;
        else if (word == "exists") k = Tok::Exists;
        out.push_back({k, word, {pos_, p}});
        pos_ = p;
        continue;
      }
      fail(start, "a token");
    }
  }

 private:
  std::string_view rest() const { return src_.substr(pos_); }
  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }
  [[noreturn]] void fail(std::size_t at, const std::string& expected) {
    throw ParseError("unexpected character", {at, at + 1}, {expected});
  }
  std::string_view src_;
  std::size_t pos_ = 0;
};

enum class Lang { Fo, Cn, Md };

template <class F>
struct AtomOps;

class ParserBase {
 public:
  ParserBase(std::string_view src, Lang lang, MdDialect dialect)
      : lang_(lang), dialect_(dialect) {
    toks_ = Lexer(src).run();
  }

 protected:
  const Token& peek() const { return toks_[i_]; }
  Token take() { return toks_[i_++]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token expect(Tok k) {
    if (!at(k))
      throw ParseError("unexpected token '" + peek().text + "'", peek().span,
                       {tok_name(k)});
    return take();
  }
  [[noreturn]] void unexpected(std::vector<std::string> expected) {
    throw ParseError("unexpected token '" + peek().text + "'", peek().span,
                     std::move(expected));
  }
  VarId parse_var() {
    Token t = expect(Tok::Ident);
    if (t.text.size() >= 2 && t.text[0] == 'v' &&
        std::all_of(t.text.begin() + 1, t.text.end(),
                    [](unsigned char c) { return std::isdigit(c); }))
      return VarId{std::stoi(t.text.substr(1))};
    throw ParseError("expected a variable", t.span, {"vN"});
  }

  Lang lang_;
  MdDialect dialect_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

/// One recursive-descent parser instantiated per formula type.
template <class F>
class Parser : public ParserBase {
 public:
  using ParserBase::ParserBase;

  F parse() {
    F f = formula();
    if (!at(Tok::End)) unexpected({"end of input"});
    return f;
  }

 private:
  F formula() { return implication(); }

  F implication() {
    F lhs = disjunction();
    switch (peek().kind) {
      case Tok::Arrow:
        take();
        return F::imp(lhs, implication());
      case Tok::StrongArrow:
        take();
        return expand_derived(DerivedKind::StrongImp, lhs, implication());
      case Tok::StrongEquiv:
        take();
        return expand_derived(DerivedKind::StrongEquiv, lhs, implication());
      case Tok::BoxTo:
        take();
        return AtomOps<F>::boxto(*this, lhs, implication());
      case Tok::DiamondTo:
        take();
        return AtomOps<F>::diamondto(*this, lhs, implication());
      default:
        return lhs;
    }
  }

  F disjunction() {
    F lhs = conjunction();
    while (at(Tok::Pipe)) {
      take();
      lhs = F::or_(lhs, conjunction());
    }
    return lhs;
  }

  F conjunction() {
    F lhs = unary();
    while (at(Tok::Amp) || at(Tok::Ampersand3)) {
      bool amp3 = take().kind == Tok::Ampersand3;
      F rhs = unary();
      lhs = amp3 ? expand_derived(DerivedKind::Ampersand, lhs, rhs)
                 : F::and_(lhs, rhs);
    }
    return lhs;
  }

  F unary() {
    switch (peek().kind) {
      case Tok::Tilde:
        take();
        return F::neg(unary());
      case Tok::Box:
        take();
        return AtomOps<F>::box(*this, unary());
      case Tok::Diamond: {
        Token t = take();
        return AtomOps<F>::diamond(*this, t, unary());
      }
      case Tok::Forall:
      case Tok::Exists: {
        Token t = take();
        VarId x = parse_var();
        expect(Tok::Dot);
        return AtomOps<F>::quant(*this, t, x, formula());
      }
      case Tok::LParen: {
        take();
        F f = formula();
        expect(Tok::RParen);
        return f;
      }
      case Tok::Ident:
        return AtomOps<F>::atom(*this);
      default:
        unexpected({"a formula"});
    }
  }

  friend struct AtomOps<F>;
};

template <>
struct AtomOps<FoFormula> {
  using P = Parser<FoFormula>;
  static FoFormula atom(P& p) {
    Token t = p.expect(Tok::Ident);
    // vN = vM equality
    if (t.text.size() >= 2 && t.text[0] == 'v' &&
        std::isdigit(static_cast<unsigned char>(t.text[1]))) {
      VarId x{std::stoi(t.text.substr(1))};
      p.expect(Tok::Eq);
      VarId y = p.parse_var();
      return FoFormula::eq(x, y);
    }
    auto sym = PredSym::classify(t.text);
    if (!sym)
      throw ParseError("unknown predicate symbol '" + t.text + "'", t.span,
                       {"pN", "S", "O", "E", "R", "eps"});
    p.expect(Tok::LParen);
    std::vector<VarId> args;
    args.push_back(p.parse_var());
    while (p.at(Tok::Comma)) {
      p.take();
      args.push_back(p.parse_var());
    }
    Token close = p.expect(Tok::RParen);
    if (static_cast<int>(args.size()) != sym->arity)
      throw ParseError("arity mismatch for '" + t.text + "'",
                       {t.span.begin, close.span.end},
                       {std::to_string(sym->arity) + " argument(s)"});
    return FoFormula::pred(*sym, std::move(args));
  }
  static FoFormula quant(P& p, const Token& t, VarId x, FoFormula body) {
    (void)p;
    return t.kind == Tok::Forall ? FoFormula::forall(x, body)
                                 : FoFormula::exists(x, body);
  }
  [[noreturn]] static FoFormula box(P&, FoFormula) {
    throw ParseError("'[]' is not a first-order connective", {}, {});
  }
  [[noreturn]] static FoFormula diamond(P&, const Token& t, FoFormula) {
    throw ParseError("'<>' is not a first-order connective", t.span, {});
  }
  [[noreturn]] static FoFormula boxto(P&, FoFormula, FoFormula) {
    throw ParseError("'[]>' is not a first-order connective", {}, {});
  }
  [[noreturn]] static FoFormula diamondto(P&, FoFormula, FoFormula) {
    throw ParseError("'<>->' is not a first-order connective", {}, {});
  }
};

template <>
struct AtomOps<CnFormula> {
  using P = Parser<CnFormula>;
  static CnFormula atom(P& p) {
    Token t = p.expect(Tok::Ident);
    auto sym = PredSym::classify(t.text);
    if (!sym || sym->kind != SymKind::Prop)
      throw ParseError("expected a proposition letter", t.span, {"pN"});
    return CnFormula::prop(t.text);
  }
  [[noreturn]] static CnFormula quant(P&, const Token& t, VarId, CnFormula) {
    throw ParseError("quantifiers are not conditional connectives", t.span, {});
  }
  [[noreturn]] static CnFormula box(P&, CnFormula) {
    throw ParseError("'[]' is not a conditional connective", {}, {});
  }
  [[noreturn]] static CnFormula diamond(P&, const Token& t, CnFormula) {
    throw ParseError("'<>' is not a conditional connective", t.span, {});
  }
  static CnFormula boxto(P&, CnFormula a, CnFormula b) {
    return CnFormula::boxto(a, b);
  }
  static CnFormula diamondto(P&, CnFormula a, CnFormula b) {
    return expand_diamondto(a, b);
  }
};

template <>
struct AtomOps<MdFormula> {
  using P = Parser<MdFormula>;
  static MdFormula atom(P& p) {
    Token t = p.expect(Tok::Ident);
    auto sym = PredSym::classify(t.text);
    if (!sym || sym->kind != SymKind::Prop)
      throw ParseError("expected a proposition letter", t.span, {"pN"});
    return MdFormula::prop(t.text);
  }
  [[noreturn]] static MdFormula quant(P&, const Token& t, VarId, MdFormula) {
    throw ParseError("quantifiers are not modal connectives", t.span, {});
  }
  static MdFormula box(P&, MdFormula a) { return MdFormula::box(a); }
  static MdFormula diamond(P& p, const Token& t, MdFormula a) {
    if (p.dialect_ == MdDialect::BoxOnly)
      throw ParseError("'<>' requires the diamond dialect", t.span, {});
    return MdFormula::diamond(a);
  }
  [[noreturn]] static MdFormula boxto(P&, MdFormula, MdFormula) {
    throw ParseError("'[]>' is not a modal connective", {}, {});
  }
  [[noreturn]] static MdFormula diamondto(P&, MdFormula, MdFormula) {
    throw ParseError("'<>->' is not a modal connective", {}, {});
  }
};

}  // namespace text_detail

inline FoFormula parse_fo(std::string_view text) {
  return text_detail::Parser<FoFormula>(text, text_detail::Lang::Fo,
                                        MdDialect::BoxOnly)
      .parse();
}

inline CnFormula parse_cn(std::string_view text) {
  return text_detail::Parser<CnFormula>(text, text_detail::Lang::Cn,
                                        MdDialect::BoxOnly)
      .parse();
}

inline MdFormula parse_md(std::string_view text,
                          MdDialect dialect = MdDialect::BoxOnly) {
  return text_detail::Parser<MdFormula>(text, text_detail::Lang::Md, dialect)
      .parse();
}

// Printers emit the fully parenthesized canonical form; parse(print(f)) == f.

inline std::string print_fo(const FoFormula& f) {
  // Binders are parenthesized in child positions; they scope to the end of
  // the enclosing expression otherwise.
  auto sub = [](const FoFormula& g) {
    std::string s = print_fo(g);
    if (g.kind() == FoKind::Forall || g.kind() == FoKind::Exists)
      return "(" + s + ")";
    return s;
  };
  switch (f.kind()) {
    case FoKind::Pred: {
      std::string out = f.node().sym.name + "(";
      for (std::size_t i = 0; i < f.node().args.size(); ++i) {
        if (i) out += ",";
        out += f.node().args[i].name();
      }
      return out + ")";
    }
    case FoKind::Eq:
      return "(" + f.node().args[0].name() + " = " + f.node().args[1].name() +
             ")";
    case FoKind::StrongNeg:
      return "~" + sub(f.left());
    case FoKind::And:
      return "(" + sub(f.left()) + " & " + sub(f.right()) + ")";
    case FoKind::Or:
      return "(" + sub(f.left()) + " | " + sub(f.right()) + ")";
    case FoKind::Imp:
      return "(" + sub(f.left()) + " -> " + sub(f.right()) + ")";
    case FoKind::Forall:
      return "forall " + f.node().bound.name() + " . " + sub(f.left());
    case FoKind::Exists:
      return "exists " + f.node().bound.name() + " . " + sub(f.left());
  }
  throw Error("unreachable");
}

inline std::string print_cn(const CnFormula& f) {
  switch (f.kind()) {
    case CnKind::Prop:
      return f.node().prop;
    case CnKind::StrongNeg:
      return "~" + print_cn(f.left());
    case CnKind::And:
      return "(" + print_cn(f.left()) + " & " + print_cn(f.right()) + ")";
    case CnKind::Or:
      return "(" + print_cn(f.left()) + " | " + print_cn(f.right()) + ")";
    case CnKind::Imp:
      return "(" + print_cn(f.left()) + " -> " + print_cn(f.right()) + ")";
    case CnKind::BoxTo:
      return "(" + print_cn(f.left()) + " []> " + print_cn(f.right()) + ")";
  }
  throw Error("unreachable");
}

inline std::string print_md(const MdFormula& f) {
  switch (f.kind()) {
    case MdKind::Prop:
      return f.node().prop;
    case MdKind::StrongNeg:
      return "~" + print_md(f.left());
    case MdKind::Box:
      return "[]" + print_md(f.left());
    case MdKind::Diamond:
      return "<>" + print_md(f.left());
    case MdKind::And:
      return "(" + print_md(f.left()) + " & " + print_md(f.right()) + ")";
    case MdKind::Or:
      return "(" + print_md(f.left()) + " | " + print_md(f.right()) + ")";
    case MdKind::Imp:
      return "(" + print_md(f.left()) + " -> " + print_md(f.right()) + ")";
  }
  throw Error("unreachable");
}

}  // namespace lmw
