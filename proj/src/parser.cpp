#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "embedsim/errors.hpp"
#include "embedsim/logic.hpp"

namespace embedsim {
namespace {

enum class TokenKind { kName, kTrue, kFalse, kNot, kAnd, kOr, kImplies, kIff, kLParen, kRParen, kEnd };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t column;  // 1-based, within the source line
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

std::vector<Token> tokenize(std::string_view text, std::size_t line, std::size_t column_offset) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const std::size_t column = column_offset + i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_name_char(c)) {
      std::size_t j = i;
      while (j < text.size() && is_name_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      TokenKind kind = TokenKind::kName;
      if (word == "TRUE") kind = TokenKind::kTrue;
      if (word == "FALSE") kind = TokenKind::kFalse;
      tokens.push_back({kind, std::move(word), column});
      i = j;
    } else if (c == '!') {
      tokens.push_back({TokenKind::kNot, "!", column});
      ++i;
    } else if (c == '&') {
      tokens.push_back({TokenKind::kAnd, "&", column});
      ++i;
    } else if (c == '|') {
      tokens.push_back({TokenKind::kOr, "|", column});
      ++i;
    } else if (c == '(') {
      tokens.push_back({TokenKind::kLParen, "(", column});
      ++i;
    } else if (c == ')') {
      tokens.push_back({TokenKind::kRParen, ")", column});
      ++i;
    } else if (text.substr(i, 2) == "->") {
      tokens.push_back({TokenKind::kImplies, "->", column});
      i += 2;
    } else if (text.substr(i, 3) == "<->") {
      tokens.push_back({TokenKind::kIff, "<->", column});
      i += 3;
    } else {
      throw ParseError(line, column, std::string("unexpected character '") + c + "'");
    }
  }
  tokens.push_back({TokenKind::kEnd, "", column_offset + text.size() + 1});
  return tokens;
}

// Recursive descent, loosest to tightest: <->, -> (right-assoc), |, &, !.
class FormulaParser {
 public:
  FormulaParser(std::vector<Token> tokens, const Signature& signature, std::size_t line)
      : tokens_(std::move(tokens)), signature_(signature), line_(line) {}

  Formula parse() {
    if (peek().kind == TokenKind::kEnd) fail(peek(), "expected a formula");
    Formula f = parse_iff();
    if (peek().kind != TokenKind::kEnd) fail(peek(), "unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool accept(TokenKind kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(line_, at.column, message);
  }

  Formula parse_iff() {
    Formula f = parse_implies();
    while (accept(TokenKind::kIff)) f = Formula::equivalence(f, parse_implies());
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (accept(TokenKind::kImplies)) return Formula::implication(f, parse_implies());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(TokenKind::kOr)) f = Formula::disjunction(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept(TokenKind::kAnd)) f = Formula::conjunction(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    if (accept(TokenKind::kNot)) return Formula::negation(parse_unary());
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& tok = advance();
    switch (tok.kind) {
      case TokenKind::kTrue: return Formula::top();
      case TokenKind::kFalse: return Formula::bottom();
      case TokenKind::kName: {
        const auto index = signature_.find(tok.text);
        if (!index) fail(tok, "undeclared atom '" + tok.text + "'");
        return Formula::atom(*index);
      }
      case TokenKind::kLParen: {
        Formula f = parse_iff();
        if (!accept(TokenKind::kRParen)) fail(peek(), "expected ')'");
        return f;
      }
      case TokenKind::kEnd: fail(tok, "unexpected end of formula");
      default: fail(tok, "unexpected '" + tok.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Signature& signature_;
  std::size_t line_;
};

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& signature) {
  return FormulaParser(tokenize(text, 1, 0), signature, 1).parse();
}

ParsedKB parse_kb(std::string_view text) {
  std::optional<Signature> signature;
  std::size_t header_line = 0;
  std::vector<Formula> formulas;
  std::vector<Formula> strata;
  bool has_plain = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim_right(line);
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) continue;

    std::size_t k = i;
    while (k < line.size() && std::isalpha(static_cast<unsigned char>(line[k]))) ++k;
    const std::string keyword(line.substr(i, k - i));
    if (k >= line.size() || line[k] != ':' || keyword.empty()) {
      throw ParseError(line_no, i + 1, "expected 'atoms:', 'rule:', 'formula:' or 'stratum:'");
    }
    const std::size_t body_offset = k + 1;
    const std::string_view body = line.substr(body_offset);

    if (keyword == "atoms") {
      if (signature) {
        throw ParseError(line_no, i + 1,
                         "duplicate 'atoms:' header (first on line " +
                             std::to_string(header_line) + ")");
      }
      std::vector<std::string> names;
      std::vector<std::size_t> columns;
      for (const Token& tok : tokenize(body, line_no, body_offset)) {
        if (tok.kind == TokenKind::kEnd) break;
        if (tok.kind != TokenKind::kName) {
          throw ParseError(line_no, tok.column, "invalid atom name '" + tok.text + "'");
        }
        for (std::size_t j = 0; j < names.size(); ++j) {
          if (names[j] == tok.text) {
            throw ParseError(line_no, tok.column, "duplicate atom '" + tok.text + "'");
          }
        }
        names.push_back(tok.text);
        columns.push_back(tok.column);
      }
      if (names.size() > kMaxSignatureSize) {
        throw ParseError(line_no, columns[kMaxSignatureSize],
                         "more than " + std::to_string(kMaxSignatureSize) + " atoms");
      }
      signature = Signature(std::move(names));
      header_line = line_no;
      continue;
    }

    if (keyword != "rule" && keyword != "formula" && keyword != "stratum") {
      throw ParseError(line_no, i + 1, "unknown keyword '" + keyword + "'");
    }
    if (!signature) {
      throw ParseError(line_no, i + 1, "'" + keyword + ":' before the 'atoms:' header");
    }
    const bool is_stratum = keyword == "stratum";
    if ((is_stratum && has_plain) || (!is_stratum && !strata.empty())) {
      throw ParseError(line_no, i + 1,
                       "cannot mix 'stratum:' lines with 'rule:'/'formula:' lines");
    }
    Formula f = FormulaParser(tokenize(body, line_no, body_offset), *signature, line_no).parse();
    if (is_stratum) {
      strata.push_back(std::move(f));
    } else {
      has_plain = true;
      formulas.push_back(std::move(f));
    }
  }

  if (!signature) throw ParseError(line_no == 0 ? 1 : line_no, 1, "missing 'atoms:' header");
  if (!strata.empty()) return StratifiedKB{*signature, std::move(strata)};
  return KnowledgeBase{*signature, std::move(formulas)};
}

}  // namespace embedsim
