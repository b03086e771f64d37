#include "rs/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <utility>

namespace rs {

namespace {

std::string format_source_error(std::size_t line, std::size_t column, const std::string& message,
                                const std::vector<std::string>& expected) {
  std::ostringstream out;
  out << "line " << line << ", column " << column << ": " << message;
  if (!expected.empty()) {
    out << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) out << (i + 1 == expected.size() ? " or " : ", ");
      out << expected[i];
    }
    out << ")";
  }
  return out.str();
}

enum class TokenKind {
  name,
  integer,
  langle,
  rangle,
  lbracket,
  rbracket,
  pipe,
  dot,
  star,
  caret,
  end,
};

const char* token_kind_text(TokenKind kind) {
  switch (kind) {
    case TokenKind::name: return "name";
    case TokenKind::integer: return "integer";
    case TokenKind::langle: return "'<'";
    case TokenKind::rangle: return "'>'";
    case TokenKind::lbracket: return "'['";
    case TokenKind::rbracket: return "']'";
    case TokenKind::pipe: return "'|'";
    case TokenKind::dot: return "'.'";
    case TokenKind::star: return "'*'";
    case TokenKind::caret: return "'^'";
    case TokenKind::end: return "end of input";
  }
  return "?";
}

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

// Hand-rolled lexer; line/column offsets let callers lex a slice of a larger
// file and still report positions into the whole file.
class Lexer {
 public:
  Lexer(const std::string& text, std::size_t line = 1, std::size_t column = 1)
      : text_(text), line_(line), column_(column) {
    advance();
  }

  const Token& peek() const { return current_; }

  Token next() {
    Token token = current_;
    advance();
    return token;
  }

  Token expect(TokenKind kind) {
    if (current_.kind != kind)
      throw SourceError(current_.line, current_.column, "unexpected " + describe(current_),
                        {token_kind_text(kind)});
    return next();
  }

  [[noreturn]] void fail(const std::vector<std::string>& expected) const {
    throw SourceError(current_.line, current_.column, "unexpected " + describe(current_), expected);
  }

  static std::string describe(const Token& token) {
    if (token.kind == TokenKind::end) return "end of input";
    return std::string(token_kind_text(token.kind)) +
           (token.kind == TokenKind::name || token.kind == TokenKind::integer
                ? " \"" + token.text + "\""
                : "");
  }

 private:
  void advance() {
    skip_blank();
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = TokenKind::end;
      current_.text.clear();
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '<': single(TokenKind::langle, c); return;
      case '>': single(TokenKind::rangle, c); return;
      case '[': single(TokenKind::lbracket, c); return;
      case ']': single(TokenKind::rbracket, c); return;
      case '|': single(TokenKind::pipe, c); return;
      case '.': single(TokenKind::dot, c); return;
      case '*': single(TokenKind::star, c); return;
      case '^': single(TokenKind::caret, c); return;
      default: break;
    }
    if (c >= '0' && c <= '9') {
      current_.kind = TokenKind::integer;
      current_.text.clear();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) take();
      return;
    }
    if (c >= 'a' && c <= 'z') {
      current_.kind = TokenKind::name;
      current_.text.clear();
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        take();
      return;
    }
    throw SourceError(line_, column_, std::string("stray character '") + c + "'");
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else {
        break;
      }
    }
  }

  void single(TokenKind kind, char c) {
    current_.kind = kind;
    current_.text = std::string(1, c);
    bump();
  }

  void take() {
    current_.text += text_[pos_];
    bump();
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_;
  Token current_;
};

Name parse_name(Lexer& lex) {
  Token token = lex.expect(TokenKind::name);
  return Name(token.text);
}

// Gate body after '['. The '^' marker may sit before any name, directly
// around '>', or at the very end; absent means marker 0.
Gate parse_gate_body(Lexer& lex) {
  std::optional<std::size_t> marker;
  auto set_marker = [&](std::size_t position) {
    if (marker) throw DuplicateMarker();
    marker = position;
  };

  auto parse_sequence = [&](std::size_t offset) {
    std::vector<Name> names;
    if (lex.peek().kind == TokenKind::caret) {
      lex.next();
      set_marker(offset);
      if (lex.peek().kind == TokenKind::name) names.push_back(parse_name(lex));
      // a caret with no following name marks the end of the section
    } else if (lex.peek().kind == TokenKind::name) {
      names.push_back(parse_name(lex));
    }
    if (!names.empty()) {
      while (lex.peek().kind == TokenKind::dot) {
        lex.next();
        if (lex.peek().kind == TokenKind::caret) {
          lex.next();
          set_marker(offset + names.size());
        }
        names.push_back(parse_name(lex));
      }
    }
    return names;
  };

  std::vector<Name> inputs = parse_sequence(0);
  lex.expect(TokenKind::rangle);
  std::vector<Name> outputs = parse_sequence(inputs.size());
  if (lex.peek().kind == TokenKind::caret) {
    lex.next();
    set_marker(inputs.size() + outputs.size());
  }
  lex.expect(TokenKind::rbracket);
  return Gate(std::move(inputs), std::move(outputs), marker.value_or(0));
}

// term := (INT '*')? atom, added to the structure under construction.
void parse_term(Lexer& lex, Structure& out) {
  std::uint64_t count = 1;
  if (lex.peek().kind == TokenKind::integer) {
    Token number = lex.next();
    count = std::stoull(number.text);
    lex.expect(TokenKind::star);
    if (count < 1) throw BadMultiplicity();
  }
  if (lex.peek().kind == TokenKind::langle) {
    lex.next();
    Name name = parse_name(lex);
    lex.expect(TokenKind::rangle);
    out.add_signal(name, count);
  } else if (lex.peek().kind == TokenKind::lbracket) {
    lex.next();
    out.add_gate(parse_gate_body(lex), count);
  } else {
    lex.fail({token_kind_text(TokenKind::langle), token_kind_text(TokenKind::lbracket),
              token_kind_text(TokenKind::integer)});
  }
}

Structure parse_structure_at(const std::string& text, std::size_t line, std::size_t column) {
  Lexer lex(text, line, column);
  Structure result;
  if (lex.peek().kind == TokenKind::end) return result;
  parse_term(lex, result);
  while (lex.peek().kind == TokenKind::pipe) {
    lex.next();
    parse_term(lex, result);
  }
  if (lex.peek().kind != TokenKind::end)
    lex.fail({token_kind_text(TokenKind::pipe), token_kind_text(TokenKind::end)});
  return result;
}

Gate parse_single_gate_at(const std::string& text, std::size_t line, std::size_t column) {
  Lexer lex(text, line, column);
  lex.expect(TokenKind::lbracket);
  Gate gate = parse_gate_body(lex);
  lex.expect(TokenKind::end);
  return gate;
}

}  // namespace

SourceError::SourceError(std::size_t line, std::size_t column, const std::string& message,
                         std::vector<std::string> expected)
    : Error(format_source_error(line, column, message, expected)),
      line(line),
      column(column),
      message(message),
      expected(std::move(expected)) {}

Structure parse_structure(const std::string& text) { return parse_structure_at(text, 1, 1); }

std::string print_structure(const Structure& s) {
  std::string out;
  bool first = true;
  auto append = [&](std::uint64_t count, const std::string& atom) {
    if (!first) out += " | ";
    first = false;
    if (count > 1) out += std::to_string(count) + "*";
    out += atom;
  };
  for (const auto& [name, count] : s.signals()) append(count, "<" + name.text() + ">");
  for (const auto& [gate, count] : s.gates()) append(count, gate.text());
  return out;
}

Trace parse_trace(const std::string& text) {
  Trace trace;
  bool saw_init = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line =
        eol == std::string::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    ++line_no;
    std::size_t next = eol == std::string::npos ? text.size() + 1 : eol + 1;

    if (std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::size_t content = line.find_first_not_of(" \t\r");
    if (content == std::string::npos) {
      pos = next;
      continue;
    }

    if (!saw_init) {
      if (line.compare(content, 5, "init:") != 0)
        throw SourceError(line_no, content + 1, "trace must start with an init line",
                          {"'init:'"});
      trace.init = parse_structure_at(line.substr(content + 5), line_no, content + 6);
      saw_init = true;
    } else {
      std::size_t word_end = line.find_first_of(" \t", content);
      std::string word = line.substr(content, word_end == std::string::npos
                                                  ? std::string::npos
                                                  : word_end - content);
      Direction dir;
      if (word == "fwd") {
        dir = Direction::forward;
      } else if (word == "bwd") {
        dir = Direction::backward;
      } else {
        throw SourceError(line_no, content + 1, "unknown step direction \"" + word + "\"",
                          {"'fwd'", "'bwd'"});
      }
      std::size_t rest = word_end == std::string::npos ? line.size() : word_end;
      Gate gate = parse_single_gate_at(line.substr(rest), line_no, rest + 1);
      try {
        trace.steps.emplace_back(std::move(gate), dir);
      } catch (const InvalidLabel& e) {
        throw SourceError(line_no, content + 1, e.what());
      }
    }
    pos = next;
  }
  if (!saw_init) throw SourceError(line_no == 0 ? 1 : line_no, 1, "empty trace file", {"'init:'"});
  trace.replay();  // NotEnabled(k) when some step cannot fire
  return trace;
}

std::string print_trace(const Trace& trace) {
  std::string out = "init: " + print_structure(trace.init) + "\n";
  for (const StepLabel& step : trace.steps) out += step.text() + "\n";
  return out;
}

}  // namespace rs
