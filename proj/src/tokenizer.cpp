#include <cctype>

#include "texmark/source.hpp"

namespace texmark {

namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  explicit Lexer(std::string_view in) : in_(in) {}

  std::vector<Token> run() {
    check_ascii();
    std::vector<Token> out = sequence(nullptr);
    return out;
  }

 private:
  void check_ascii() const {
    int line = 1;
    int col = 1;
    for (char ch : in_) {
      if (static_cast<unsigned char>(ch) >= 0x80) {
        throw Error(ErrorCode::NonAscii, "documents must be ASCII", SourcePos{line, col});
      }
      if (ch == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }

  bool eof() const { return i_ >= in_.size(); }
  char peek(std::size_t ahead = 0) const { return i_ + ahead < in_.size() ? in_[i_ + ahead] : '\0'; }
  SourcePos pos() const { return {line_, col_}; }

  char get() {
    char c = in_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  std::vector<Token> sequence(const SourcePos* open) {
    std::vector<Token> out;
    while (!eof()) {
      char c = peek();
      SourcePos p = pos();
      if (c == '%') {
        while (!eof() && peek() != '\n') get();
        if (!eof()) get();
        while (!eof() && (peek() == ' ' || peek() == '\t')) get();
        continue;
      }
      if (c == '}') {
        if (!open) throw Error(ErrorCode::UnbalancedGroup, "unmatched '}'", p);
        get();
        return out;
      }
      if (c == '{') {
        get();
        Token t{Token::Kind::Group, "", {}, false, p};
        t.children = sequence(&p);
        out.push_back(std::move(t));
        continue;
      }
      if (c == '$') {
        out.push_back(math(p));
        continue;
      }
      if (c == '\\' && i_ + 1 < in_.size()) {
        get();
        std::string name;
        if (is_letter(peek())) {
          while (!eof() && is_letter(peek())) name += get();
        } else {
          name += get();
        }
        out.push_back(Token{Token::Kind::Command, name, {}, false, p});
        continue;
      }
      get();
      out.push_back(Token{Token::Kind::Char, std::string(1, c), {}, false, p});
    }
    if (open) throw Error(ErrorCode::UnbalancedGroup, "'{' is never closed", *open);
    return out;
  }

  Token math(SourcePos p) {
    get();
    bool display = peek() == '$';
    if (display) get();
    std::string body;
    while (true) {
      if (eof()) throw Error(ErrorCode::UnbalancedMath, "math span is never closed", p);
      char c = peek();
      if (c == '\\' && i_ + 1 < in_.size()) {
        body += get();
        body += get();
        continue;
      }
      if (c == '$') {
        get();
        if (display) {
          if (peek() != '$') throw Error(ErrorCode::UnbalancedMath, "display math closed by a single '$'", p);
          get();
        }
        break;
      }
      body += get();
    }
    return Token{Token::Kind::MathSpan, body, {}, display, p};
  }

  std::string_view in_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

void append_source(std::string& out, const std::vector<Token>& tokens) {
  for (const auto& t : tokens) {
    switch (t.kind) {
      case Token::Kind::Command: out += '\\' + t.text; break;
      case Token::Kind::Char: out += t.text; break;
      case Token::Kind::MathSpan: {
        const char* d = t.display ? "$$" : "$";
        out += d + t.text + d;
        break;
      }
      case Token::Kind::Group:
        out += '{';
        append_source(out, t.children);
        out += '}';
        break;
    }
  }
}

}  // namespace

bool Token::is_space() const {
  return kind == Kind::Char && text.size() == 1 && std::isspace(static_cast<unsigned char>(text[0]));
}

bool Token::is_control_word() const { return kind == Kind::Command && !text.empty() && is_letter(text[0]); }

std::vector<Token> tokenize(std::string_view input) { return Lexer(input).run(); }

std::string to_source(const std::vector<Token>& tokens) {
  std::string out;
  append_source(out, tokens);
  return out;
}

}  // namespace texmark
