#include "causeplan/model_dsl.hpp"

#include <optional>
#include <vector>

namespace causeplan {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

enum class Tok { word, quoted, colon, comma, end };

struct Token {
  Tok type;
  std::string text;
  std::size_t column;
};

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool is_word_char(char c) { return !is_blank(c) && c != '"' && c != '#' && c != ':' && c != ','; }

bool keyword_is(const Token& t, std::string_view kw) {
  return t.type == Tok::word && normalize_label(t.text) == kw;
}

std::string describe(const Token& t) {
  switch (t.type) {
    case Tok::word: return "'" + t.text + "'";
    case Tok::quoted: return "\"" + t.text + "\"";
    case Tok::colon: return "':'";
    case Tok::comma: return "','";
    case Tok::end: return "end of line";
  }
  return "?";
}

std::vector<Token> lex_line(std::string_view line, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (is_blank(c)) {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == ':') {
      out.push_back({Tok::colon, ":", i + 1});
      ++i;
    } else if (c == ',') {
      out.push_back({Tok::comma, ",", i + 1});
      ++i;
    } else if (c == '"') {
      std::size_t start = i;
      std::string text;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char d = line[i];
        if (d == '\\' && i + 1 < line.size() && (line[i + 1] == '"' || line[i + 1] == '\\')) {
          text += line[i + 1];
          i += 2;
        } else if (d == '"') {
          closed = true;
          ++i;
          break;
        } else {
          text += d;
          ++i;
        }
      }
      if (!closed) throw ParseError(lineno, start + 1, "unterminated quoted label");
      out.push_back({Tok::quoted, std::move(text), start + 1});
    } else {
      std::size_t start = i;
      while (i < line.size() && is_word_char(line[i])) ++i;
      out.push_back({Tok::word, std::string(line.substr(start, i - start)), start + 1});
    }
  }
  out.push_back({Tok::end, "", line.size() + 1});
  return out;
}

class LineParser {
public:
  LineParser(std::vector<Token> toks, std::size_t lineno) : toks_(std::move(toks)), line_(lineno) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(line_, t.column, msg); }

  [[noreturn]] void expected(const std::string& what) const {
    fail(peek(), "expected " + what + ", found " + describe(peek()));
  }

  bool at_label() const {
    const auto& t = peek();
    if (t.type == Tok::quoted) return true;
    return t.type == Tok::word && !keyword_is(t, "and") && !keyword_is(t, "causes");
  }

  Label label(const std::string& what) {
    if (!at_label()) expected(what);
    const Token& t = next();
    if (normalize_label(t.text).empty()) fail(t, "label must not be blank");
    return Label(t.text);
  }

  void expect_end() {
    if (peek().type != Tok::end) expected("end of line");
  }

  std::size_t line() const { return line_; }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  for (char c : s)
    if (!is_word_char(c) || c == '\\') return true;
  return s == "and" || s == "causes" || s == "goal" || s == "intermediate";
}

std::string quote(const Label& l) {
  const auto& s = l.str();
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CausalModel parse_model(std::string_view source) {
  std::optional<Label> goal;
  std::vector<CausalRule> rules;
  std::set<Label> declared;

  std::size_t lineno = 0;
  while (!source.empty() || lineno == 0) {
    ++lineno;
    auto nl = source.find('\n');
    std::string_view line = source.substr(0, nl);
    source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);

    LineParser p(lex_line(line, lineno), lineno);
    if (p.peek().type == Tok::end) continue;

    const Token first = p.peek();
    if ((keyword_is(first, "goal") || keyword_is(first, "intermediate")) && [&] {
          LineParser look = p;
          look.next();
          return look.peek().type == Tok::colon;
        }()) {
      p.next();
      p.next();
      if (keyword_is(first, "goal")) {
        if (goal) p.fail(first, "duplicate goal declaration");
        goal = p.label("goal label");
        p.expect_end();
      } else {
        declared.insert(p.label("intermediate label"));
        while (p.peek().type == Tok::comma) {
          p.next();
          declared.insert(p.label("intermediate label"));
        }
        p.expect_end();
      }
      continue;
    }

    if (keyword_is(first, "causes")) p.fail(first, "empty rule body");
    std::vector<Label> body;
    body.push_back(p.label("label"));
    while (keyword_is(p.peek(), "and")) {
      p.next();
      body.push_back(p.label("label after AND"));
    }
    if (!keyword_is(p.peek(), "causes")) p.expected("AND or CAUSES");
    p.next();
    const Token effect_tok = p.peek();
    Label effect = p.label("effect label after CAUSES");
    p.expect_end();
    for (const auto& a : body)
      if (a == effect) p.fail(effect_tok, "effect appears in own antecedents: " + effect.str());
    rules.emplace_back(std::move(body), std::move(effect));
  }

  if (!goal) throw ParseError(1, 1, "missing goal declaration (goal: <label>)");
  return CausalModel(std::move(*goal), std::move(rules), std::move(declared));
}

std::string serialize_model(const CausalModel& model) {
  std::string out = "goal: " + quote(model.goal()) + "\n";
  if (!model.declared_intermediates().empty()) {
    out += "intermediate: ";
    bool first = true;
    for (const auto& l : model.declared_intermediates()) {
      if (!first) out += ", ";
      out += quote(l);
      first = false;
    }
    out += "\n";
  }
  for (const auto& r : model.rules()) {
    for (std::size_t i = 0; i < r.antecedents.size(); ++i) {
      if (i) out += " AND ";
      out += quote(r.antecedents[i]);
    }
    out += " CAUSES " + quote(r.effect) + "\n";
  }
  return out;
}

}  // namespace causeplan
