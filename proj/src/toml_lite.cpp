#include "pswl/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <string>

#include "pswl/errors.hpp"

namespace pswl {

namespace {

using nlohmann::json;

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  json run() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = &open_table(root);
      } else {
        const std::string key = parse_key();
        skip_ws();
        expect('=');
        skip_ws();
        json v = parse_value();
        if (table->contains(key)) fail("duplicate key '" + key + "'");
        (*table)[key] = std::move(v);
      }
      end_of_line();
    }
    return root;
  }

 private:
  bool eof() const { return i_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[i_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config line " + std::to_string(line_) + ": " + msg);
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++i_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++i_;
  }
  void skip_blank_lines() {
    while (true) {
      skip_ws();
      skip_comment();
      if (peek() == '\r') ++i_;
      if (peek() == '\n') {
        ++i_;
        ++line_;
        continue;
      }
      return;
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_any() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i_;
      } else if (c == '\n') {
        ++i_;
        ++line_;
      } else if (c == '#') {
        skip_comment();
      } else {
        return;
      }
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') ++i_;
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    ++i_;
    ++line_;
  }

  static bool bare(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

  std::string parse_key() {
    if (peek() == '"') return parse_basic_string();
    const size_t b = i_;
    while (!eof() && bare(peek())) ++i_;
    if (i_ == b) fail("expected a key");
    return std::string(s_.substr(b, i_ - b));
  }

  json& open_table(json& root) {
    expect('[');
    if (peek() == '[') fail("arrays of tables are not supported");
    json* t = &root;
    std::string path;
    while (true) {
      skip_ws();
      const std::string k = parse_key();
      path += (path.empty() ? "" : ".") + k;
      skip_ws();
      if (!t->contains(k)) (*t)[k] = json::object();
      t = &(*t)[k];
      if (!t->is_object()) fail("'" + k + "' is not a table");
      if (peek() == '.') {
        ++i_;
        continue;
      }
      expect(']');
      if (!opened_.insert(path).second) fail("duplicate table [" + path + "]");
      return *t;
    }
  }

  std::string parse_basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[i_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("unterminated escape");
      c = s_[i_++];
      switch (c) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unsupported escape \\") + c);
      }
    }
  }

  std::string parse_literal_string() {
    expect('\'');
    const size_t b = i_;
    while (!eof() && peek() != '\'' && peek() != '\n') ++i_;
    if (peek() != '\'') fail("unterminated string");
    std::string out(s_.substr(b, i_ - b));
    ++i_;
    return out;
  }

  json parse_array() {
    expect('[');
    json arr = json::array();
    while (true) {
      skip_any();
      if (peek() == ']') {
        ++i_;
        return arr;
      }
      arr.push_back(parse_value());
      skip_any();
      if (peek() == ',') {
        ++i_;
        continue;
      }
      if (peek() != ']') fail("expected ',' or ']' in array");
    }
  }

  json parse_scalar() {
    const size_t b = i_;
    while (!eof() && (bare(peek()) || peek() == '.' || peek() == '+')) ++i_;
    std::string tok(s_.substr(b, i_ - b));
    if (tok.empty()) fail("expected a value");
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string num;
    for (char c : tok)
      if (c != '_') num += c;
    const bool is_float = num.find_first_of(".eE") != std::string::npos &&
                          num.rfind("0x", 0) != 0;
    const char* first = num.data();
    const char* last = num.data() + num.size();
    if (*first == '+') ++first;
    if (is_float) {
      double d = 0;
      auto r = std::from_chars(first, last, d);
      if (r.ec != std::errc() || r.ptr != last) fail("bad number '" + tok + "'");
      return d;
    }
    int64_t v = 0;
    auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last) fail("bad value '" + tok + "'");
    return v;
  }

  json parse_value() {
    switch (peek()) {
      case '"': return parse_basic_string();
      case '\'': return parse_literal_string();
      case '[': return parse_array();
      default: return parse_scalar();
    }
  }

  std::string_view s_;
  std::set<std::string> opened_;
  size_t i_ = 0;
  size_t line_ = 1;
};

}  // namespace

nlohmann::json parse_toml(std::string_view text) { return Parser(text).run(); }

}  // namespace pswl
