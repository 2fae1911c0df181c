#include "mstab/problem_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "mstab/error.hpp"

namespace mstab {

namespace {

struct Location {
  std::size_t line;
  std::size_t column;
};

Location locate(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  Location loc{1, 1};
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return loc;
}

// ---------------------------------------------------------------------------
// JSON: a SAX pass builds a small tree whose nodes remember the byte offset at
// which the parser emitted them, so that semantic errors can point into the
// file.

struct Node {
  enum Kind { Null, Bool, Number, String, Array, Object };
  Node() = default;
  explicit Node(Kind k) : kind(k) {}

  Kind kind = Null;
  double number = 0.0;
  std::string text;
  std::vector<Node> items;
  std::vector<std::pair<std::string, Node>> members;
  std::size_t offset = 0;
  std::size_t key_offset = 0;  // start of the member key, objects only
};

class CountingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator() = default;
  CountingIterator(const char* p, const char* base, std::size_t* consumed) : p_(p), base_(base), consumed_(consumed) {}
  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    ++p_;
    if (consumed_) *consumed_ = std::size_t(p_ - base_);
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator t = *this;
    ++*this;
    return t;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_ = nullptr;
  const char* base_ = nullptr;
  std::size_t* consumed_ = nullptr;
};

class TreeBuilder : public nlohmann::json_sax<nlohmann::json> {
 public:
  TreeBuilder(std::string_view text, const std::size_t* consumed) : text_(text), consumed_(consumed) {}

  bool null() override { return leaf(Node{Node::Null}); }
  bool boolean(bool) override { return leaf(Node{Node::Bool}); }
  bool number_integer(number_integer_t x) override { return number(double(x)); }
  bool number_unsigned(number_unsigned_t x) override { return number(double(x)); }
  bool number_float(number_float_t x, const string_t&) override { return number(x); }
  bool string(string_t& s) override {
    Node n{Node::String};
    n.text = s;
    n.offset = opening_quote(here());
    attach(std::move(n));
    return true;
  }
  bool binary(binary_t&) override { return leaf(Node{Node::Null}); }
  bool start_object(std::size_t) override { return open(Node::Object); }
  bool key(string_t& k) override {
    const std::size_t at = opening_quote(closing_quote());
    for (const auto& m : stack_.back().members)
      if (m.first == k) fail("duplicate key \"" + k + "\"", at);
    pending_.back() = k;
    pending_offset_.back() = at;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(Node::Array); }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
    std::string msg = ex.what();
    const auto colon = msg.find(": ");
    if (colon != std::string::npos && msg.rfind("[json.exception", 0) == 0) msg = msg.substr(colon + 2);
    fail("invalid JSON: " + msg, position > 0 ? position - 1 : 0);
  }

  Node result() { return std::move(root_); }

  [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
    const Location loc = locate(text_, offset);
    throw ParseError(what, loc.line, loc.column);
  }

 private:
  std::size_t here() const { return *consumed_ > 0 ? *consumed_ - 1 : 0; }

  // The key callback fires after the lexer has consumed the ':' that follows.
  std::size_t closing_quote() const {
    std::size_t i = std::min(here(), text_.size() - 1);
    while (i > 0 && text_[i] != '"') --i;
    return i;
  }

  std::size_t opening_quote(std::size_t close) const {
    std::size_t i = close;
    while (i > 0) {
      --i;
      if (text_[i] == '"' && (i == 0 || text_[i - 1] != '\\')) return i;
    }
    return close;
  }

  bool number(double x) {
    Node n{Node::Number};
    n.number = x;
    return leaf(std::move(n));
  }

  bool leaf(Node n) {
    n.offset = here();
    attach(std::move(n));
    return true;
  }

  bool open(Node::Kind kind) {
    Node n{kind};
    n.offset = here();
    stack_.push_back(std::move(n));
    pending_.emplace_back();
    pending_offset_.push_back(0);
    return true;
  }

  bool close() {
    Node n = std::move(stack_.back());
    stack_.pop_back();
    pending_.pop_back();
    pending_offset_.pop_back();
    attach(std::move(n));
    return true;
  }

  void attach(Node n) {
    if (stack_.empty()) {
      root_ = std::move(n);
      return;
    }
    Node& parent = stack_.back();
    if (parent.kind == Node::Array)
      parent.items.push_back(std::move(n));
    else {
      n.key_offset = pending_offset_.back();
      parent.members.emplace_back(pending_.back(), std::move(n));
    }
  }

  std::string_view text_;
  const std::size_t* consumed_;
  std::vector<Node> stack_;
  std::vector<std::string> pending_;
  std::vector<std::size_t> pending_offset_;
  Node root_;
};

Vector json_vector(const Node& n, const char* what, const TreeBuilder& tb) {
  if (n.kind != Node::Array) tb.fail(std::string(what) + " must be an array of numbers", n.offset);
  Vector out;
  out.reserve(n.items.size());
  for (const Node& x : n.items) {
    if (x.kind != Node::Number) tb.fail(std::string(what) + ": expected a number", x.offset);
    out.push_back(x.number);
  }
  return out;
}

Matrix json_matrix(const Node& n, const char* what, const TreeBuilder& tb) {
  if (n.kind != Node::Array || n.items.empty())
    tb.fail(std::string(what) + " must be a nonempty array of rows", n.offset);
  const std::size_t rows = n.items.size();
  Matrix m(rows, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const Node& row = n.items[i];
    const Vector r = json_vector(row, what, tb);
    if (r.size() != rows)
      tb.fail(std::string(what) + ": row " + std::to_string(i + 1) + " has " + std::to_string(r.size()) +
                  " entries, expected " + std::to_string(rows),
              row.offset);
    for (std::size_t j = 0; j < rows; ++j) m(i, j) = r[j];
  }
  return m;
}

ProblemFile parse_json(std::string_view text) {
  std::size_t consumed = 0;
  TreeBuilder tb(text, &consumed);
  CountingIterator first(text.data(), text.data(), &consumed), last(text.data() + text.size(), text.data(), nullptr);
  nlohmann::json::sax_parse(first, last, &tb);
  const Node root = tb.result();
  if (root.kind != Node::Object) tb.fail("top level must be an object", root.offset);

  ProblemFile p;
  bool have_h = false;
  std::vector<std::pair<std::size_t, std::size_t>> sizes;  // (size, offset) to check against n
  for (const auto& [key, val] : root.members) {
    if (key == "H") {
      p.h = json_matrix(val, "H", tb);
      have_h = true;
    } else if (key == "v" || key == "w") {
      Vector x = json_vector(val, key.c_str(), tb);
      sizes.emplace_back(x.size(), val.offset);
      (key == "v" ? p.v : p.w) = std::move(x);
    } else if (key == "C" || key == "K") {
      Matrix m = json_matrix(val, key.c_str(), tb);
      sizes.emplace_back(m.rows(), val.offset);
      (key == "C" ? p.c : p.k) = std::move(m);
    } else if (key == "name" || key == "description") {
      if (val.kind != Node::String) tb.fail("\"" + key + "\" must be a string", val.offset);
      (key == "name" ? p.name : p.description) = val.text;
    } else {
      tb.fail("unknown key \"" + key + "\"", val.key_offset);
    }
  }
  if (!have_h) tb.fail("missing key \"H\"", root.offset);
  for (const auto& [size, off] : sizes)
    if (size != p.h.rows())
      tb.fail("dimension mismatch: expected " + std::to_string(p.h.rows()) + ", got " + std::to_string(size), off);
  return p;
}

// ---------------------------------------------------------------------------
// Plain whitespace format.

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

class PlainReader {
 public:
  explicit PlainReader(std::string_view text) {
    std::size_t line = 1, start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == '\n') {
        std::string_view l = text.substr(start, i - start);
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        lines_.push_back({l, line});
        ++line;
        start = i + 1;
      }
    }
  }

  // Next line with content, as tokens; empty when the input is exhausted.
  std::vector<Token> next_line() {
    while (pos_ < lines_.size()) {
      const auto& [l, no] = lines_[pos_++];
      last_line_ = no;
      raw_ = l;
      std::vector<Token> toks = split(l, no);
      if (!toks.empty()) return toks;
    }
    return {};
  }

  std::string_view raw() const { return raw_; }
  std::size_t last_line() const { return last_line_; }

 private:
  static std::vector<Token> split(std::string_view l, std::size_t no) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < l.size()) {
      if (l[i] == '#') break;
      if (std::isspace(static_cast<unsigned char>(l[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < l.size() && !std::isspace(static_cast<unsigned char>(l[j])) && l[j] != '#') ++j;
      out.push_back({l.substr(i, j - i), no, i + 1});
      i = j;
    }
    return out;
  }

  std::vector<std::pair<std::string_view, std::size_t>> lines_;
  std::size_t pos_ = 0;
  std::size_t last_line_ = 0;
  std::string_view raw_;
};

double to_number(const Token& t) {
  double x = 0.0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  const char* s = (b != e && *b == '+') ? b + 1 : b;
  const auto [ptr, ec] = std::from_chars(s, e, x);
  if (ec != std::errc() || ptr != e || !std::isfinite(x))
    throw ParseError("not a finite number: '" + std::string(t.text) + "'", t.line, t.column);
  return x;
}

std::vector<double> read_numbers(PlainReader& in, std::vector<Token> first, std::size_t count, const char* what,
                                 std::size_t line, std::size_t column) {
  std::vector<double> out;
  std::vector<Token> toks = std::move(first);
  for (;;) {
    for (const Token& t : toks) {
      if (out.size() == count)
        throw ParseError(std::string(what) + ": more than " + std::to_string(count) + " values", t.line, t.column);
      out.push_back(to_number(t));
    }
    if (out.size() == count) return out;
    toks = in.next_line();
    if (toks.empty())
      throw ParseError(std::string(what) + ": expected " + std::to_string(count) + " values, found " +
                           std::to_string(out.size()),
                       line, column);
    if (toks.front().text.back() == ':')
      throw ParseError(std::string(what) + ": expected " + std::to_string(count) + " values, found " +
                           std::to_string(out.size()),
                       toks.front().line, toks.front().column);
  }
}

Matrix read_rows(PlainReader& in, std::size_t n, const char* what, std::size_t line, std::size_t column) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<Token> toks = in.next_line();
    if (toks.empty())
      throw ParseError(std::string(what) + ": expected " + std::to_string(n) + " rows, found " + std::to_string(i),
                       line, column);
    if (toks.size() != n) {
      const Token& at = toks.size() > n ? toks[n] : toks.back();
      throw ParseError(std::string(what) + ": row " + std::to_string(i + 1) + " has " + std::to_string(toks.size()) +
                           " entries, expected " + std::to_string(n),
                       at.line, toks.size() > n ? at.column : at.column + at.text.size());
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = to_number(toks[j]);
  }
  return m;
}

ProblemFile parse_plain(std::string_view text) {
  PlainReader in(text);
  std::vector<Token> head = in.next_line();
  if (head.empty()) throw ParseError("empty problem file", 1, 1);
  if (head.size() != 1) throw ParseError("first line must hold only the dimension n", head[1].line, head[1].column);
  std::size_t n = 0;
  {
    const Token& t = head[0];
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() || n == 0)
      throw ParseError("dimension must be a positive integer, got '" + std::string(t.text) + "'", t.line, t.column);
  }

  ProblemFile p;
  p.h = read_rows(in, n, "H", head[0].line, head[0].column);
  for (;;) {
    std::vector<Token> toks = in.next_line();
    if (toks.empty()) break;
    const Token key = toks.front();
    toks.erase(toks.begin());
    if (key.text == "v:" || key.text == "w:") {
      Vector x = read_numbers(in, std::move(toks), n, key.text == "v:" ? "v" : "w", key.line, key.column);
      (key.text == "v:" ? p.v : p.w) = std::move(x);
    } else if (key.text == "C:" || key.text == "K:") {
      if (!toks.empty()) throw ParseError("matrix rows start on the next line", toks[0].line, toks[0].column);
      (key.text == "C:" ? p.c : p.k) = read_rows(in, n, key.text == "C:" ? "C" : "K", key.line, key.column);
    } else if (key.text == "name:" || key.text == "description:") {
      std::string_view raw = in.raw();
      raw.remove_prefix(key.column - 1 + key.text.size());
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
      while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
      (key.text == "name:" ? p.name : p.description) = std::string(raw);
    } else {
      throw ParseError("unexpected token '" + std::string(key.text) + "' (expected v:, w:, C:, K:, name: or description:)",
                       key.line, key.column);
    }
  }
  return p;
}

void emit_number(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

void emit_vector(std::string& out, const Vector& x) {
  out += '[';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    emit_number(out, x[i]);
  }
  out += ']';
}

void emit_matrix(std::string& out, const Matrix& m) {
  out += "[\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += "    [";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      emit_number(out, m(i, j));
    }
    out += i + 1 < m.rows() ? "],\n" : "]\n";
  }
  out += "  ]";
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '{' ? parse_json(text) : parse_plain(text);
  }
  throw ParseError("empty problem file", 1, 1);
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string to_json(const ProblemFile& p) {
  std::string out = "{\n";
  auto sep = [&out, first = true]() mutable {
    if (!first) out += ",\n";
    first = false;
  };
  if (!p.name.empty()) {
    sep();
    out += "  \"name\": " + nlohmann::json(p.name).dump();
  }
  if (!p.description.empty()) {
    sep();
    out += "  \"description\": " + nlohmann::json(p.description).dump();
  }
  sep();
  out += "  \"H\": ";
  emit_matrix(out, p.h);
  if (p.v) {
    sep();
    out += "  \"v\": ";
    emit_vector(out, *p.v);
  }
  if (p.w) {
    sep();
    out += "  \"w\": ";
    emit_vector(out, *p.w);
  }
  if (p.c) {
    sep();
    out += "  \"C\": ";
    emit_matrix(out, *p.c);
  }
  if (p.k) {
    sep();
    out += "  \"K\": ";
    emit_matrix(out, *p.k);
  }
  out += "\n}\n";
  return out;
}

}  // namespace mstab
