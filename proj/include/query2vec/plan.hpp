#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "query2vec/tokenizer.hpp"

namespace q2v {

// Raw optimized-plan document for one query, as shipped in workload files.
struct PlanDoc {
  std::string query_id;
  std::string document;
};

struct PlanNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;  // document order
  std::vector<PlanNode> children;
};

namespace detail {

struct PlanParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit PlanParser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("plan parse error at offset " +
                             std::to_string(pos) + ": " + what);
  }

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool starts_with(const char* s) const {
    return text.compare(pos, std::char_traits<char>::length(s), s) == 0;
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<?")) {
        auto end = text.find("?>", pos);
        if (end == std::string::npos) fail("unterminated processing instruction");
        pos = end + 2;
      } else if (starts_with("<!--")) {
        auto end = text.find("-->", pos);
        if (end == std::string::npos) fail("unterminated comment");
        pos = end + 3;
      } else {
        return;
      }
    }
  }

  static std::string unescape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '&') {
        if (s.compare(i, 4, "&lt;") == 0) { out += '<'; i += 3; continue; }
        if (s.compare(i, 4, "&gt;") == 0) { out += '>'; i += 3; continue; }
        if (s.compare(i, 5, "&amp;") == 0) { out += '&'; i += 4; continue; }
        if (s.compare(i, 6, "&quot;") == 0) { out += '"'; i += 5; continue; }
        if (s.compare(i, 6, "&apos;") == 0) { out += '\''; i += 5; continue; }
      }
      out += s[i];
    }
    return out;
  }

  std::string read_name() {
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == '.' || c == ':')
        ++pos;
      else
        break;
    }
    if (pos == start) fail("expected name");
    return text.substr(start, pos - start);
  }

  PlanNode parse_element() {
    skip_misc();
    if (pos >= text.size() || text[pos] != '<') fail("expected '<'");
    ++pos;
    PlanNode node;
    node.name = read_name();
    for (;;) {
      skip_ws();
      if (pos >= text.size()) fail("unterminated element " + node.name);
      if (starts_with("/>")) {
        pos += 2;
        return node;
      }
      if (text[pos] == '>') {
        ++pos;
        break;
      }
      std::string key = read_name();
      skip_ws();
      if (pos >= text.size() || text[pos] != '=') fail("expected '=' after attribute " + key);
      ++pos;
      skip_ws();
      if (pos >= text.size() || (text[pos] != '"' && text[pos] != '\''))
        fail("expected quoted attribute value for " + key);
      char quote = text[pos++];
      std::size_t start = pos;
      while (pos < text.size() && text[pos] != quote) ++pos;
      if (pos >= text.size()) fail("unterminated attribute value for " + key);
      node.attrs.emplace_back(key, unescape(text.substr(start, pos - start)));
      ++pos;
    }
    // children / text content up to the closing tag
    for (;;) {
      // text content carries no plan structure; skip to next tag
      while (pos < text.size() && text[pos] != '<') ++pos;
      if (pos >= text.size()) fail("missing closing tag for " + node.name);
      skip_misc();
      if (starts_with("</")) {
        pos += 2;
        std::string closing = read_name();
        if (closing != node.name)
          fail("mismatched closing tag </" + closing + "> for <" + node.name + ">");
        skip_ws();
        if (pos >= text.size() || text[pos] != '>') fail("expected '>'");
        ++pos;
        return node;
      }
      node.children.push_back(parse_element());
    }
  }
};

// Attributes holding optimizer estimates (cardinalities, costs, runtimes).
inline bool is_estimate_attr(const std::string& key) {
  std::string k;
  k.reserve(key.size());
  for (char c : key) k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (k.find("estimate") != std::string::npos) return true;
  if (k.rfind("est_", 0) == 0 || k.rfind("est", 0) == 0) return true;
  return k == "rows" || k == "cost" || k == "bytes" || k == "runtime" ||
         k == "runtime_ms" || k == "cardinality" || k == "executions";
}

// Order-of-magnitude bucket token for a numeric estimate, e.g.
// rows="4213" -> ROWS_1E3. Raw estimate numbers are untrainable.
inline std::string bucket_estimate(const std::string& key, const std::string& value) {
  double v = 0.0;
  try {
    std::size_t consumed = 0;
    v = std::stod(value, &consumed);
    if (consumed != value.size()) return value;
  } catch (...) {
    return value;
  }
  std::string upper;
  upper.reserve(key.size());
  for (char c : key) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (v == 0.0) return upper + "_0";
  int mag = static_cast<int>(std::floor(std::log10(std::fabs(v))));
  return upper + "_1E" + std::to_string(mag);
}

inline bool looks_like_literal_value(const std::string& v) {
  return is_number_literal_token(v) || is_string_literal_token(v);
}

inline void linearize_node(const PlanNode& node, bool templatize,
                           std::vector<std::string>& out);

inline void emit_node(const PlanNode& node, bool templatize,
                      std::vector<std::string>& out) {
  out.push_back(node.name);
  for (const auto& [key, value] : node.attrs) {
    if (is_estimate_attr(key)) {
      if (templatize) continue;  // estimates are dropped from plan templates
      out.push_back(key);
      out.push_back(bucket_estimate(key, value));
      continue;
    }
    out.push_back(key);
    if (templatize && looks_like_literal_value(value))
      out.push_back(kLiteralToken);
    else
      out.push_back(value);
  }
}

// In-order traversal generalized to n-ary nodes: first child, then the node
// itself, then the remaining children. Reduces to standard in-order on
// binary trees.
inline void linearize_node(const PlanNode& node, bool templatize,
                           std::vector<std::string>& out) {
  if (node.children.empty()) {
    emit_node(node, templatize, out);
    return;
  }
  linearize_node(node.children[0], templatize, out);
  emit_node(node, templatize, out);
  for (std::size_t i = 1; i < node.children.size(); ++i)
    linearize_node(node.children[i], templatize, out);
}

}  // namespace detail

inline PlanNode parse_plan(const std::string& document) {
  detail::PlanParser parser(document);
  PlanNode root = parser.parse_element();
  parser.skip_misc();
  return root;
}

// Linearizes a plan document to a token sequence via in-order traversal.
// All markup punctuation (angle brackets, quotes, equals) disappears; only
// element names and attribute key/value tokens remain. With templatize=true,
// literal attribute values become LITERAL and estimate attributes are
// dropped; otherwise estimates are kept as order-of-magnitude bucket tokens.
inline TokenSeq linearize_plan(const PlanDoc& plan, bool templatize) {
  PlanNode root = parse_plan(plan.document);
  TokenSeq seq;
  seq.query_id = plan.query_id;
  seq.source_kind = templatize ? SourceKind::plan_template : SourceKind::plan;
  detail::linearize_node(root, templatize, seq.tokens);
  return seq;
}

}  // namespace q2v
