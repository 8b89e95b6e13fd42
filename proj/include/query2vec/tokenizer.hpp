#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "query2vec/common.hpp"

namespace q2v {

// Placeholder / sentinel tokens shared across the pipeline.
inline constexpr const char* kUnknownToken = "UNKNOWN";
inline constexpr const char* kLiteralToken = "LITERAL";
inline constexpr const char* kSequenceEnd = "SEQUENCE_END";

enum class SourceKind { raw_sql, plan, plan_template };

inline const char* source_kind_name(SourceKind k) {
  switch (k) {
    case SourceKind::raw_sql: return "raw_sql";
    case SourceKind::plan: return "plan";
    case SourceKind::plan_template: return "plan_template";
  }
  return "raw_sql";
}

inline SourceKind source_kind_from_name(const std::string& name) {
  if (name == "raw_sql") return SourceKind::raw_sql;
  if (name == "plan") return SourceKind::plan;
  if (name == "plan_template") return SourceKind::plan_template;
  throw std::runtime_error("unknown source kind: " + name);
}

// One query's normalized token stream; unit consumed by every trainer.
struct TokenSeq {
  std::string query_id;
  std::vector<std::string> tokens;
  SourceKind source_kind = SourceKind::raw_sql;
};

namespace detail {

inline const std::unordered_set<std::string>& sql_keywords() {
  static const std::unordered_set<std::string> kw = {
      "SELECT", "FROM", "WHERE", "GROUP", "BY", "ORDER", "HAVING", "JOIN",
      "INNER", "LEFT", "RIGHT", "FULL", "OUTER", "CROSS", "ON", "AS", "AND",
      "OR", "NOT", "IN", "EXISTS", "BETWEEN", "LIKE", "IS", "NULL", "DISTINCT",
      "UNION", "ALL", "ANY", "CASE", "WHEN", "THEN", "ELSE", "END", "OVER",
      "PARTITION", "ROWS", "RANGE", "UNBOUNDED", "PRECEDING", "FOLLOWING",
      "CURRENT", "ROW", "LIMIT", "OFFSET", "TOP", "INSERT", "INTO", "VALUES",
      "UPDATE", "SET", "DELETE", "CREATE", "DROP", "ALTER", "TABLE", "VIEW",
      "INDEX", "WITH", "RECURSIVE", "ASC", "DESC", "USING", "NATURAL", "DATE",
      "TIME", "TIMESTAMP", "INTERVAL", "CAST", "COUNT", "SUM", "AVG", "MIN",
      "MAX", "RANK", "DENSE_RANK", "ROW_NUMBER", "NTILE", "LAG", "LEAD",
      "FIRST_VALUE", "LAST_VALUE", "COALESCE", "NULLIF", "EXTRACT", "SUBSTR",
      "SUBSTRING", "TRIM", "UPPER", "LOWER", "ABS", "ROUND", "FLOOR", "CEIL",
      "EXCEPT", "INTERSECT", "FETCH", "FIRST", "NEXT", "ONLY", "TRUE", "FALSE"};
  return kw;
}

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
         c == '#';
}

inline bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c));
}

}  // namespace detail

// Token classification is decidable from the token text alone, which lets
// strip_literals run on plain string lists.
inline bool is_number_literal_token(std::string_view t) {
  if (t.empty()) return false;
  std::size_t i = 0;
  bool digits = false, dot = false;
  if (t[0] == '.') {
    dot = true;
    i = 1;
  }
  for (; i < t.size(); ++i) {
    char c = t[i];
    if (detail::is_digit(c)) {
      digits = true;
    } else if (c == '.' && !dot) {
      dot = true;
    } else if ((c == 'e' || c == 'E') && digits && i + 1 < t.size()) {
      ++i;
      if (t[i] == '+' || t[i] == '-') ++i;
      if (i >= t.size()) return false;
      for (; i < t.size(); ++i)
        if (!detail::is_digit(t[i])) return false;
      return true;
    } else {
      return false;
    }
  }
  return digits;
}

inline bool is_string_literal_token(std::string_view t) {
  return !t.empty() && t.front() == '\'';
}

inline bool is_literal_token(std::string_view t) {
  return is_number_literal_token(t) || is_string_literal_token(t);
}

// Lexes raw SQL into tokens. Keywords are case-folded to upper case,
// identifiers keep their original case, string and number literals come out
// as single tokens, punctuation and operators are retained. Comments are
// skipped. An unterminated string literal consumes to end of input and is
// reported through the warning sink.
inline std::vector<std::string> tokenize(const std::string& sql,
                                         const WarningSink& warnings = {}) {
  std::vector<std::string> tokens;
  const std::size_t n = sql.size();
  std::size_t i = 0;
  while (i < n) {
    char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    // -- line comment
    if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
      continue;
    }
    // /* block comment */
    if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      i += 2;
      while (i + 1 < n && !(sql[i] == '*' && sql[i + 1] == '/')) ++i;
      i = (i + 1 < n) ? i + 2 : n;
      continue;
    }
    // 'string literal' with '' escape
    if (c == '\'') {
      std::size_t start = i++;
      bool closed = false;
      while (i < n) {
        if (sql[i] == '\'') {
          if (i + 1 < n && sql[i + 1] == '\'') {
            i += 2;  // escaped quote stays inside the token
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        ++i;
      }
      if (!closed)
        warn(warnings, "unterminated string literal at offset " +
                           std::to_string(start));
      tokens.push_back(sql.substr(start, i - start));
      continue;
    }
    // "quoted identifier"
    if (c == '"') {
      std::size_t start = i++;
      while (i < n && sql[i] != '"') ++i;
      if (i < n) ++i;
      tokens.push_back(sql.substr(start, i - start));
      continue;
    }
    // number literal
    if (detail::is_digit(c) || (c == '.' && i + 1 < n && detail::is_digit(sql[i + 1]))) {
      std::size_t start = i;
      bool dot = false;
      while (i < n) {
        char d = sql[i];
        if (detail::is_digit(d)) {
          ++i;
        } else if (d == '.' && !dot) {
          dot = true;
          ++i;
        } else if ((d == 'e' || d == 'E') && i + 1 < n &&
                   (detail::is_digit(sql[i + 1]) ||
                    ((sql[i + 1] == '+' || sql[i + 1] == '-') && i + 2 < n &&
                     detail::is_digit(sql[i + 2])))) {
          i += (sql[i + 1] == '+' || sql[i + 1] == '-') ? 2 : 1;
          while (i < n && detail::is_digit(sql[i])) ++i;
          break;
        } else {
          break;
        }
      }
      tokens.push_back(sql.substr(start, i - start));
      continue;
    }
    // identifier or keyword
    if (detail::is_ident_start(c)) {
      std::size_t start = i;
      while (i < n && detail::is_ident_char(sql[i])) ++i;
      std::string word = sql.substr(start, i - start);
      std::string upper = word;
      std::transform(upper.begin(), upper.end(), upper.begin(),
                     [](unsigned char ch) { return std::toupper(ch); });
      if (detail::sql_keywords().count(upper))
        tokens.push_back(upper);
      else
        tokens.push_back(word);
      continue;
    }
    // multi-char operators
    static constexpr std::array<const char*, 7> two_char = {
        "<=", ">=", "<>", "!=", "||", "::", ".."};
    if (i + 1 < n) {
      bool matched = false;
      for (const char* op : two_char) {
        if (c == op[0] && sql[i + 1] == op[1]) {
          tokens.emplace_back(op);
          i += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    tokens.push_back(std::string(1, c));
    ++i;
  }
  return tokens;
}

// Replaces every number / string literal token with the shared LITERAL
// placeholder. Identifiers, keywords and punctuation pass through, so the
// operation is idempotent.
inline std::vector<std::string> strip_literals(std::vector<std::string> tokens) {
  for (auto& t : tokens)
    if (is_literal_token(t)) t = kLiteralToken;
  return tokens;
}

}  // namespace q2v
