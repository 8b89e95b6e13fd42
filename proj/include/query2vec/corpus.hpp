#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "query2vec/common.hpp"
#include "query2vec/rng.hpp"

namespace q2v {

struct Query {
  std::string id;
  std::string text;
  std::optional<std::string> label;     // template name or error code
  std::optional<std::string> plan_doc;  // optimized plan markup, if supplied
};

struct Workload {
  std::string name;
  std::vector<Query> queries;

  std::size_t size() const { return queries.size(); }
};

// --- workload file format (line-delimited JSON) -----------------------------

inline nlohmann::json query_to_json(const Query& q) {
  nlohmann::json j;
  j["id"] = q.id;
  j["text"] = q.text;
  if (q.label) j["label"] = *q.label;
  if (q.plan_doc) j["plan_doc"] = *q.plan_doc;
  return j;
}

inline std::string serialize_workload(const Workload& w) {
  std::string out;
  for (const auto& q : w.queries) {
    out += query_to_json(q).dump();
    out += '\n';
  }
  return out;
}

inline void save_workload(const Workload& w, const std::string& path) {
  atomic_write_file(path, serialize_workload(w));
}

inline Workload parse_workload(std::istream& in, const std::string& name) {
  Workload w;
  w.name = name;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(name + ": malformed record on line " +
                               std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("text"))
      throw std::runtime_error(name + ": malformed record on line " +
                               std::to_string(lineno) +
                               ": missing id or text field");
    Query q;
    q.id = j.at("id").get<std::string>();
    q.text = j.at("text").get<std::string>();
    if (q.text.empty())
      throw std::runtime_error(name + ": malformed record on line " +
                               std::to_string(lineno) + ": empty text");
    if (j.contains("label")) q.label = j.at("label").get<std::string>();
    if (j.contains("plan_doc")) q.plan_doc = j.at("plan_doc").get<std::string>();
    if (!seen.insert(q.id).second)
      throw std::runtime_error(name + ": duplicate id '" + q.id + "' on line " +
                               std::to_string(lineno));
    w.queries.push_back(std::move(q));
  }
  return w;
}

// Only format tag currently defined for workload files.
inline constexpr const char* kWorkloadFormatJsonl = "jsonl";

inline Workload load_workload(const std::string& path,
                              const std::string& format = kWorkloadFormatJsonl) {
  if (format != kWorkloadFormatJsonl)
    throw std::runtime_error("unsupported workload format: " + format);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open workload file: " + path);
  std::string name = std::filesystem::path(path).filename().string();
  return parse_workload(in, name);
}

// --- synthetic templated workloads ------------------------------------------

struct SlotDomain {
  enum class Kind { integer, date, choice };
  Kind kind = Kind::integer;
  std::int64_t int_min = 0, int_max = 0;  // integer
  std::string date_min, date_max;         // date, YYYY-MM-DD inclusive
  std::vector<std::string> choices;       // string pool
};

struct TemplateSpec {
  std::string name;
  std::string sql_pattern;                 // with {slot} placeholders
  std::string plan_pattern;                // optional synthetic plan markup
  std::map<std::string, SlotDomain> slot_domains;
};

namespace detail {

// days-from-civil / civil-from-days (Howard Hinnant's algorithms); keeps
// date slot sampling independent of the C locale and time zone.
inline std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

inline std::int64_t parse_date(const std::string& s) {
  int y, m, d;
  if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
    throw std::runtime_error("bad date literal: " + s);
  return days_from_civil(y, m, d);
}

inline std::string format_date(std::int64_t days) {
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return buf;
}

inline std::string render_slot(const SlotDomain& dom, Rng& rng) {
  switch (dom.kind) {
    case SlotDomain::Kind::integer:
      return std::to_string(rng.next_int(dom.int_min, dom.int_max));
    case SlotDomain::Kind::date: {
      std::int64_t lo = parse_date(dom.date_min);
      std::int64_t hi = parse_date(dom.date_max);
      return format_date(rng.next_int(lo, hi));
    }
    case SlotDomain::Kind::choice:
      if (dom.choices.empty()) throw std::runtime_error("empty choice pool");
      return dom.choices[static_cast<std::size_t>(
          rng.next_range(dom.choices.size()))];
  }
  throw std::runtime_error("bad slot kind");
}

inline std::vector<std::string> find_placeholders(const std::string& pattern) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '{') continue;
    auto end = pattern.find('}', i);
    if (end == std::string::npos) break;
    names.push_back(pattern.substr(i + 1, end - i - 1));
    i = end;
  }
  return names;
}

inline std::string substitute(const std::string& pattern,
                              const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '{') {
      auto end = pattern.find('}', i);
      if (end != std::string::npos) {
        out += values.at(pattern.substr(i + 1, end - i - 1));
        i = end;
        continue;
      }
    }
    out += pattern[i];
  }
  return out;
}

}  // namespace detail

inline void validate_template(const TemplateSpec& t) {
  for (const auto& pattern : {t.sql_pattern, t.plan_pattern})
    for (const auto& name : detail::find_placeholders(pattern))
      if (!t.slot_domains.count(name))
        throw std::runtime_error("template '" + t.name +
                                 "': placeholder {" + name + "} has no domain");
}

// Instantiates |templates| x n_per_template queries, each labeled with the
// template that produced it. Slot values come from a counter-based generator
// keyed by (seed, template index, instance index), so output is identical
// across runs and platforms.
inline Workload generate_templated_workload(const std::vector<TemplateSpec>& templates,
                                            int n_per_template,
                                            std::uint64_t seed,
                                            const WarningSink& warnings = {}) {
  if (templates.empty()) throw std::invalid_argument("no templates");
  if (n_per_template < 1) throw std::invalid_argument("n_per_template must be >= 1");
  Workload w;
  w.name = "templated-" + std::to_string(seed);
  for (std::size_t ti = 0; ti < templates.size(); ++ti) {
    const TemplateSpec& t = templates[ti];
    validate_template(t);
    bool has_slots = !detail::find_placeholders(t.sql_pattern).empty();
    if (!has_slots && n_per_template > 1)
      warn(warnings, "template '" + t.name +
                         "' has no placeholders; instances will be duplicate texts");
    for (int i = 0; i < n_per_template; ++i) {
      Rng rng(seed, ti, static_cast<std::uint64_t>(i));
      std::map<std::string, std::string> values;
      for (const auto& [slot, dom] : t.slot_domains)
        values[slot] = detail::render_slot(dom, rng);
      Query q;
      char num[16];
      std::snprintf(num, sizeof(num), "%05d", i);
      q.id = t.name + "-" + num;
      q.text = detail::substitute(t.sql_pattern, values);
      q.label = t.name;
      if (!t.plan_pattern.empty())
        q.plan_doc = detail::substitute(t.plan_pattern, values);
      w.queries.push_back(std::move(q));
    }
  }
  return w;
}

// Deterministic disjoint split; |test| = round(test_fraction * |w|).
inline std::pair<Workload, Workload> split_train_test(const Workload& w,
                                                      double test_fraction,
                                                      std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must be in (0,1)");
  if (w.size() < 2) throw std::invalid_argument("workload too small to split");
  std::vector<std::size_t> order(w.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed, 0x5p117);
  rng.shuffle(order);
  auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(w.size())));
  if (n_test == 0) n_test = 1;
  if (n_test >= w.size()) n_test = w.size() - 1;

  Workload train, test;
  train.name = w.name + "-train";
  test.name = w.name + "-test";
  std::vector<bool> in_test(w.size(), false);
  for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;
  for (std::size_t i = 0; i < w.size(); ++i)
    (in_test[i] ? test : train).queries.push_back(w.queries[i]);
  return {std::move(train), std::move(test)};
}

// --- template config file ----------------------------------------------------

inline SlotDomain slot_domain_from_json(const nlohmann::json& j) {
  SlotDomain dom;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "int") {
    dom.kind = SlotDomain::Kind::integer;
    dom.int_min = j.at("min").get<std::int64_t>();
    dom.int_max = j.at("max").get<std::int64_t>();
  } else if (kind == "date") {
    dom.kind = SlotDomain::Kind::date;
    dom.date_min = j.at("min").get<std::string>();
    dom.date_max = j.at("max").get<std::string>();
  } else if (kind == "choice") {
    dom.kind = SlotDomain::Kind::choice;
    dom.choices = j.at("values").get<std::vector<std::string>>();
  } else {
    throw std::runtime_error("unknown slot kind: " + kind);
  }
  return dom;
}

inline nlohmann::json slot_domain_to_json(const SlotDomain& dom) {
  nlohmann::json j;
  switch (dom.kind) {
    case SlotDomain::Kind::integer:
      j["kind"] = "int";
      j["min"] = dom.int_min;
      j["max"] = dom.int_max;
      break;
    case SlotDomain::Kind::date:
      j["kind"] = "date";
      j["min"] = dom.date_min;
      j["max"] = dom.date_max;
      break;
    case SlotDomain::Kind::choice:
      j["kind"] = "choice";
      j["values"] = dom.choices;
      break;
  }
  return j;
}

inline std::vector<TemplateSpec> parse_template_config(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<TemplateSpec> out;
  for (const auto& tj : j.at("templates")) {
    TemplateSpec t;
    t.name = tj.at("name").get<std::string>();
    t.sql_pattern = tj.at("sql").get<std::string>();
    if (tj.contains("plan")) t.plan_pattern = tj.at("plan").get<std::string>();
    if (tj.contains("slots"))
      for (const auto& [slot, dj] : tj.at("slots").items())
        t.slot_domains[slot] = slot_domain_from_json(dj);
    validate_template(t);
    out.push_back(std::move(t));
  }
  if (out.empty()) throw std::runtime_error("template config has no templates");
  return out;
}

inline std::string serialize_template_config(const std::vector<TemplateSpec>& templates) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : templates) {
    nlohmann::json tj;
    tj["name"] = t.name;
    tj["sql"] = t.sql_pattern;
    if (!t.plan_pattern.empty()) tj["plan"] = t.plan_pattern;
    nlohmann::json slots = nlohmann::json::object();
    for (const auto& [slot, dom] : t.slot_domains) slots[slot] = slot_domain_to_json(dom);
    tj["slots"] = slots;
    arr.push_back(tj);
  }
  nlohmann::json root;
  root["templates"] = arr;
  return root.dump(2) + "\n";
}

inline std::vector<TemplateSpec> load_template_config(const std::string& path) {
  return parse_template_config(read_file(path));
}

}  // namespace q2v
