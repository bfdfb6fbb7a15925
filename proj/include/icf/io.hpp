#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "icf/report.hpp"
#include "icf/version.hpp"

namespace icf {

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline int parse_int(const std::string& tok, const std::string& where) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    throw InputError(where + ": expected an integer, got \"" + tok + "\"");
  }
  if (pos != tok.size())
    throw InputError(where + ": trailing characters after integer in \"" + tok + "\"");
  return v;
}

inline Mask parse_set_line(const std::string& line, int n, const std::string& where) {
  if (line == "-") return Mask::empty_set();
  Mask m;
  std::stringstream ss(line);
  std::string tok;
  int position = 0;
  while (std::getline(ss, tok, ',')) {
    ++position;
    const std::string t = trim(tok);
    const std::string at = where + ", element " + std::to_string(position);
    if (t.empty()) throw InputError(at + ": empty element");
    const int e = parse_int(t, at);
    if (e < 1 || e > n)
      throw InputError(at + ": element " + std::to_string(e) +
                       " out of range 1.." + std::to_string(n));
    if (m.contains(e))
      throw InputError(at + ": duplicate element " + std::to_string(e));
    m = m.with(e);
  }
  if (position == 0) throw InputError(where + ": empty set must be written as \"-\"");
  return m;
}

}  // namespace detail

// Structured input: {"n": k, "sets": [[...], ...]}.
inline RawFamily parse_family_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("sets"))
    throw InputError("family document needs fields \"n\" and \"sets\"");
  if (!doc["n"].is_number_integer())
    throw InputError("field \"n\" must be an integer");
  const int n = doc["n"].get<int>();
  detail::require_ground_set(n);
  if (!doc["sets"].is_array()) throw InputError("field \"sets\" must be an array");
  std::vector<Mask> sets;
  detail::MemberIndex seen(n);
  int idx = 0;
  for (const auto& arr : doc["sets"]) {
    ++idx;
    const std::string where = "sets[" + std::to_string(idx - 1) + "]";
    if (!arr.is_array()) throw InputError(where + ": expected an array of elements");
    Mask m;
    int position = 0;
    for (const auto& ev : arr) {
      ++position;
      if (!ev.is_number_integer())
        throw InputError(where + ", element " + std::to_string(position) +
                         ": expected an integer");
      const int e = ev.get<int>();
      if (e < 1 || e > n)
        throw InputError(where + ", element " + std::to_string(position) +
                         ": element " + std::to_string(e) + " out of range 1.." +
                         std::to_string(n));
      if (m.contains(e))
        throw InputError(where + ", element " + std::to_string(position) +
                         ": duplicate element " + std::to_string(e));
      m = m.with(e);
    }
    if (seen.contains(m))
      throw InputError(where + ": duplicate set " + m.to_string());
    seen.insert(m);
    sets.push_back(m);
  }
  return RawFamily{n, std::move(sets)};
}

// Plain text: first line "n=<k>", then one set per line as comma-separated
// elements; "-" denotes the empty set. Blank lines are skipped.
inline RawFamily parse_family_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n = -1;
  std::vector<Mask> sets;
  std::vector<int> first_line_of;  // parallel to sets, for diagnostics
  detail::MemberIndex seen;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (n < 0) {
      if (t.rfind("n", 0) != 0)
        throw InputError(where + ": expected header \"n=<k>\"");
      const std::size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw InputError(where + ": expected header \"n=<k>\"");
      n = detail::parse_int(detail::trim(t.substr(eq + 1)), where);
      detail::require_ground_set(n);
      seen = detail::MemberIndex(n);
      continue;
    }
    const Mask m = detail::parse_set_line(t, n, where);
    if (seen.contains(m)) {
      std::string dup = where + ": duplicate set " + m.to_string();
      for (std::size_t i = 0; i < sets.size(); ++i)
        if (sets[i] == m) {
          dup += " (first seen at line " + std::to_string(first_line_of[i]) + ")";
          break;
        }
      throw InputError(dup);
    }
    seen.insert(m);
    sets.push_back(m);
    first_line_of.push_back(lineno);
  }
  if (n < 0) throw InputError("missing header line \"n=<k>\"");
  return RawFamily{n, std::move(sets)};
}

// Accepts either format; JSON when the first significant byte is '{'.
inline RawFamily parse_family(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? parse_family_json(text) : parse_family_text(text);
  }
  throw InputError("empty input");
}

inline std::string family_to_text(int n, const std::vector<Mask>& sets) {
  std::ostringstream os;
  os << "n=" << n << "\n";
  for (Mask m : sets) {
    const auto elems = m.elements();
    if (elems.empty()) {
      os << "-\n";
      continue;
    }
    for (std::size_t i = 0; i < elems.size(); ++i) os << (i ? "," : "") << elems[i];
    os << "\n";
  }
  return os.str();
}

inline std::string family_to_text(const Family& f) {
  return family_to_text(f.n(), f.sets());
}

inline nlohmann::ordered_json family_to_json(int n, const std::vector<Mask>& sets) {
  nlohmann::ordered_json j;
  j["n"] = n;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Mask m : sets) arr.push_back(m.elements());
  j["sets"] = std::move(arr);
  return j;
}

// FNV-1a over the canonical text serialization; stable input fingerprint.
inline std::string input_digest(const RawFamily& raw) {
  std::vector<Mask> sorted = raw.sets;
  std::sort(sorted.begin(), sorted.end());
  const std::string canon = family_to_text(raw.n, sorted);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline nlohmann::ordered_json claim_to_json(const ClaimResult& c) {
  nlohmann::ordered_json j;
  j["id"] = std::string(to_string(c.id));
  j["ran"] = c.ran;
  if (!c.ran) {
    j["skip_reason"] = c.skip_reason;
    return j;
  }
  j["holds"] = c.holds;
  nlohmann::ordered_json details = nlohmann::ordered_json::array();
  for (const auto& d : c.details) {
    nlohmann::ordered_json e;
    e["index"] = d.index;
    e["lhs"] = d.lhs;
    e["rhs"] = d.rhs;
    e["holds"] = d.holds;
    if (!d.note.empty()) e["note"] = d.note;
    details.push_back(std::move(e));
  }
  j["details"] = std::move(details);
  nlohmann::ordered_json wit = nlohmann::ordered_json::array();
  for (const auto& w : c.witnesses) {
    nlohmann::ordered_json e;
    e["level"] = w.level;
    nlohmann::ordered_json masks = nlohmann::ordered_json::array();
    for (Mask m : w.masks) masks.push_back(m.elements());
    e["masks"] = std::move(masks);
    e["description"] = w.description;
    wit.push_back(std::move(e));
  }
  j["witnesses"] = std::move(wit);
  return j;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const ClaimReport& rep,
                                             const RawFamily& input) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["tool_version"] = kToolVersion;
  j["input_digest"] = input_digest(input);
  j["input"] = {{"n", rep.input_n}, {"sets", rep.input_size}};
  j["permutation"] = rep.permutation;
  if (rep.reduction) {
    nlohmann::ordered_json r;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& s : rep.reduction->steps) {
      nlohmann::ordered_json e;
      e["kind"] = s.kind == ReductionStep::Kind::remove_universal
                      ? "remove_universal"
                      : "merge";
      e["element"] = s.element;
      if (s.kind == ReductionStep::Kind::merge) e["into"] = s.into;
      steps.push_back(std::move(e));
    }
    r["steps"] = std::move(steps);
    r["label_map"] = rep.reduction->label_map;
    r["reduced_n"] = rep.reduction->reduced_n;
    r["post_permutation"] = rep.reduction->post_permutation;
    j["reduction"] = std::move(r);
  } else {
    j["reduction"] = nullptr;
  }
  j["degenerate"] = rep.degenerate;
  if (rep.degenerate) j["degenerate_note"] = rep.degenerate_note;
  j["precondition_failure"] = rep.precondition_failure;
  j["family"] = family_to_json(rep.family.n(), rep.family.sets());
  j["frequencies"] = rep.frequencies;
  {
    nlohmann::ordered_json p;
    p["ordered"] = rep.preconditions.ordered;
    p["f1_proper"] = rep.preconditions.f1_proper;
    p["pairwise_distinct"] = rep.preconditions.pairwise_distinct;
    p["empty_in_f"] = rep.preconditions.empty_in_f;
    p["pass"] = rep.preconditions.pass();
    p["failures"] = rep.preconditions.failures;
    j["preconditions"] = std::move(p);
  }
  if (rep.trace) {
    nlohmann::ordered_json t;
    t["t"] = rep.trace->t;
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (const auto& lv : rep.trace->levels) {
      nlohmann::ordered_json L;
      L["level"] = lv.level;
      nlohmann::ordered_json recs = nlohmann::ordered_json::array();
      for (const auto& rec : lv.records) {
        nlohmann::ordered_json R;
        R["a"] = rec.a.elements();
        if (rec.root)
          R["root"] = *rec.root;
        else
          R["root"] = nullptr;
        R["h_size"] = rec.h_size;
        recs.push_back(std::move(R));
      }
      L["records"] = std::move(recs);
      L["excluded"] = lv.excluded;
      levels.push_back(std::move(L));
    }
    t["levels"] = std::move(levels);
    j["trace"] = std::move(t);
  } else {
    j["trace"] = nullptr;
  }
  nlohmann::ordered_json claims = nlohmann::ordered_json::array();
  for (const auto& c : rep.claims) claims.push_back(detail::claim_to_json(c));
  j["claims"] = std::move(claims);
  {
    nlohmann::ordered_json v;
    v["failed_claims"] = rep.failed_claims();
    v["count"] = rep.failed_claims().size();
    j["violations"] = std::move(v);
  }
  return j;
}

inline std::string report_to_text(const ClaimReport& rep, const RawFamily& input) {
  std::ostringstream os;
  os << "icflab report (tool " << kToolVersion << ")\n";
  os << "input: n=" << rep.input_n << ", " << rep.input_size << " sets, "
     << input_digest(input) << "\n";
  os << "permutation (input -> analyzed):";
  for (std::size_t i = 0; i < rep.permutation.size(); ++i)
    os << " " << (i + 1) << "->" << rep.permutation[i];
  os << "\n";
  if (rep.reduction) {
    os << "reduction:";
    for (const auto& s : rep.reduction->steps) {
      if (s.kind == ReductionStep::Kind::remove_universal)
        os << " drop-universal(" << s.element << ")";
      else
        os << " merge(" << s.element << "->" << s.into << ")";
    }
    os << " => n'=" << rep.reduction->reduced_n << "\n";
  }
  if (rep.degenerate) {
    os << "degenerate: " << rep.degenerate_note << "\n";
    return os.str();
  }
  os << "frequencies:";
  for (std::size_t i = 0; i < rep.frequencies.size(); ++i)
    os << " |F_" << (i + 1) << "|=" << rep.frequencies[i];
  os << "\n";
  os << "preconditions: ordered=" << (rep.preconditions.ordered ? "yes" : "no")
     << " f1_proper=" << (rep.preconditions.f1_proper ? "yes" : "no")
     << " pairwise_distinct=" << (rep.preconditions.pairwise_distinct ? "yes" : "no")
     << " empty_in_f=" << (rep.preconditions.empty_in_f ? "yes" : "no") << " => "
     << (rep.preconditions.pass() ? "pass" : "FAIL") << "\n";
  for (const auto& fmsg : rep.preconditions.failures) os << "  ! " << fmsg << "\n";
  if (rep.precondition_failure) {
    os << "claims not run (preconditions failed, reduction disabled)\n";
    return os.str();
  }
  if (rep.trace) {
    os << "trace: t =";
    for (std::int64_t v : rep.trace->t) os << " " << v;
    os << "\n";
    for (const auto& lv : rep.trace->levels) {
      if (lv.records.empty()) continue;
      os << "  level " << lv.level << " (excludes " << lv.excluded << "):";
      for (const auto& rec : lv.records) {
        os << " " << rec.a.to_string();
        if (rec.root) os << "[root " << *rec.root << "]";
        os << "(|H|=" << rec.h_size << ")";
      }
      os << "\n";
    }
  }
  os << "claims:\n";
  for (const auto& c : rep.claims) {
    os << "  " << to_string(c.id) << ": ";
    if (!c.ran) {
      os << "skipped (" << c.skip_reason << ")\n";
      continue;
    }
    os << (c.holds ? "holds" : "FAILS") << "\n";
    for (const auto& w : c.witnesses) {
      os << "      witness (level " << w.level << "): " << w.description;
      if (!w.masks.empty()) {
        os << " [";
        for (std::size_t i = 0; i < w.masks.size(); ++i)
          os << (i ? " " : "") << w.masks[i].to_string();
        os << "]";
      }
      os << "\n";
    }
  }
  const auto failed = rep.failed_claims();
  os << "violations: " << failed.size();
  if (!failed.empty()) {
    os << " (";
    for (std::size_t i = 0; i < failed.size(); ++i) os << (i ? ", " : "") << failed[i];
    os << ")";
  }
  os << "\n";
  return os.str();
}

inline std::string serialize_report(const ClaimReport& rep, const RawFamily& input,
                                    bool as_json) {
  if (as_json) return report_to_json(rep, input).dump(2) + "\n";
  return report_to_text(rep, input);
}

}  // namespace icf
