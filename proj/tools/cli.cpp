#include "cli.hpp"

#include <CLI11.hpp>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "negdep/core.hpp"
#include "negdep/emerge.hpp"
#include "negdep/fdr.hpp"
#include "negdep/mc.hpp"
#include "negdep/pmerge.hpp"
#include "negdep/scenarios.hpp"

namespace negdep::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Formatting

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

/// Minimal ordered JSON object builder (field order is part of the byte
/// contract for result files; nlohmann reorders keys).
class JsonWriter {
 public:
  JsonWriter& field(const char* k, double v) { return raw(k, format_double(v)); }
  JsonWriter& field(const char* k, const std::string& v) {
    return raw(k, "\"" + json_escape(v) + "\"");
  }
  JsonWriter& field(const char* k, const char* v) { return field(k, std::string(v)); }
  JsonWriter& field(const char* k, bool v) { return raw(k, v ? "true" : "false"); }
  JsonWriter& field(const char* k, std::int64_t v) { return raw(k, std::to_string(v)); }
  JsonWriter& field(const char* k, std::uint64_t v) { return raw(k, std::to_string(v)); }
  JsonWriter& field(const char* k, int v) { return raw(k, std::to_string(v)); }
  JsonWriter& raw(const char* k, const std::string& rhs) {
    if (!first_) s_ += ',';
    first_ = false;
    s_ += '"';
    s_ += k;
    s_ += "\":";
    s_ += rhs;
    return *this;
  }
  std::string str() const { return s_ + "}"; }

 private:
  std::string s_ = "{";
  bool first_ = true;
};

std::string json_array(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  return out + "]";
}

std::string json_array(const std::vector<int>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Input parsing

double parse_number(const std::string& field, int line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw InputError("line " + std::to_string(line_no) + ": '" + field + "' is not a number");
  }
  return v;
}

bool parse_bool(const std::string& field, int line_no) {
  if (field == "1" || field == "true") return true;
  if (field == "0" || field == "false") return false;
  throw InputError("line " + std::to_string(line_no) + ": '" + field +
                   "' is not a 0/1/true/false indicator");
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

InputTable read_csv_table(std::istream& in) {
  InputTable t;
  std::string line;
  int line_no = 0;
  std::vector<std::string> columns;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (columns.empty()) {
      columns = fields;
      for (const auto& c : columns) {
        if (c != "p" && c != "e" && c != "weight" && c != "group" && c != "is_null") {
          throw InputError("line 1: unknown column '" + c +
                           "' (expected p, e, weight, group, is_null)");
        }
      }
      continue;
    }
    if (fields.size() != columns.size()) {
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(columns.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const std::string& c = columns[i];
      if (c == "p") t.p.push_back(parse_number(fields[i], line_no));
      else if (c == "e") t.e.push_back(parse_number(fields[i], line_no));
      else if (c == "weight") t.weight.push_back(parse_number(fields[i], line_no));
      else if (c == "group") t.group.push_back(fields[i]);
      else t.is_null.push_back(parse_bool(fields[i], line_no));
    }
  }
  if (columns.empty()) throw InputError("line 1: empty input file");
  return t;
}

InputTable read_json_table(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw InputError("JSON input must be an object of column arrays");
  InputTable t;
  for (const auto& [key, value] : j.items()) {
    if (key != "p" && key != "e" && key != "weight" && key != "group" && key != "is_null") {
      throw InputError("unknown JSON column '" + key + "'");
    }
    if (!value.is_array()) throw InputError("JSON column '" + key + "' must be an array");
    try {
      if (key == "p") t.p = value.get<std::vector<double>>();
      else if (key == "e") t.e = value.get<std::vector<double>>();
      else if (key == "weight") t.weight = value.get<std::vector<double>>();
      else if (key == "group") {
        for (const auto& g : value) {
          t.group.push_back(g.is_string() ? g.get<std::string>() : g.dump());
        }
      } else {
        for (const auto& b : value) {
          if (b.is_boolean()) t.is_null.push_back(b.get<bool>());
          else if (b.is_number()) t.is_null.push_back(b.get<double>() != 0.0);
          else throw InputError("is_null entries must be booleans or 0/1");
        }
      }
    } catch (const json::exception& e) {
      throw InputError("JSON column '" + key + "': " + e.what());
    }
  }
  return t;
}

void validate_table(const InputTable& t) {
  if (!t.has_p() && !t.has_e()) throw InputError("input needs a p or e column");
  if (t.has_p() && t.has_e()) throw InputError("input must not have both p and e columns");
  const std::size_t n = t.has_p() ? t.p.size() : t.e.size();
  if (n == 0) throw InputError("input has zero data rows");
  if (t.has_weight() && t.weight.size() != n) throw InputError("weight column length mismatch");
  if (t.has_group() && t.group.size() != n) throw InputError("group column length mismatch");
  if (t.has_null() && t.is_null.size() != n) throw InputError("is_null column length mismatch");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e9999" : "-1e9999";  // parses as inf downstream
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

namespace {

/// Short form for human-facing lines; records keep the 17-digit form.
std::string fmt_short(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::string(buf);
}

}  // namespace

InputTable read_input_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  bool looks_json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
  if (!looks_json) {
    const int first = in.peek();
    looks_json = first == '{';
  }
  InputTable t = looks_json ? read_json_table(in) : read_csv_table(in);
  validate_table(t);
  return t;
}

namespace {

// ---------------------------------------------------------------------------
// Shared output helpers

void emit_record(const std::string& record, const std::string& out_path, std::ostream& out) {
  out << record << "\n";
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InputError("cannot open output file: " + out_path);
    f << record << "\n";
  }
}

std::string bounds_json(const SimesBoundReport& r) {
  JsonWriter w;
  w.field("alpha", r.alpha)
      .field("K", r.K)
      .field("additive_general", r.additive_general)
      .field("succinct", r.succinct)
      .raw("cubic", r.cubic.has_value() ? format_double(*r.cubic) : "null")
      .field("tilde_s", r.tilde_s)
      .field("hommel", r.hommel)
      .field("combined", r.combined());
  return w.str();
}

std::string fdr_bounds_json(const FdrBoundReport& r) {
  JsonWriter w;
  w.field("alpha", r.alpha)
      .field("K", r.K)
      .field("su_neg_bound", r.su_neg_bound)
      .field("hommel_bound", r.hommel_bound)
      .field("combined", r.combined);
  if (r.hommel_k0_bound.has_value()) w.field("hommel_k0_bound", *r.hommel_k0_bound);
  return w.str();
}

std::string verification_json(const std::string& scenario, const VerificationResult& r) {
  JsonWriter w;
  w.field("schema_version", 1)
      .field("scenario", scenario)
      .field("check", r.name)
      .field("direction", r.direction == CheckDirection::upper ? "upper" : "lower")
      .field("estimate", r.estimate.estimate)
      .field("std_error", r.estimate.std_error)
      .field("reps", r.estimate.reps)
      .field("seed", r.estimate.seed)
      .field("bound", r.bound)
      .field("bound_name", r.bound_name)
      .field("margin_sigmas", r.margin_sigmas)
      .field("excess_sigmas", r.excess_sigmas)
      .field("pass", r.pass)
      .field("reran_at_10x", r.reran_at_10x)
      .field("exploratory", r.exploratory);
  return w.str();
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  return out + "\"";
}

std::string verification_csv_row(const std::string& scenario, const VerificationResult& r) {
  std::ostringstream os;
  os << csv_quote(scenario) << ',' << csv_quote(r.name) << ','
     << (r.direction == CheckDirection::upper ? "upper" : "lower") << ','
     << format_double(r.estimate.estimate) << ',' << format_double(r.estimate.std_error) << ','
     << r.estimate.reps << ',' << r.estimate.seed << ',' << format_double(r.bound) << ','
     << csv_quote(r.bound_name) << ',' << format_double(r.margin_sigmas) << ','
     << format_double(r.excess_sigmas) << ',' << (r.pass ? "true" : "false") << ','
     << (r.reran_at_10x ? "true" : "false") << ',' << (r.exploratory ? "true" : "false");
  return os.str();
}

constexpr const char* kVerificationCsvHeader =
    "scenario,check,direction,estimate,std_error,reps,seed,bound,bound_name,margin_sigmas,"
    "excess_sigmas,pass,reran_at_10x,exploratory";

// ---------------------------------------------------------------------------
// merge

std::vector<double> parse_double_list(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const std::string& f : split(s, ',')) {
    if (f.empty()) throw InputError(std::string(what) + ": empty entry in list");
    out.push_back(parse_number(f, 0));
  }
  return out;
}

int cmd_merge(const std::string& method, const std::string& input, double alpha,
              const std::string& weights_arg, const std::string& groups_arg,
              const std::string& out_path, std::ostream& out) {
  const InputTable table = read_input_table(input);
  if (!table.has_p()) throw InputError("merge requires a p column");
  const PVector p(table.p);
  const int K = p.size();

  if (method == "simes") {
    const double value = simes(p);
    const double corrected = simes_corrected_p(p);
    const double factor = std::min(kSimesFactorAllAlpha, harmonic_ell(K));
    const SimesBoundReport bounds = bound_report(alpha, K);
    out << "simes = " << fmt_short(value) << "\n";
    out << "corrected p-value = " << fmt_short(corrected) << " (factor "
        << fmt_short(factor) << ")\n";
    out << "bounds at alpha=" << fmt_short(alpha) << ": tilde_s=" << fmt_short(bounds.tilde_s)
        << ", additive=" << fmt_short(bounds.additive_general)
        << ", hommel=" << fmt_short(bounds.hommel) << "\n";
    JsonWriter w;
    w.field("schema_version", 1)
        .field("command", "merge")
        .field("method", "simes")
        .field("K", K)
        .field("value", value)
        .field("correction_factor", factor)
        .field("corrected_p", corrected)
        .raw("bounds", bounds_json(bounds));
    emit_record(w.str(), out_path, out);
    return kExitOk;
  }

  if (method == "weighted-simes") {
    std::vector<double> weights;
    if (!weights_arg.empty()) {
      weights = parse_double_list(weights_arg, "--weights");
    } else if (table.has_weight()) {
      weights = table.weight;
    } else {
      throw InputError("weighted-simes needs --weights or a weight column");
    }
    const WeightVector w_vec(weights);  // validates the simplex (exit 3 on violation)
    const double value = weighted_simes(p, w_vec);
    const double factor = std::min(kSimesFactorAllAlpha, harmonic_ell(K));
    const double corrected = std::min(factor * value, 1.0);
    const SimesBoundReport bounds = bound_report(alpha, K);
    out << "weighted simes = " << fmt_short(value) << "\n";
    out << "corrected p-value = " << fmt_short(corrected) << " (factor "
        << fmt_short(factor) << ")\n";
    JsonWriter w;
    w.field("schema_version", 1)
        .field("command", "merge")
        .field("method", "weighted-simes")
        .field("K", K)
        .raw("weights", json_array(weights))
        .field("value", value)
        .field("correction_factor", factor)
        .field("corrected_p", corrected)
        .raw("bounds", bounds_json(bounds));
    emit_record(w.str(), out_path, out);
    return kExitOk;
  }

  if (method == "simes-of-simes") {
    GroupPartition groups = [&] {
      if (!groups_arg.empty()) {
        return GroupPartition::from_labels(split(groups_arg, ','));
      }
      if (table.has_group()) return GroupPartition::from_labels(table.group);
      throw InputError("simes-of-simes needs --groups or a group column");
    }();
    if (groups.covered_count() != K) {
      throw InputError("group labels must cover every row exactly once");
    }
    const SimesOfSimesResult r = simes_of_simes(p, groups);
    const double corrected = std::min(r.na_factor() * r.value, 1.0);
    out << "simes-of-simes = " << fmt_short(r.value) << "\n";
    out << "group values =";
    for (double g : r.group_values) out << " " << fmt_short(g);
    out << "\n";
    out << "corrected p-value = " << fmt_short(corrected) << " (conservative factor "
        << fmt_short(r.na_factor()) << "; total-K reading "
        << fmt_short(r.na_factor_total) << ", group-count reading "
        << fmt_short(r.na_factor_groups) << "; PRD factor 1; small-alpha factor "
        << fmt_short(kNestedSimesSmallAlphaFactor) << " below alpha="
        << fmt_short(kNestedSimesSmallAlphaMax) << ")\n";
    JsonWriter w;
    w.field("schema_version", 1)
        .field("command", "merge")
        .field("method", "simes-of-simes")
        .field("K", K)
        .field("groups", groups.group_count())
        .field("value", r.value)
        .raw("group_values", json_array(r.group_values))
        .field("na_factor_total", r.na_factor_total)
        .field("na_factor_groups", r.na_factor_groups)
        .field("na_factor", r.na_factor())
        .field("prd_factor", r.prd_factor)
        .field("small_alpha_factor", kNestedSimesSmallAlphaFactor)
        .field("corrected_p", corrected);
    emit_record(w.str(), out_path, out);
    return kExitOk;
  }

  throw InputError("unknown merge method: " + method);
}

// ---------------------------------------------------------------------------
// bh

int cmd_bh(const std::string& input, double alpha, const std::string& correction,
           bool use_groups, const std::string& out_path, std::ostream& out) {
  const InputTable table = read_input_table(input);
  if (!table.has_p()) throw InputError("bh requires a p column");
  const PVector p(table.p);
  const int K = p.size();

  RejectionSet rejection;
  if (correction == "none") {
    rejection = bh(p, alpha);
  } else if (correction == "by") {
    rejection = by(p, alpha);
  } else {
    throw InputError("unknown correction: " + correction + " (expected none or by)");
  }

  std::optional<NullMask> mask;
  if (table.has_null()) mask.emplace(table.is_null);
  const FdrBoundReport bounds =
      bh_fdr_bound_negdep(alpha, K, mask.has_value() ? &*mask : nullptr);

  if (rejection.k_star == 0) {
    out << "no discoveries (k* = 0)\n";
  } else {
    out << "k* = " << rejection.k_star << "\n";
    out << "rejected:";
    for (int idx : rejection.rejected) out << " " << idx;
    out << "\n";
  }
  out << "fdr bound at alpha=" << fmt_short(alpha) << ": "
      << fmt_short(bounds.combined) << " (su_neg=" << fmt_short(bounds.su_neg_bound)
      << ", hommel=" << fmt_short(bounds.hommel_bound) << ")\n";

  JsonWriter w;
  w.field("schema_version", 1)
      .field("command", "bh")
      .field("correction", correction)
      .field("alpha", alpha)
      .field("K", K)
      .field("k_star", rejection.k_star)
      .raw("rejected", json_array(rejection.rejected))
      .raw("fdr_bounds", fdr_bounds_json(bounds));

  if (use_groups) {
    if (!table.has_group()) throw InputError("--groups requires a group column");
    const GroupPartition groups = GroupPartition::from_labels(table.group);
    const GroupBhResult g = group_simes_bh(p, groups, alpha);
    out << "group k* = " << g.rejected_groups.k_star << "\n";
    out << "rejected groups:";
    for (int idx : g.rejected_groups.rejected) out << " " << idx;
    out << "\n";
    out << "group-level guarantees: NA " << fmt_short(g.na_guarantee) << ", PRDS "
        << fmt_short(g.prds_guarantee) << "\n";
    w.raw("group_simes", json_array(g.group_simes))
        .field("group_k_star", g.rejected_groups.k_star)
        .raw("rejected_groups", json_array(g.rejected_groups.rejected))
        .field("na_guarantee", g.na_guarantee)
        .field("prds_guarantee", g.prds_guarantee);
  }
  emit_record(w.str(), out_path, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// merge-e

std::vector<std::pair<std::vector<int>, double>> parse_convex_terms(const std::string& arg) {
  // "1,2:0.4;3:0.4;:0.2" -- subsets of 1-based indices, empty subset allowed.
  std::vector<std::pair<std::vector<int>, double>> terms;
  for (const std::string& piece : split(arg, ';')) {
    const auto colon = piece.find(':');
    if (colon == std::string::npos) {
      throw InputError("--terms: each term needs 'indices:weight'");
    }
    std::vector<int> subset;
    const std::string idx_part = trim(piece.substr(0, colon));
    if (!idx_part.empty()) {
      for (const std::string& f : split(idx_part, ',')) {
        subset.push_back(static_cast<int>(parse_number(f, 0)));
      }
    }
    terms.emplace_back(std::move(subset), parse_number(trim(piece.substr(colon + 1)), 0));
  }
  return terms;
}

int cmd_merge_e(const std::string& input, const std::string& method,
                const std::string& lambdas_arg, const std::string& terms_arg,
                const std::string& out_path, std::ostream& out) {
  const InputTable table = read_input_table(input);
  if (!table.has_e()) throw InputError("merge-e requires an e column");
  const EVector e(table.e);  // negative entries throw (exit 3)
  const int K = e.size();

  double value = 0.0;
  if (method == "product") {
    std::vector<int> full(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) full[static_cast<std::size_t>(i)] = i + 1;
    value = product_e(e, full);
  } else if (method == "average") {
    value = average_e(e);
  } else if (method == "lambda") {
    if (lambdas_arg.empty()) throw InputError("lambda merge needs --lambdas");
    std::vector<double> lambdas = parse_double_list(lambdas_arg, "--lambdas");
    if (lambdas.size() == 1) lambdas.assign(static_cast<std::size_t>(K), lambdas.front());
    value = lambda_product(e, lambdas);
  } else if (method.rfind("ustat:", 0) == 0) {
    const int order = static_cast<int>(parse_number(method.substr(6), 0));
    value = u_statistic(e, order);
  } else if (method == "convex") {
    if (terms_arg.empty()) throw InputError("convex merge needs --terms");
    value = convex_combo(e, parse_convex_terms(terms_arg));
  } else {
    throw InputError("unknown merge-e method: " + method);
  }

  const double implied_p = value > 0.0 ? std::min(1.0, 1.0 / value) : 1.0;
  out << "merged e-value = " << fmt_short(value) << "\n";
  out << "implied p-value (1/e) = " << fmt_short(implied_p) << "\n";
  JsonWriter w;
  w.field("schema_version", 1)
      .field("command", "merge-e")
      .field("method", method)
      .field("K", K)
      .field("value", value)
      .field("implied_p", implied_p);
  emit_record(w.str(), out_path, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bounds

int cmd_bounds(double alpha, int K, const std::string& which, bool paper_tables,
               const std::string& out_dir, std::ostream& out) {
  if (paper_tables) {
    const PaperTable t1 = reproduce_table1();
    const PaperTable t2 = reproduce_table2();
    out << "# simes bound table\n" << t1.csv() << "# fdr bound table\n" << t2.csv();
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      for (const auto& [name, table] : {std::pair{"table1.csv", &t1}, {"table2.csv", &t2}}) {
        const std::filesystem::path path = std::filesystem::path(out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw InputError("cannot open output file: " + path.string());
        f << table->csv();
      }
    }
    return kExitOk;
  }

  JsonWriter w;
  w.field("schema_version", 1).field("command", "bounds").field("alpha", alpha).field("K", K);
  if (which == "simes" || which == "all") {
    const SimesBoundReport r = bound_report(alpha, K);
    out << "simes bounds at alpha=" << fmt_short(alpha) << ", K=" << K << ":\n";
    out << "  additive_general = " << fmt_short(r.additive_general) << "\n";
    out << "  tilde_s          = " << fmt_short(r.tilde_s) << "\n";
    if (r.cubic.has_value()) out << "  cubic            = " << format_double(*r.cubic) << "\n";
    out << "  hommel (ell_K a) = " << fmt_short(r.hommel) << "\n";
    out << "  combined         = " << fmt_short(r.combined()) << "\n";
    w.raw("simes", bounds_json(r));
  }
  if (which == "fdr" || which == "all") {
    const FdrBoundReport r = bh_fdr_bound_negdep(alpha, K);
    const K2BoundValue k2 = bh_fdr_bound_k2(alpha);
    out << "fdr bounds at alpha=" << fmt_short(alpha) << ", K=" << K << ":\n";
    out << "  su_neg   = " << fmt_short(r.su_neg_bound) << "\n";
    out << "  hommel   = " << fmt_short(r.hommel_bound) << "\n";
    out << "  combined = " << fmt_short(r.combined) << "\n";
    out << "  k2 form  = " << fmt_short(k2.raw) << " (clamped "
        << fmt_short(k2.clamped) << ", reported verbatim)\n";
    JsonWriter k2w;
    k2w.field("raw", k2.raw).field("clamped", k2.clamped);
    w.raw("fdr", fdr_bounds_json(r)).raw("fdr_k2", k2w.str());
  }
  if (which != "simes" && which != "fdr" && which != "all") {
    throw InputError("unknown --which: " + which + " (expected simes, fdr or all)");
  }
  emit_record(w.str(), "", out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

SamplerConfig sampler_from_json(const json& j) {
  SamplerConfig cfg;
  if (!j.contains("kind")) throw InputError("spec: sampler.kind is required");
  try {
    cfg.kind = sampler_kind_from_string(j.at("kind").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("spec: ") + e.what());
  }
  cfg.K = j.value("K", 0);
  if (j.contains("shift")) cfg.shift = j.at("shift").get<std::vector<double>>();
  if (j.contains("values")) cfg.values = j.at("values").get<std::vector<double>>();
  if (j.contains("bag")) cfg.bag = j.at("bag").get<std::vector<double>>();
  cfg.m = j.value("m", 0);
  cfg.rounds = j.value("rounds", 0);
  cfg.allow_mixed_signs = j.value("allow_mixed_signs", false);
  if (j.contains("sigma")) {
    const auto rows = j.at("sigma").get<std::vector<std::vector<double>>>();
    const int K = static_cast<int>(rows.size());
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(K) * K);
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != K) throw InputError("spec: sigma must be square");
      for (double v : row) entries.push_back(v);
    }
    cfg.sigma = CorrMatrix(K, std::move(entries));
    if (cfg.K == 0) cfg.K = K;
  } else if (j.contains("equicorrelation")) {
    if (cfg.K == 0) throw InputError("spec: equicorrelation needs K");
    cfg.sigma = CorrMatrix::equicorrelation(cfg.K, j.at("equicorrelation").get<double>());
  } else if (j.contains("random_nonpositive_seed")) {
    if (cfg.K == 0) throw InputError("spec: random_nonpositive_seed needs K");
    Rng rng(j.at("random_nonpositive_seed").get<std::uint64_t>(), fnv1a64("spec/corr"));
    cfg.sigma = make_random_nonpositive_corr(cfg.K, rng);
  }
  if (cfg.K == 0) {
    throw InputError("spec: sampler.K is required");
  }
  return cfg;
}

ExperimentSpec spec_from_json(const json& j, const RunOptions& opts) {
  ExperimentSpec spec;
  if (!j.contains("sampler")) throw InputError("spec: sampler is required");
  spec.sampler = sampler_from_json(j.at("sampler"));
  try {
    spec.procedure = procedure_from_string(j.value("procedure", "simes"));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("spec: ") + e.what());
  }
  spec.alpha = j.value("alpha", 0.05);
  spec.reps = opts.reps_override > 0 ? opts.reps_override : j.value("reps", std::int64_t{100000});
  spec.seed.seed = opts.seed;
  if (j.contains("seed")) {
    spec.seed.seed = j.at("seed").value("seed", opts.seed);
    spec.seed.stream_id = j.at("seed").value("stream", std::uint64_t{0});
  }
  spec.threads = opts.threads;
  if (j.contains("weights")) {
    spec.weights = WeightVector(j.at("weights").get<std::vector<double>>());
  }
  if (j.contains("groups")) {
    spec.groups = GroupPartition(j.at("groups").get<std::vector<std::vector<int>>>());
  }
  if (j.contains("null_mask")) {
    spec.null_mask = NullMask(j.at("null_mask").get<std::vector<bool>>());
  }
  if (j.contains("pipeline")) {
    const json& p = j.at("pipeline");
    spec.pipeline.kappa = p.value("kappa", 0.7);
    const std::string method = p.value("method", "product");
    if (method == "product") spec.pipeline.method = MergeMethod::product;
    else if (method == "lambda") spec.pipeline.method = MergeMethod::lambda;
    else if (method == "ustat") spec.pipeline.method = MergeMethod::ustat;
    else if (method == "average") spec.pipeline.method = MergeMethod::average;
    else if (method == "convex") spec.pipeline.method = MergeMethod::convex;
    else throw InputError("spec: unknown pipeline method " + method);
    spec.pipeline.ustat_order = p.value("order", 2);
    if (p.contains("lambdas")) {
      spec.pipeline.lambdas = p.at("lambdas").get<std::vector<double>>();
    }
    if (p.contains("convex_terms")) {
      for (const auto& term : p.at("convex_terms")) {
        spec.pipeline.convex_terms.emplace_back(
            term.value("subset", std::vector<int>{}), term.at("weight").get<double>());
      }
    }
  }
  return spec;
}

int cmd_simulate(const std::string& scenario_arg, const std::string& spec_path,
                 std::int64_t reps, std::uint64_t seed, int threads,
                 const std::string& out_path, const std::string& csv_path, bool list_only,
                 std::ostream& out) {
  if (list_only) {
    for (const auto& s : scenario_catalog()) {
      out << s.name << (s.exploratory ? " [exploratory]" : "") << " - " << s.description
          << "\n";
    }
    return kExitOk;
  }

  RunOptions opts;
  opts.reps_override = reps;
  opts.seed = seed;
  opts.threads = threads;

  std::vector<ScenarioResult> results;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw InputError("cannot open spec file: " + spec_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("spec JSON parse error: ") + e.what());
    }
    results.push_back(run_experiment(spec_from_json(j, opts)));
  } else if (scenario_arg == "all") {
    for (const std::string& name : all_scenario_names()) {
      results.push_back(find_scenario(name)->run(opts));
    }
  } else {
    const Scenario* s = find_scenario(scenario_arg);
    if (s == nullptr) throw InputError("unknown scenario: " + scenario_arg);
    results.push_back(s->run(opts));
  }

  std::string records;
  std::string csv = std::string(kVerificationCsvHeader) + "\n";
  int passed = 0;
  int failed = 0;
  int informational = 0;
  for (const auto& sr : results) {
    for (const auto& check : sr.checks) {
      records += verification_json(sr.name, check);
      records += '\n';
      csv += verification_csv_row(sr.name, check);
      csv += '\n';
      if (check.exploratory) {
        ++informational;
      } else if (check.pass) {
        ++passed;
      } else {
        ++failed;
      }
      out << (check.exploratory ? "[info] " : check.pass ? "[PASS] " : "[FAIL] ") << sr.name
          << "/" << check.name << ": estimate=" << fmt_short(check.estimate.estimate)
          << " se=" << fmt_short(check.estimate.std_error)
          << (check.direction == CheckDirection::upper ? " <= " : " >= ")
          << fmt_short(check.bound) << " [" << check.bound_name << "]"
          << (check.reran_at_10x ? " (reran at 10x reps)" : "") << "\n";
    }
  }

  if (out_path.empty()) {
    out << records;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InputError("cannot open output file: " + out_path);
    f << records;
  }
  if (!csv_path.empty()) {
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw InputError("cannot open output file: " + csv_path);
    f << csv;
  }

  out << "summary: " << passed << " passed, " << failed << " failed";
  if (informational > 0) out << ", " << informational << " informational";
  out << "\n";
  return failed == 0 ? kExitOk : kExitVerificationFailure;
}

int default_threads() {
  if (const char* env = std::getenv("NEGDEP_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"negdep: multiple testing under negative dependence"};
  app.require_subcommand(1);

  // merge
  auto* merge = app.add_subcommand("merge", "Combine p-values (Simes family)");
  std::string merge_method;
  std::string merge_input;
  std::string merge_weights;
  std::string merge_groups;
  std::string merge_out;
  double merge_alpha = 0.05;
  merge->add_option("method", merge_method, "simes | weighted-simes | simes-of-simes")
      ->required();
  merge->add_option("--input", merge_input, "CSV or JSON input file")->required();
  merge->add_option("--alpha", merge_alpha, "level for the bound report (default 0.05)");
  merge->add_option("--weights", merge_weights, "comma-separated weights (else weight column)");
  merge->add_option("--groups", merge_groups, "comma-separated group labels (else group column)");
  merge->add_option("--out", merge_out, "also write the JSON record here");

  // bh
  auto* bh_cmd = app.add_subcommand("bh", "BH / BY step-up procedure");
  std::string bh_input;
  std::string bh_correction = "none";
  std::string bh_out;
  double bh_alpha = 0.0;
  bool bh_groups = false;
  bh_cmd->add_option("--input", bh_input, "CSV or JSON input file")->required();
  bh_cmd->add_option("--alpha", bh_alpha, "target FDR level in (0,1)")->required();
  bh_cmd->add_option("--correction", bh_correction, "none | by (default none)");
  bh_cmd->add_flag("--groups", bh_groups, "also run Simes-per-group + BH on the group column");
  bh_cmd->add_option("--out", bh_out, "also write the JSON record here");

  // merge-e
  auto* me = app.add_subcommand("merge-e", "Combine e-values");
  std::string me_input;
  std::string me_method;
  std::string me_lambdas;
  std::string me_terms;
  std::string me_out;
  me->add_option("--input", me_input, "CSV or JSON input file")->required();
  me->add_option("--method", me_method, "product | lambda | ustat:k | average | convex")
      ->required();
  me->add_option("--lambdas", me_lambdas, "lambda list for the lambda merge (single value broadcasts)");
  me->add_option("--terms", me_terms, "convex terms, e.g. '1,2:0.4;3:0.4;:0.2'");
  me->add_option("--out", me_out, "also write the JSON record here");

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "Anti-conservativeness bound reports");
  double bounds_alpha = 0.05;
  int bounds_K = 100;
  std::string bounds_which = "all";
  std::string bounds_out;
  bool paper_tables = false;
  bounds_cmd->add_option("--alpha", bounds_alpha, "level in (0,1) (default 0.05)");
  bounds_cmd->add_option("--K", bounds_K, "number of hypotheses (default 100)");
  bounds_cmd->add_option("--which", bounds_which, "simes | fdr | all (default all)");
  bounds_cmd->add_flag("--paper-tables", paper_tables,
                       "emit the reference bound tables as byte-stable CSV");
  bounds_cmd->add_option("--out", bounds_out, "directory for table1.csv / table2.csv");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run verification scenarios");
  std::string sim_scenario;
  std::string sim_spec;
  std::string sim_out;
  std::string sim_csv;
  std::int64_t sim_reps = 0;
  std::uint64_t sim_seed = 42;
  int sim_threads = default_threads();
  bool sim_list = false;
  sim->add_option("--scenario", sim_scenario, "scenario name, or 'all'");
  sim->add_option("--spec", sim_spec, "JSON experiment spec file");
  sim->add_option("--reps", sim_reps, "override replication count");
  sim->add_option("--seed", sim_seed, "base seed (default 42)");
  sim->add_option("--threads", sim_threads, "worker threads (default $NEGDEP_THREADS or 1)");
  sim->add_option("--out", sim_out, "write JSON records (one per check) here");
  sim->add_option("--csv", sim_csv, "write the flat CSV results table here");
  sim->add_flag("--list", sim_list, "list available scenarios and exit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (merge->parsed()) {
      return cmd_merge(merge_method, merge_input, merge_alpha, merge_weights, merge_groups,
                       merge_out, out);
    }
    if (bh_cmd->parsed()) {
      return cmd_bh(bh_input, bh_alpha, bh_correction, bh_groups, bh_out, out);
    }
    if (me->parsed()) {
      return cmd_merge_e(me_input, me_method, me_lambdas, me_terms, me_out, out);
    }
    if (bounds_cmd->parsed()) {
      return cmd_bounds(bounds_alpha, bounds_K, bounds_which, paper_tables, bounds_out, out);
    }
    if (sim->parsed()) {
      if (!sim_list && sim_scenario.empty() && sim_spec.empty()) {
        throw InputError("simulate needs --scenario, --spec or --list");
      }
      if (sim_threads < 1) throw std::domain_error("--threads must be >= 1");
      return cmd_simulate(sim_scenario, sim_spec, sim_reps, sim_seed, sim_threads, sim_out,
                          sim_csv, sim_list, out);
    }
    err << "error: no subcommand\n";
    return kExitInputError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::invalid_argument& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::out_of_range& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
}

}  // namespace negdep::cli
