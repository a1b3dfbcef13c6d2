#include "seqdual/manifest.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "seqdual/errors.hpp"
#include "seqdual/opideal.hpp"

namespace seqdual {

namespace {

std::string dump_double(double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("cannot serialize a non-finite number");
  }
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void dump_rec(const nlohmann::json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      return;
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case nlohmann::json::value_t::number_integer: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%" PRId64, j.get<std::int64_t>());
      out += buf;
      return;
    }
    case nlohmann::json::value_t::number_unsigned: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%" PRIu64, j.get<std::uint64_t>());
      out += buf;
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += dump_double(j.get<double>());
      return;
    case nlohmann::json::value_t::string:
      out += nlohmann::json(j.get<std::string>()).dump();
      return;
    case nlohmann::json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        dump_rec(e, out);
      }
      out += ']';
      return;
    }
    case nlohmann::json::value_t::object: {
      // nlohmann objects iterate in key order, which is the canonical order.
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        dump_rec(it.value(), out);
      }
      out += '}';
      return;
    }
    default:
      throw std::invalid_argument("unsupported JSON value type");
  }
}

}  // namespace

std::string canonical_json_dump(const nlohmann::json& j) {
  std::string out;
  dump_rec(j, out);
  return out;
}

nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is the 1-based offset of the failure; recover line/column.
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    if (offset > text.size()) offset = text.size();
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    // nlohmann prefixes its own location; keep only the description part.
    std::string what = e.what();
    const std::size_t mark = what.find("] parse error");
    if (mark != std::string::npos) {
      const std::size_t colon = what.find(": ", mark);
      if (colon != std::string::npos) what = what.substr(colon + 2);
    }
    throw ParseError("JSON parse error at line " + std::to_string(line) +
                         ", column " + std::to_string(column) + ": " + what,
                     line, column);
  }
}

namespace {

const nlohmann::json& named_entry(const nlohmann::json& table,
                                  const std::string& section,
                                  const std::string& name) {
  if (!table.is_object() || !table.contains(name)) {
    throw std::invalid_argument("manifest: unknown " + section + " '" + name +
                                "'");
  }
  return table.at(name);
}

std::string ref_field(const nlohmann::json& task, const char* field) {
  if (!task.contains(field) || !task.at(field).is_string()) {
    throw std::invalid_argument(std::string("manifest task needs a string '") +
                                field + "' field");
  }
  return task.at(field).get<std::string>();
}

nlohmann::json cert_json(const NormCert& cert) {
  nlohmann::json r{{"value", cert.value},
                   {"method", to_string(cert.method)},
                   {"bound", to_string(cert.bound)}};
  if (!cert.note.empty()) r["note"] = cert.note;
  return r;
}

}  // namespace

nlohmann::json run_manifest(const nlohmann::json& manifest,
                            const OptConfig& cfg) {
  if (!manifest.is_object()) {
    throw std::invalid_argument("manifest must be a JSON object");
  }
  if (!manifest.contains("version") ||
      !manifest.at("version").is_number_integer() ||
      manifest.at("version").get<int>() != 1) {
    throw std::invalid_argument("manifest needs \"version\": 1");
  }
  const nlohmann::json empty = nlohmann::json::object();
  const nlohmann::json& spaces =
      manifest.contains("spaces") ? manifest.at("spaces") : empty;
  const nlohmann::json& sequences =
      manifest.contains("sequences") ? manifest.at("sequences") : empty;
  const nlohmann::json& operators =
      manifest.contains("operators") ? manifest.at("operators") : empty;

  const auto load_space = [&](const std::string& name) {
    return Space::from_json(named_entry(spaces, "space", name));
  };
  const auto load_seq = [&](const std::string& name) {
    const nlohmann::json& entry = named_entry(sequences, "sequence", name);
    if (!entry.is_object() || !entry.contains("space") ||
        !entry.contains("vectors")) {
      throw std::invalid_argument("manifest sequence '" + name +
                                  "' needs space and vectors fields");
    }
    const Space E = load_space(entry.at("space").get<std::string>());
    nlohmann::json embedded{{"space", E.to_json()},
                            {"vectors", entry.at("vectors")}};
    return VecSeq::from_json(embedded);
  };
  const auto load_op = [&](const std::string& name) {
    const nlohmann::json& entry = named_entry(operators, "operator", name);
    if (!entry.is_object() || !entry.contains("domain") ||
        !entry.contains("codomain") || !entry.contains("matrix")) {
      throw std::invalid_argument("manifest operator '" + name +
                                  "' needs domain, codomain, matrix fields");
    }
    nlohmann::json embedded{
        {"domain",
         load_space(entry.at("domain").get<std::string>()).to_json()},
        {"codomain",
         load_space(entry.at("codomain").get<std::string>()).to_json()},
        {"matrix", entry.at("matrix")}};
    return LinOp::from_json(embedded);
  };

  nlohmann::json results = nlohmann::json::array();
  if (manifest.contains("tasks")) {
    if (!manifest.at("tasks").is_array()) {
      throw std::invalid_argument("manifest tasks must be an array");
    }
    for (const auto& task : manifest.at("tasks")) {
      const std::string kind = ref_field(task, "task");
      nlohmann::json row{{"task", kind}};
      if (kind == "norm" || kind == "dualnorm") {
        ClassId cls = ClassId::parse(ref_field(task, "class"));
        if (kind == "dualnorm" && cls.kind() != ClassKind::Dual) {
          cls = ClassId::dual_of(cls);
        }
        const VecSeq x = load_seq(ref_field(task, "sequence"));
        row["class"] = cls.str();
        row.update(cert_json(norm_of(cls, x, cfg)));
      } else if (kind == "opnorm") {
        const ClassId X = ClassId::parse(ref_field(task, "x"));
        const ClassId Y = ClassId::parse(ref_field(task, "y"));
        const LinOp T = load_op(ref_field(task, "operator"));
        const int k = task.contains("k") ? task.at("k").get<int>() : 1;
        row["k"] = k;
        row.update(cert_json(summing_norm(X, Y, T, k, cfg)));
      } else if (kind == "adjoint-report") {
        const ClassId X = ClassId::parse(ref_field(task, "x"));
        const ClassId Y = ClassId::parse(ref_field(task, "y"));
        const LinOp T = load_op(ref_field(task, "operator"));
        const int k = task.contains("k") ? task.at("k").get<int>() : 1;
        const bool reverse =
            task.contains("reverse") && task.at("reverse").get<bool>();
        const AdjointReport rep =
            reverse ? reverse_duality_report(X, Y, T, k, cfg)
                    : adjoint_duality_report(X, Y, T, k, cfg);
        row["k"] = k;
        row["reverse"] = reverse;
        row.update(rep.to_json());
      } else {
        throw std::invalid_argument("manifest: unknown task kind '" + kind +
                                    "'");
      }
      results.push_back(std::move(row));
    }
  }
  return nlohmann::json{{"version", 1}, {"results", std::move(results)}};
}

}  // namespace seqdual
