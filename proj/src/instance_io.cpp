#include "dikin/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

namespace dikin {

std::string format_double(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

namespace {

bool all_scalars(const Json& j) {
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

// Numeric vectors and matrices are written on a single line.
bool inline_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (e.is_object()) return false;
    if (e.is_array() && !all_scalars(e)) return false;
  }
  return true;
}

void write_scalar(const Json& j, std::string& out) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    out += std::isfinite(v) ? format_double(v) : "null";
  } else {
    out += j.dump();
  }
}

void write_value(const Json& j, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      out += Json(it.key()).dump();
      out += ": ";
      write_value(it.value(), depth + 1, out);
    }
    out += "\n" + close_pad + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (inline_array(j)) {
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ", ";
        first = false;
        if (e.is_array()) {
          write_value(e, depth + 1, out);
        } else {
          write_scalar(e, out);
        }
      }
      out += "]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      write_value(e, depth + 1, out);
    }
    out += "\n" + close_pad + "]";
  } else {
    write_scalar(j, out);
  }
}

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::ParseError, what);
}

const nlohmann::json& field(const nlohmann::json& obj, const char* key,
                            const std::string& where) {
  if (!obj.is_object()) parse_fail(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    parse_fail(where + ": missing field \"" + key + "\"");
  }
  return *it;
}

double number(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where + ": expected a number");
  return j.get<double>();
}

VectorXd vector_from(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where + ": expected an array");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

MatrixXd matrix_from(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  MatrixXd m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    const VectorXd row = vector_from(j[static_cast<std::size_t>(r)], row_where);
    if (row.size() != rows) {
      parse_fail(row_where + ": row has " + std::to_string(row.size()) +
                 " entries, expected " + std::to_string(rows));
    }
    m.row(r) = row.transpose();
  }
  return m;
}

std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::string write_json(const Json& j) {
  std::string out;
  write_value(j, 0, out);
  out += "\n";
  return out;
}

Json to_json(const VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(to_json(VectorXd(m.row(r).transpose())));
  }
  return out;
}

Json instance_to_json(const ProblemInstance& problem) {
  Json j;
  j["n"] = problem.declared_dim != 0 ? problem.declared_dim : problem.dim();
  j["objective"] = {{"Q", to_json(problem.objective.Q.matrix())},
                    {"c", to_json(problem.objective.c)}};
  Json cons = Json::array();
  for (const auto& con : problem.feasible_set.constraints()) {
    cons.push_back(
        {{"Q", to_json(con.Q.matrix())}, {"c", to_json(con.c)}, {"d", con.d}});
  }
  j["constraints"] = std::move(cons);
  if (problem.interior_hint) {
    j["interior_hint"] = to_json(*problem.interior_hint);
  }
  return j;
}

ProblemInstance instance_from_json(const nlohmann::json& j) {
  const auto& n_field = field(j, "n", "instance");
  if (!n_field.is_number_integer() || n_field.get<long long>() <= 0) {
    parse_fail("instance: \"n\" must be a positive integer");
  }
  const auto declared = static_cast<Eigen::Index>(n_field.get<long long>());

  const auto& obj = field(j, "objective", "instance");
  QuadraticObjective objective{
      SymmetricMatrix(matrix_from(field(obj, "Q", "objective"), "objective.Q")),
      vector_from(field(obj, "c", "objective"), "objective.c")};
  if (objective.c.size() != objective.Q.dim()) {
    parse_fail("objective: Q is " + std::to_string(objective.Q.dim()) +
               "-dimensional but c has " + std::to_string(objective.c.size()) +
               " entries");
  }

  const auto& cons = field(j, "constraints", "instance");
  if (!cons.is_array() || cons.empty()) {
    parse_fail("instance: \"constraints\" must be a non-empty array");
  }
  std::vector<EllipsoidConstraint> constraints;
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const std::string where = "constraints[" + std::to_string(i) + "]";
    EllipsoidConstraint con{
        SymmetricMatrix(matrix_from(field(cons[i], "Q", where), where + ".Q")),
        vector_from(field(cons[i], "c", where), where + ".c"),
        number(field(cons[i], "d", where), where + ".d")};
    if (con.c.size() != con.Q.dim()) {
      parse_fail(where + ": Q is " + std::to_string(con.Q.dim()) +
                 "-dimensional but c has " + std::to_string(con.c.size()) +
                 " entries");
    }
    constraints.push_back(std::move(con));
  }

  std::optional<Intersection> set;
  try {
    set.emplace(std::move(constraints));
  } catch (const Error& e) {
    parse_fail(std::string("constraints: ") + e.what());
  }

  std::optional<VectorXd> hint;
  if (auto it = j.find("interior_hint"); it != j.end() && !it->is_null()) {
    hint = vector_from(*it, "interior_hint");
  }
  return ProblemInstance{std::move(objective), std::move(*set),
                         std::move(hint), declared};
}

ProblemInstance parse_instance(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(position(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
               e.what());
  }
  return instance_from_json(j);
}

ProblemInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string serialize_instance(const ProblemInstance& problem) {
  return write_json(instance_to_json(problem));
}

void write_instance(const ProblemInstance& problem,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  }
  out << serialize_instance(problem);
}

std::string instance_digest(const ProblemInstance& problem) {
  const std::string text = serialize_instance(problem);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx.get(), text.data(), text.size());
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 0xF];
  }
  return hex;
}

}  // namespace dikin
