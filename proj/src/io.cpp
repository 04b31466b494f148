#include "scobb/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace scobb {

namespace {

using json = nlohmann::json;

// nlohmann prints doubles at shortest-round-trip length; the file format
// pins fixed 17-significant-digit formatting instead, so dumping is done by
// this small canonical writer (keys are already sorted by the ordered map).
void dump_canonical(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + "  " + json(it.key()).dump() + ": ";
        dump_canonical(it.value(), out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ", ";
        first = false;
        dump_canonical(v, out, indent);
      }
      out += "]";
      return;
    }
    case json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

json vec_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json mat_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i)));
  return rows;
}

class FieldReader {
 public:
  FieldReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  const json& get(const std::string& key) const {
    auto it = j_.find(key);
    if (it == j_.end()) fail("missing field '" + key + "'");
    return *it;
  }

  double number(const std::string& key) const {
    const json& v = get(key);
    if (!v.is_number()) fail("field '" + key + "' must be a number");
    return v.get<double>();
  }

  Vector vector(const std::string& key) const {
    const json& v = get(key);
    if (!v.is_array()) fail("field '" + key + "' must be an array");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail("field '" + key + "' must contain numbers only");
      out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    }
    return out;
  }

  Matrix matrix(const std::string& key) const {
    const json& v = get(key);
    if (!v.is_array() || v.empty()) fail("field '" + key + "' must be a non-empty array of rows");
    const std::size_t n = v.size();
    Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (!v[i].is_array() || v[i].size() != n) fail("field '" + key + "' must be a square matrix");
      for (std::size_t k = 0; k < n; ++k) {
        if (!v[i][k].is_number()) fail("field '" + key + "' must contain numbers only");
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[i][k].get<double>();
      }
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("instance file: at " + path_ + ": " + what);
  }

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

json quadform_to_json(const QuadForm& f) {
  return json{{"Q", mat_to_json(f.Q.mat())}, {"q", vec_to_json(f.q)}, {"c", f.c}};
}

QuadForm quadform_from_json(const json& j, const std::string& path) {
  FieldReader r(j, path);
  return QuadForm(SymMatrix(r.matrix("Q")), r.vector("q"), r.number("c"));
}

}  // namespace

QcqpInstance InstanceFile::to_qcqp() const {
  if (liquidation.has_value()) return build_qcqp(*liquidation);
  if (general.has_value()) return *general;
  throw std::invalid_argument("instance file holds neither a liquidation nor a general payload");
}

std::string serialize_instance(const InstanceFile& file) {
  json j;
  j["schema_version"] = file.schema_version;
  if (file.liquidation.has_value() == file.general.has_value()) {
    throw std::invalid_argument("instance file must hold exactly one of liquidation/general");
  }
  if (file.liquidation) {
    const LiquidationParams& p = *file.liquidation;
    j["liquidation"] = json{{"m", p.m},
                            {"lambda", vec_to_json(p.lambda)},
                            {"gamma", vec_to_json(p.gamma)},
                            {"p0", vec_to_json(p.p0)},
                            {"x0", vec_to_json(p.x0)},
                            {"e0", p.e0},
                            {"l0", p.l0},
                            {"rho1", p.rho1},
                            {"rho2", p.rho2},
                            {"pi", p.pi},
                            {"delta", p.delta}};
  } else {
    const QcqpInstance& q = *file.general;
    json cons = json::array();
    for (const auto& g : q.constraints) cons.push_back(quadform_to_json(g));
    json lins = json::array();
    for (const auto& li : q.linear_ineqs) {
      lins.push_back(json{{"a", vec_to_json(li.a)}, {"b", li.b}});
    }
    j["general"] = json{{"objective", quadform_to_json(q.objective)},
                        {"constraints", cons},
                        {"lower", vec_to_json(q.lower)},
                        {"upper", vec_to_json(q.upper)},
                        {"linear_ineqs", lins}};
  }
  if (!file.provenance.empty()) {
    json prov;
    for (const auto& [k, v] : file.provenance) prov[k] = v;
    j["provenance"] = prov;
  }
  std::string out;
  dump_canonical(j, out, 0);
  out += "\n";
  return out;
}

InstanceFile parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("instance file: ") + e.what());
  }
  FieldReader root(j, "/");
  InstanceFile file;
  const json& ver = root.get("schema_version");
  if (!ver.is_string()) root.fail("field 'schema_version' must be a string");
  file.schema_version = ver.get<std::string>();

  const bool has_liq = j.contains("liquidation");
  const bool has_gen = j.contains("general");
  if (has_liq == has_gen) {
    root.fail("exactly one of 'liquidation'/'general' must be present");
  }
  if (has_liq) {
    FieldReader r(root.get("liquidation"), "/liquidation");
    LiquidationParams p;
    const json& mj = r.get("m");
    if (!mj.is_number_integer()) r.fail("field 'm' must be an integer");
    p.m = mj.get<int>();
    p.lambda = r.vector("lambda");
    p.gamma = r.vector("gamma");
    p.p0 = r.vector("p0");
    p.x0 = r.vector("x0");
    p.e0 = r.number("e0");
    p.l0 = r.number("l0");
    p.rho1 = r.number("rho1");
    p.rho2 = r.number("rho2");
    p.pi = r.number("pi");
    p.delta = r.number("delta");
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
    file.liquidation = std::move(p);
  } else {
    FieldReader r(root.get("general"), "/general");
    QcqpInstance q;
    q.objective = quadform_from_json(r.get("objective"), "/general/objective");
    const json& cons = r.get("constraints");
    if (!cons.is_array()) r.fail("field 'constraints' must be an array");
    for (std::size_t i = 0; i < cons.size(); ++i) {
      q.constraints.push_back(
          quadform_from_json(cons[i], "/general/constraints/" + std::to_string(i)));
    }
    q.lower = r.vector("lower");
    q.upper = r.vector("upper");
    if (r.raw().contains("linear_ineqs")) {
      const json& lins = r.get("linear_ineqs");
      if (!lins.is_array()) r.fail("field 'linear_ineqs' must be an array");
      for (std::size_t i = 0; i < lins.size(); ++i) {
        FieldReader lr(lins[i], "/general/linear_ineqs/" + std::to_string(i));
        LinearIneq li;
        li.a = lr.vector("a");
        li.b = lr.number("b");
        q.linear_ineqs.push_back(std::move(li));
      }
    }
    try {
      q.validate();
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
    file.general = std::move(q);
  }
  if (j.contains("provenance")) {
    const json& prov = root.get("provenance");
    if (!prov.is_object()) root.fail("field 'provenance' must be an object");
    for (auto it = prov.begin(); it != prov.end(); ++it) {
      file.provenance[it.key()] = it.value().is_string() ? it.value().get<std::string>()
                                                         : it.value().dump();
    }
  }
  return file;
}

void save_instance(const std::string& path, const InstanceFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << serialize_instance(file);
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

}  // namespace scobb
