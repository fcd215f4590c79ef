#include "mindev/model_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace mindev {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

[[noreturn]] void parse_fail(const std::string& text, const nlohmann::json::parse_error& e) {
  size_t byte = e.byte > 0 ? e.byte - 1 : 0;
  if (byte > text.size()) byte = text.size();
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream os;
  os << "parse error at line " << line << ", column " << col << ": " << e.what();
  fail(os.str());
}

const Json& require(const Json& obj, const std::string& ctx, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) fail("schema error: " + ctx + " is missing field \"" + field + "\"");
  return *it;
}

void reject_extras(const Json& obj, const std::string& ctx, std::set<std::string> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail("schema error: " + ctx + " has unknown field \"" + it.key() + "\"");
}

double num(const Json& v, const std::string& ctx) {
  if (!v.is_number()) fail("schema error: " + ctx + " must be a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) fail("schema error: " + ctx + " is not finite");
  return d;
}

std::vector<std::string> str_array(const Json& v, const std::string& ctx) {
  if (!v.is_array() || v.empty()) fail("schema error: " + ctx + " must be a non-empty array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) fail("schema error: " + ctx + "[" + std::to_string(i) + "] must be a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::vector<double> num_array(const Json& v, const std::string& ctx, size_t want) {
  if (!v.is_array() || v.size() != want)
    fail("schema error: " + ctx + " must be an array of " + std::to_string(want) + " numbers");
  std::vector<double> out(want);
  for (size_t i = 0; i < want; ++i) out[i] = num(v[i], ctx + "[" + std::to_string(i) + "]");
  return out;
}

// One renormalization pass per model: sums within the tolerance are scaled
// to exactly 1, anything further off is left for validation to report.
void renormalize(double* p, size_t count) {
  double sum = 0;
  for (size_t i = 0; i < count; ++i) sum += p[i];
  if (sum > 0 && std::abs(sum - 1.0) <= kNormTol && sum != 1.0)
    for (size_t i = 0; i < count; ++i) p[i] /= sum;
}

void check_unique(const std::vector<std::string>& labels, const std::string& ctx) {
  std::set<std::string> seen;
  for (const auto& s : labels)
    if (!seen.insert(s).second) fail("schema error: duplicate " + ctx + " label \"" + s + "\"");
}

void embed_report(const std::vector<std::string>& report) {
  if (report.empty()) return;
  std::string msg = "validation failed:";
  for (const auto& line : report) msg += "\n  - " + line;
  fail(msg);
}

}  // namespace

ModelSpec load_model_spec(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(text, e);
  }
  if (!doc.is_object()) fail("schema error: document root must be an object");
  reject_extras(doc, "document", {"signals", "states", "models", "p_xy", "learning", "loss"});

  ModelSpec spec;
  spec.obj.signals = str_array(require(doc, "document", "signals"), "\"signals\"");
  spec.obj.states = str_array(require(doc, "document", "states"), "\"states\"");

  const Json& models = require(doc, "document", "models");
  if (!models.is_array() || models.empty())
    fail("schema error: \"models\" must be a non-empty array");
  for (size_t k = 0; k < models.size(); ++k) {
    std::string ctx = "\"models\"[" + std::to_string(k) + "]";
    const Json& m = models[k];
    if (!m.is_object()) fail("schema error: " + ctx + " must be an object");
    reject_extras(m, ctx, {"label", "param"});
    const Json& label = require(m, ctx, "label");
    if (!label.is_string()) fail("schema error: " + ctx + ".label must be a string");
    spec.obj.models.push_back(label.get<std::string>());
    if (m.contains("param"))
      spec.obj.params.push_back(num(m["param"], ctx + ".param"));
    else
      spec.obj.params.push_back(std::nullopt);
  }
  check_unique(spec.obj.models, "model");

  size_t nx = spec.obj.signals.size(), ny = spec.obj.states.size(), nm = spec.obj.models.size();
  const Json& p_xy = require(doc, "document", "p_xy");
  if (!p_xy.is_object()) fail("schema error: \"p_xy\" must be an object");
  reject_extras(p_xy, "\"p_xy\"", std::set<std::string>(spec.obj.models.begin(), spec.obj.models.end()));
  spec.obj.p_xy.assign(nm * nx * ny, 0.0);
  for (size_t k = 0; k < nm; ++k) {
    std::string ctx = "\"p_xy\".\"" + spec.obj.models[k] + "\"";
    const Json& table = require(p_xy, "\"p_xy\"", spec.obj.models[k].c_str());
    if (!table.is_array() || table.size() != nx)
      fail("schema error: " + ctx + " must be an array of " + std::to_string(nx) + " rows");
    for (size_t i = 0; i < nx; ++i) {
      std::vector<double> row = num_array(table[i], ctx + "[" + std::to_string(i) + "]", ny);
      for (size_t j = 0; j < ny; ++j) spec.obj.p_xy[(k * nx + i) * ny + j] = row[j];
    }
    renormalize(&spec.obj.p_xy[k * nx * ny], nx * ny);
  }

  if (doc.contains("learning")) {
    const Json& learning = doc["learning"];
    if (!learning.is_object()) fail("schema error: \"learning\" must be an object");
    reject_extras(learning, "\"learning\"", {"values", "p_z"});
    spec.learn.values = str_array(require(learning, "\"learning\"", "values"), "\"learning\".values");
    size_t nz = spec.learn.values.size();
    const Json& p_z = require(learning, "\"learning\"", "p_z");
    if (!p_z.is_object()) fail("schema error: \"learning\".p_z must be an object");
    reject_extras(p_z, "\"learning\".p_z",
                  std::set<std::string>(spec.obj.models.begin(), spec.obj.models.end()));
    spec.learn.p_z.assign(nm * nz, 0.0);
    for (size_t k = 0; k < nm; ++k) {
      std::string ctx = "\"learning\".p_z.\"" + spec.obj.models[k] + "\"";
      std::vector<double> row =
          num_array(require(p_z, "\"learning\".p_z", spec.obj.models[k].c_str()), ctx, nz);
      for (size_t l = 0; l < nz; ++l) spec.learn.p_z[k * nz + l] = row[l];
      renormalize(&spec.learn.p_z[k * nz], nz);
    }
  } else {
    spec.learn = trivial_learning((int)nm);
  }

  if (doc.contains("loss")) {
    const Json& loss = doc["loss"];
    if (!loss.is_array() || loss.size() != ny)
      fail("schema error: \"loss\" must be an array of " + std::to_string(ny) + " rows");
    spec.loss.ny = (int)ny;
    spec.loss.w.assign(ny * ny, 0.0);
    for (size_t y = 0; y < ny; ++y) {
      std::vector<double> row = num_array(loss[y], "\"loss\"[" + std::to_string(y) + "]", ny);
      for (size_t yp = 0; yp < ny; ++yp) spec.loss.w[y * ny + yp] = row[yp];
    }
  } else {
    spec.loss = zero_one_loss((int)ny);
  }

  std::vector<std::string> report = validate_object(spec.obj);
  for (auto& line : validate_learning(spec.obj, spec.learn)) report.push_back(std::move(line));
  for (auto& line : validate_loss(spec.obj, spec.loss)) report.push_back(std::move(line));
  embed_report(report);
  return spec;
}

std::string emit_model_spec(const ModelSpec& spec) {
  const FiniteObject& obj = spec.obj;
  check_unique(obj.models, "model");
  size_t nx = obj.signals.size(), ny = obj.states.size(), nm = obj.models.size();

  Json doc;
  doc["signals"] = obj.signals;
  doc["states"] = obj.states;
  doc["models"] = Json::array();
  for (size_t k = 0; k < nm; ++k) {
    Json m;
    m["label"] = obj.models[k];
    if (obj.params[k]) m["param"] = *obj.params[k];
    doc["models"].push_back(std::move(m));
  }
  doc["p_xy"] = Json::object();
  for (size_t k = 0; k < nm; ++k) {
    Json table = Json::array();
    for (size_t i = 0; i < nx; ++i) {
      Json row = Json::array();
      for (size_t j = 0; j < ny; ++j) row.push_back(obj.p_xy[(k * nx + i) * ny + j]);
      table.push_back(std::move(row));
    }
    doc["p_xy"][obj.models[k]] = std::move(table);
  }
  doc["learning"] = Json::object();
  doc["learning"]["values"] = spec.learn.values;
  doc["learning"]["p_z"] = Json::object();
  size_t nz = spec.learn.values.size();
  for (size_t k = 0; k < nm; ++k) {
    Json row = Json::array();
    for (size_t l = 0; l < nz; ++l) row.push_back(spec.learn.p_z[k * nz + l]);
    doc["learning"]["p_z"][obj.models[k]] = std::move(row);
  }
  doc["loss"] = Json::array();
  for (int y = 0; y < spec.loss.ny; ++y) {
    Json row = Json::array();
    for (int yp = 0; yp < spec.loss.ny; ++yp) row.push_back(spec.loss.at(y, yp));
    doc["loss"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

std::string emit_strategy_doc(const FiniteObject& obj, const LearningData& ld, const Strategy& q) {
  if (!q.dense()) fail("emit_strategy_doc: strategy must be dense");
  check_unique(obj.signals, "signal");
  check_unique(ld.values, "learning value");
  Json doc;
  for (int x = 0; x < q.nx; ++x) {
    Json per_z;
    for (int z = 0; z < q.nz; ++z) {
      Json row = Json::array();
      for (int yp = 0; yp < q.ny; ++yp) row.push_back(q.q(x, z, yp));
      per_z[ld.values[(size_t)z]] = std::move(row);
    }
    doc[obj.signals[(size_t)x]] = std::move(per_z);
  }
  return doc.dump(2) + "\n";
}

Strategy load_strategy_doc(const std::string& text, const FiniteObject& obj,
                           const LearningData& ld) {
  check_unique(obj.signals, "signal");
  check_unique(ld.values, "learning value");
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(text, e);
  }
  if (!doc.is_object()) fail("schema error: strategy document root must be an object");

  std::unordered_map<std::string, int> x_index, z_index;
  for (int x = 0; x < obj.nx(); ++x) x_index[obj.signals[(size_t)x]] = x;
  for (int z = 0; z < ld.nz(); ++z) z_index[ld.values[(size_t)z]] = z;
  reject_extras(doc, "strategy document",
                std::set<std::string>(obj.signals.begin(), obj.signals.end()));

  Strategy q = make_dense_strategy(obj.nx(), ld.nz(), obj.ny());
  for (int x = 0; x < obj.nx(); ++x) {
    const std::string& xl = obj.signals[(size_t)x];
    const Json& per_z = require(doc, "strategy document", xl.c_str());
    if (!per_z.is_object()) fail("schema error: \"" + xl + "\" must be an object");
    reject_extras(per_z, "\"" + xl + "\"", std::set<std::string>(ld.values.begin(), ld.values.end()));
    for (int z = 0; z < ld.nz(); ++z) {
      const std::string& zl = ld.values[(size_t)z];
      std::vector<double> row = num_array(require(per_z, "\"" + xl + "\"", zl.c_str()),
                                          "\"" + xl + "\".\"" + zl + "\"", (size_t)obj.ny());
      for (int yp = 0; yp < obj.ny(); ++yp) q.q(x, z, yp) = row[(size_t)yp];
      renormalize(&q.q(x, z, 0), (size_t)obj.ny());
    }
  }
  embed_report(validate_strategy(obj, ld, q));
  return q;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open file for writing: " + path);
  out << text;
  if (!out) fail("write failed: " + path);
}

}  // namespace mindev
