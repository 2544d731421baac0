#include "qmac/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include <toml.hpp>

namespace qmac::io {

using nlohmann::json;

namespace {

std::string format_error(const std::string& where, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << where;
  if (line > 0) os << ":" << line;
  os << ": " << what;
  return os.str();
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(),
                                                 text.begin() + static_cast<std::ptrdiff_t>(offset),
                                                 '\n'));
}

std::string pointer_token(std::string key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

json toml_to_json(const toml::node& node, const std::string& pointer = "",
                  KeyLines* lines = nullptr) {
  if (lines) lines->emplace(pointer, node.source().begin.line);
  if (const auto* tbl = node.as_table()) {
    json obj = json::object();
    for (const auto& [key, value] : *tbl) {
      const std::string k(key.str());
      // a key's own position beats its value's for tables opened by a header
      if (lines) lines->emplace(pointer + "/" + pointer_token(k), key.source().begin.line);
      obj[k] = toml_to_json(value, pointer + "/" + pointer_token(k), lines);
    }
    return obj;
  }
  if (const auto* arr = node.as_array()) {
    json out = json::array();
    for (std::size_t i = 0; i < arr->size(); ++i) {
      out.push_back(toml_to_json(*arr->get(i), pointer + "/" + std::to_string(i), lines));
    }
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  throw ConfigError("<toml>", node.source().begin.line, "unsupported TOML value (dates/times)");
}

// Records the line where every value starts. The text is already known to be
// valid JSON, so this only tracks nesting, keys and string boundaries.
void scan_json_lines(const std::string& text, KeyLines& lines) {
  struct Frame {
    bool object;
    std::string pointer;
    std::size_t index = 0;
    std::string key;
    bool expect_key = true;
  };
  std::vector<Frame> stack;
  std::size_t line = 1;
  const auto here = [&]() -> std::string {
    if (stack.empty()) return "";
    const Frame& f = stack.back();
    return f.pointer + "/" + (f.object ? pointer_token(f.key) : std::to_string(f.index));
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
    } else if (c == '"') {
      std::string str;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        str += text[i];
      }
      if (!stack.empty() && stack.back().object && stack.back().expect_key) {
        stack.back().key = str;
        stack.back().expect_key = false;
      } else {
        lines.emplace(here(), line);
      }
    } else if (c == '{' || c == '[') {
      const std::string p = here();
      lines.emplace(p, line);
      stack.push_back(Frame{c == '{', p, 0, "", true});
    } else if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
    } else if (c == ',') {
      if (stack.empty()) continue;
      if (stack.back().object) stack.back().expect_key = true;
      else ++stack.back().index;
    } else if (c != ':' && c != ' ' && c != '\t' && c != '\r') {
      lines.emplace(here(), line);
      while (i + 1 < text.size() && std::string_view(",}] \t\r\n").find(text[i + 1]) == std::string_view::npos) ++i;
    }
  }
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> number_list(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

std::vector<CMatrix> matrix_list(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(std::string(what) + " must be a non-empty array of matrices");
  }
  std::vector<CMatrix> out;
  out.reserve(j.size());
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

LabeledEnsemble ensemble_from(const json& states, const json& probs, int index) {
  const std::string label = "source " + std::to_string(index + 1);
  std::vector<DensityMatrix> rhos;
  for (const auto& m : matrix_list(states, (label + " states").c_str())) {
    rhos.push_back(validate_density(m));
  }
  return LabeledEnsemble(std::move(rhos), number_list(probs, (label + " probs").c_str()));
}

}  // namespace

ConfigError::ConfigError(const std::string& where, std::size_t line, const std::string& what)
    : ValidationError(format_error(where, line, what)), line_(line) {}

json parse_toml(const std::string& text, const std::string& source_name) {
  try {
    const toml::table tbl = toml::parse(text, source_name);
    return toml_to_json(tbl);
  } catch (const toml::parse_error& e) {
    throw ConfigError(source_name, e.source().begin.line, std::string(e.description()));
  }
}

json parse_json(const std::string& text, const std::string& source_name) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source_name, line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
  }
}

json load_document(const std::filesystem::path& path) { return load_located(path).value; }

LocatedDocument load_located(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  LocatedDocument doc;
  doc.source = path.string();
  if (path.extension() == ".toml") {
    try {
      const toml::table tbl = toml::parse(text, doc.source);
      doc.value = toml_to_json(tbl, "", &doc.lines);
    } catch (const toml::parse_error& e) {
      throw ConfigError(doc.source, e.source().begin.line, std::string(e.description()));
    }
  } else {
    doc.value = parse_json(text, doc.source);
    scan_json_lines(text, doc.lines);
  }
  return doc;
}

std::size_t LocatedDocument::line_of(std::string pointer) const {
  for (;;) {
    if (const auto it = lines.find(pointer); it != lines.end()) return it->second;
    const auto slash = pointer.rfind('/');
    if (slash == std::string::npos) return 0;
    pointer.erase(slash);
  }
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j.front().is_array()) throw ValidationError("matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError("matrix row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(i, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ValidationError("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(i, c).real(), m(i, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

QuantumInstance quantum_instance_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("quantum instance must be a JSON object");
  if (!j.contains("states") || !j.contains("probs")) {
    throw ValidationError("quantum instance needs \"states\" and \"probs\"");
  }
  const json& states = j.at("states");
  const json& probs = j.at("probs");
  if (!states.is_array() || states.size() != 2 || !probs.is_array() || probs.size() != 2) {
    throw ValidationError("\"states\" and \"probs\" must each hold two lists, one per source");
  }
  LabeledEnsemble s1 = ensemble_from(states[0], probs[0], 0);
  LabeledEnsemble s2 = ensemble_from(states[1], probs[1], 1);
  KrausChannel channel = j.contains("kraus")
                             ? KrausChannel(matrix_list(j.at("kraus"), "kraus"))
                             : KrausChannel::identity(s1.dim() * s2.dim());
  std::optional<Povm> povm;
  if (j.contains("povm")) povm.emplace(matrix_list(j.at("povm"), "povm"));
  return QuantumInstance{std::move(s1), std::move(s2), std::move(channel), std::move(povm)};
}

json quantum_instance_to_json(const QuantumInstance& q) {
  json out;
  auto ensemble_states = [](const LabeledEnsemble& e) {
    json list = json::array();
    for (const auto& s : e.states()) list.push_back(matrix_to_json(s.matrix()));
    return list;
  };
  out["states"] = json::array({ensemble_states(q.source1), ensemble_states(q.source2)});
  out["probs"] = json::array({q.source1.probs(), q.source2.probs()});
  json kraus = json::array();
  for (const auto& b : q.channel.operators()) kraus.push_back(matrix_to_json(b));
  out["kraus"] = std::move(kraus);
  if (q.povm) {
    json povm = json::array();
    for (const auto& e : q.povm->elements()) povm.push_back(matrix_to_json(e));
    out["povm"] = std::move(povm);
  }
  return out;
}

JointChannelTable table_from_json(const json& j) {
  if (!j.is_object() || !j.contains("p_out_given_in") || !j.contains("p_alpha") ||
      !j.contains("p_beta")) {
    throw ValidationError("channel table needs p_alpha, p_beta and p_out_given_in");
  }
  std::vector<std::vector<std::vector<double>>> cond;
  for (const auto& row : j.at("p_out_given_in")) {
    std::vector<std::vector<double>> slices;
    for (const auto& slice : row) slices.push_back(number_list(slice, "p_out_given_in"));
    cond.push_back(std::move(slices));
  }
  return JointChannelTable(std::move(cond), number_list(j.at("p_alpha"), "p_alpha"),
                           number_list(j.at("p_beta"), "p_beta"));
}

json table_to_json(const JointChannelTable& t) {
  return json{{"p_alpha", t.p_alpha()}, {"p_beta", t.p_beta()}, {"p_out_given_in", t.conditional()}};
}

json rate_point_to_json(const RatePoint& p) {
  return json{{"r1_bound", p.r1_bound}, {"r2_bound", p.r2_bound}, {"sum_bound", p.sum_bound}};
}

RatePoint rate_point_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("rate point must be an object");
  return RatePoint{number(j.at("r1_bound"), "r1_bound"), number(j.at("r2_bound"), "r2_bound"),
                   number(j.at("sum_bound"), "sum_bound")};
}

ChannelParams channel_params_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("channel parameters must be a table/object");
  auto pick = [&](std::initializer_list<const char*> keys, double fallback, bool required) {
    for (const char* key : keys) {
      if (j.contains(key)) return number(j.at(key), key);
    }
    if (required) throw ValidationError(std::string("missing channel parameter \"") + *keys.begin() + "\"");
    return fallback;
  };
  ChannelParams p;
  p.omega1 = pick({"omega1"}, 1.0, true);
  p.omega2 = pick({"omega2"}, 1.0, true);
  p.coupling = pick({"coupling", "k"}, 0.0, false);
  p.gamma_damp = pick({"gamma", "gamma_damp"}, 0.0, false);
  p.temperature = pick({"temperature", "T"}, 0.0, false);
  p.validate();
  return p;
}

json channel_params_to_json(const ChannelParams& p) {
  return json{{"omega1", p.omega1},
              {"omega2", p.omega2},
              {"coupling", p.coupling},
              {"gamma", p.gamma_damp},
              {"temperature", p.temperature}};
}

}  // namespace qmac::io
