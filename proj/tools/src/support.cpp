#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace qmac::cli {

using detail::json;

std::string format_number(double x) {
  if (x == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<double> axis_values(const json& axis, const std::string& name) {
  const auto finite = [&](const json& v) {
    if (!v.is_number()) throw ValidationError("axis '" + name + "' values must be numbers");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError("axis '" + name + "' has a non-finite value");
    return x;
  };
  const auto empty = [&] { return ValidationError("empty sweep: axis '" + name + "' has no points"); };

  if (axis.is_number()) return {finite(axis)};
  if (axis.is_array()) {
    if (axis.empty()) throw empty();
    std::vector<double> out;
    for (const auto& v : axis) out.push_back(finite(v));
    return out;
  }
  if (!axis.is_object()) {
    throw ValidationError("axis '" + name + "' must be a number, an array or {start, stop, points}");
  }
  for (const auto& [key, _] : axis.items()) {
    if (key != "start" && key != "stop" && key != "points" && key != "spacing") {
      throw ValidationError("axis '" + name + "': unknown key '" + key + "'");
    }
  }
  if (!axis.contains("points")) throw ValidationError("axis '" + name + "' needs 'points'");
  const json& pts = axis.at("points");
  if (!pts.is_number_integer() || pts.get<long long>() < 0) {
    throw ValidationError("axis '" + name + "': points must be a nonnegative integer");
  }
  const auto n = static_cast<std::size_t>(pts.get<long long>());
  if (n == 0) throw empty();
  if (!axis.contains("start")) throw ValidationError("axis '" + name + "' needs 'start'");
  const double start = finite(axis.at("start"));
  if (n == 1) return {start};
  if (!axis.contains("stop")) throw ValidationError("axis '" + name + "' needs 'stop'");
  const double stop = finite(axis.at("stop"));

  std::string spacing = "linear";
  if (axis.contains("spacing")) {
    if (!axis.at("spacing").is_string()) throw ValidationError("axis '" + name + "': spacing must be a string");
    spacing = axis.at("spacing").get<std::string>();
  }
  std::vector<double> out(n);
  if (spacing == "linear") {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
  } else if (spacing == "log") {
    if (!(start > 0.0 && stop > 0.0)) {
      throw ValidationError("axis '" + name + "': log spacing needs positive start and stop");
    }
    const double ls = std::log(start), le = std::log(stop);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = std::exp(ls + (le - ls) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  } else {
    throw ValidationError("axis '" + name + "': spacing must be \"linear\" or \"log\"");
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  if (jobs < 0) throw ValidationError("jobs must be >= 0");
  std::size_t workers = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                  : static_cast<std::size_t>(jobs);
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;

  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) failed_index = i, failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qmac::cli

namespace qmac::cli::detail {

Node::Node(std::shared_ptr<const io::LocatedDocument> doc, const json* value, std::string pointer)
    : doc_(std::move(doc)), value_(value), pointer_(std::move(pointer)) {}

Node Node::load(const std::filesystem::path& path) {
  auto doc = std::make_shared<const io::LocatedDocument>(io::load_located(path));
  const json* root = &doc->value;
  Node node(std::move(doc), root, "");
  if (!root->is_object()) node.fail("config must be a table/object at the top level");
  return node;
}

bool Node::has(const char* key) const { return value_->is_object() && value_->contains(key); }

Node Node::operator[](const char* key) const {
  if (!value_->is_object()) fail("expected a table/object");
  if (!value_->contains(key)) fail(std::string("missing key '") + key + "'");
  return Node(doc_, &value_->at(key), pointer_ + "/" + key);
}

Node Node::at(std::size_t index) const {
  if (!value_->is_array() || index >= value_->size()) fail("expected an array element");
  return Node(doc_, &(*value_)[index], pointer_ + "/" + std::to_string(index));
}

double Node::number() const {
  if (!value_->is_number()) fail("expected a number");
  const double x = value_->get<double>();
  if (!std::isfinite(x)) fail("expected a finite number");
  return x;
}

bool Node::boolean() const {
  if (!value_->is_boolean()) fail("expected true or false");
  return value_->get<bool>();
}

std::string Node::string() const {
  if (!value_->is_string()) fail("expected a string");
  return value_->get<std::string>();
}

double Node::number_or(const char* key, double fallback) const {
  return has(key) ? (*this)[key].number() : fallback;
}

bool Node::flag_or(const char* key, bool fallback) const {
  return has(key) ? (*this)[key].boolean() : fallback;
}

void Node::expect_object(std::initializer_list<const char*> allowed) const {
  if (!value_->is_object()) fail("expected a table/object");
  for (const auto& [key, _] : value_->items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      Node(doc_, &value_->at(key), pointer_ + "/" + key).fail("unknown key '" + key + "'");
    }
  }
}

void Node::fail(const std::string& message) const {
  std::string path = pointer_;
  std::replace(path.begin(), path.end(), '/', '.');
  if (!path.empty()) path.erase(0, 1);
  throw io::ConfigError(doc_->source, doc_->line_of(pointer_),
                        path.empty() ? message : path + ": " + message);
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_number(x));
}

double to_units(double nats, bool bits) { return bits ? nats_to_bits(nats) : nats; }

const char* units_name(bool bits) { return bits ? "bits" : "nats"; }

json rate_point_json(const RatePoint& p, bool bits) {
  return json{{"r1_bound", round12(to_units(p.r1_bound, bits))},
              {"r2_bound", round12(to_units(p.r2_bound, bits))},
              {"sum_bound", round12(to_units(p.sum_bound, bits))}};
}

void write_csv(std::ostream& os, const Table& table, bool bits) {
  std::string sep;
  if (!table.label_column.empty()) os << table.label_column, sep = ",";
  for (const auto& c : table.columns) os << sep << c.name, sep = ",";
  os << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    sep.clear();
    if (!table.label_column.empty()) os << table.labels[r], sep = ",";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const double x = table.rows[r][c];
      os << sep << format_number(table.columns[c].rate ? to_units(x, bits) : x);
      sep = ",";
    }
    os << '\n';
  }
}

json table_to_json(const Table& table, bool bits) {
  json cols = json::array();
  if (!table.label_column.empty()) cols.push_back(table.label_column);
  for (const auto& c : table.columns) cols.push_back(c.name);
  json rows = json::array();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    json row = json::array();
    if (!table.label_column.empty()) row.push_back(table.labels[r]);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const double x = table.rows[r][c];
      row.push_back(round12(table.columns[c].rate ? to_units(x, bits) : x));
    }
    rows.push_back(std::move(row));
  }
  return json{{"columns", cols}, {"rows", rows}};
}

std::filesystem::path with_extension(const std::filesystem::path& stem, const std::string& ext) {
  std::filesystem::path p = stem;
  if (p.extension() == ".csv" || p.extension() == ".json") p.replace_extension();
  p += ext;
  return p;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << text;
  if (!f) throw ValidationError("error writing " + path.string());
}

}  // namespace

void write_outputs(const std::filesystem::path& stem, const Table& table, const json& doc,
                   bool bits) {
  std::ostringstream csv;
  write_csv(csv, table, bits);
  write_text(with_extension(stem, ".csv"), csv.str());
  write_text(with_extension(stem, ".json"), doc.dump(2) + "\n");
}

void require_finite(double x, const std::string& what) {
  if (!std::isfinite(x)) throw NumericalError(what + " is not finite");
}

}  // namespace qmac::cli::detail
