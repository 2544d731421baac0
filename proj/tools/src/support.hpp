#pragma once

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmac/access_bounds.hpp"
#include "qmac/cli.hpp"
#include "qmac/io.hpp"

namespace qmac::cli::detail {

using nlohmann::json;

/// A value inside a loaded config plus its location, so semantic errors can
/// name file, line and key path the same way parse errors do.
class Node {
 public:
  Node(std::shared_ptr<const io::LocatedDocument> doc, const json* value, std::string pointer);

  static Node load(const std::filesystem::path& path);

  const json& value() const { return *value_; }
  const std::string& pointer() const { return pointer_; }
  bool has(const char* key) const;
  /// Required member; fails with "missing key" when absent.
  Node operator[](const char* key) const;
  Node at(std::size_t index) const;
  std::size_t size() const { return value_->size(); }

  double number() const;
  bool boolean() const;
  std::string string() const;
  double number_or(const char* key, double fallback) const;
  bool flag_or(const char* key, bool fallback) const;

  /// Object whose keys are all in `allowed`.
  void expect_object(std::initializer_list<const char*> allowed) const;

  [[noreturn]] void fail(const std::string& message) const;

  /// Runs f(value()), re-raising its ValidationError at this node's location.
  template <class F>
  auto convert(F&& f) const -> decltype(f(std::declval<const json&>())) {
    try {
      return f(*value_);
    } catch (const io::ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }

 private:
  std::shared_ptr<const io::LocatedDocument> doc_;
  const json* value_;
  std::string pointer_;
};

/// Numeric table with an optional leading text column. Columns flagged as
/// rates are converted to bits at write time when requested.
struct Table {
  struct Column {
    std::string name;
    bool rate = false;
  };
  std::string label_column;  ///< empty: no text column
  std::vector<Column> columns;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& os, const Table& table, bool bits);
/// {"columns": [...], "rows": [[...], ...]}, numbers rounded to 12 digits.
json table_to_json(const Table& table, bool bits);

double round12(double x);
double to_units(double nats, bool bits);
json rate_point_json(const RatePoint& p, bool bits);
const char* units_name(bool bits);

/// Writes <stem>.csv and <stem>.json, creating parent directories.
void write_outputs(const std::filesystem::path& stem, const Table& table, const json& doc,
                   bool bits);
std::filesystem::path with_extension(const std::filesystem::path& stem, const std::string& ext);

void require_finite(double x, const std::string& what);

}  // namespace qmac::cli::detail
