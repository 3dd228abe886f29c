/// @file report.hpp
/// @brief Deterministic JSON and CSV emitters. Doubles are written with 17
///        significant digits so identical runs produce byte-identical files.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace curvlab {

class JsonValue {
 public:
  static JsonValue object();
  static JsonValue array();
  static JsonValue number(double v);
  static JsonValue integer(std::int64_t v);
  static JsonValue boolean(bool v);
  static JsonValue string(std::string v);
  static JsonValue null();
  static JsonValue vector(const Eigen::VectorXd& v);
  static JsonValue matrix(const Eigen::MatrixXd& m);

  /// Object insertion; keeps insertion order. Returns *this for chaining.
  JsonValue& set(const std::string& key, JsonValue v);
  /// Array append.
  JsonValue& push(JsonValue v);

  std::string dump(int indent = 2) const;

 private:
  enum class Kind { Object, Array, Number, Integer, Bool, String, Null };
  Kind kind_ = Kind::Null;
  double num_ = 0.0;
  std::int64_t int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, JsonValue>> members_;
  std::vector<JsonValue> items_;

  void write(std::string& out, int indent, int depth) const;
};

/// %.17g with non-finite values mapped to JSON null (documented in docs/schema.md).
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return out_; }
  static std::string cell(double v) { return format_double(v); }

 private:
  std::size_t columns_;
  std::string out_;
};

}  // namespace curvlab
