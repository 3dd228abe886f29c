#include "curvlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace curvlab {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";  // canonical form for both signed zeros
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind_ = Kind::Object;
  return v;
}
JsonValue JsonValue::array() {
  JsonValue v;
  v.kind_ = Kind::Array;
  return v;
}
JsonValue JsonValue::number(double x) {
  JsonValue v;
  v.kind_ = Kind::Number;
  v.num_ = x;
  return v;
}
JsonValue JsonValue::integer(std::int64_t x) {
  JsonValue v;
  v.kind_ = Kind::Integer;
  v.int_ = x;
  return v;
}
JsonValue JsonValue::boolean(bool x) {
  JsonValue v;
  v.kind_ = Kind::Bool;
  v.bool_ = x;
  return v;
}
JsonValue JsonValue::string(std::string x) {
  JsonValue v;
  v.kind_ = Kind::String;
  v.str_ = std::move(x);
  return v;
}
JsonValue JsonValue::null() { return JsonValue(); }

JsonValue JsonValue::vector(const Eigen::VectorXd& x) {
  JsonValue v = array();
  for (int i = 0; i < x.size(); ++i) v.push(number(x[i]));
  return v;
}

JsonValue JsonValue::matrix(const Eigen::MatrixXd& m) {
  JsonValue v = array();
  for (int i = 0; i < m.rows(); ++i) v.push(vector(m.row(i).transpose()));
  return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  if (kind_ != Kind::Object) throw std::logic_error("JsonValue::set on non-object");
  members_.emplace_back(key, std::move(v));
  return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
  if (kind_ != Kind::Array) throw std::logic_error("JsonValue::push on non-array");
  items_.push_back(std::move(v));
  return *this;
}

namespace {
void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}
}  // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad1(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (kind_) {
    case Kind::Null: out += "null"; break;
    case Kind::Bool: out += bool_ ? "true" : "false"; break;
    case Kind::Integer: out += std::to_string(int_); break;
    case Kind::Number: out += format_double(num_); break;
    case Kind::String: write_escaped(out, str_); break;
    case Kind::Object: {
      if (members_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (std::size_t i = 0; i < members_.size(); ++i) {
        out += pad1;
        write_escaped(out, members_[i].first);
        out += ": ";
        members_[i].second.write(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      break;
    }
    case Kind::Array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      bool scalar_only = true;
      for (const auto& it : items_)
        if (it.kind_ == Kind::Object || it.kind_ == Kind::Array) scalar_only = false;
      if (scalar_only) {
        out += "[";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          items_[i].write(out, indent, depth);
          if (i + 1 < items_.size()) out += ", ";
        }
        out += "]";
      } else {
        out += "[\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          out += pad1;
          items_[i].write(out, indent, depth + 1);
          if (i + 1 < items_.size()) out += ",";
          out += "\n";
        }
        out += pad + "]";
      }
      break;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += "\n";
  return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ",";
    out_ += header[i];
  }
  out_ += "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ",";
    out_ += cells[i];
  }
  out_ += "\n";
}

}  // namespace curvlab
