#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace vargc::tool {

/// Deterministic JSON output tree.  Keys keep insertion order, floating
/// point values are rendered with 17 significant digits so they round-trip
/// bit-exactly, and the serialization is platform independent — two runs
/// with identical numeric content produce byte-identical files.
class JsonValue {
  public:
    using Object = std::vector<std::pair<std::string, JsonValue>>;
    using Array = std::vector<JsonValue>;

    JsonValue() : value_(nullptr) {}
    JsonValue(std::nullptr_t) : value_(nullptr) {}
    JsonValue(bool b) : value_(b) {}
    JsonValue(int v) : value_(static_cast<std::int64_t>(v)) {}
    JsonValue(std::int64_t v) : value_(v) {}
    JsonValue(std::uint64_t v) : value_(v) {}
    JsonValue(double v) : value_(v) {}
    JsonValue(const char* s) : value_(std::string(s)) {}
    JsonValue(std::string s) : value_(std::move(s)) {}
    JsonValue(Array a) : value_(std::move(a)) {}

    static JsonValue object() {
        JsonValue v;
        v.value_ = Object{};
        return v;
    }
    static JsonValue array() {
        JsonValue v;
        v.value_ = Array{};
        return v;
    }

    /// Adds or replaces a key of an object value.
    JsonValue& set(const std::string& key, JsonValue v) {
        auto& obj = std::get<Object>(value_);
        for (auto& [k, existing] : obj) {
            if (k == key) {
                existing = std::move(v);
                return *this;
            }
        }
        obj.emplace_back(key, std::move(v));
        return *this;
    }

    JsonValue& push(JsonValue v) {
        std::get<Array>(value_).push_back(std::move(v));
        return *this;
    }

    /// Renders with two-space indentation and a trailing newline.
    std::string dump() const {
        std::string out;
        write(out, 0);
        out.push_back('\n');
        return out;
    }

  private:
    std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double,
                 std::string, Object, Array>
        value_;

    static void write_escaped(std::string& out, const std::string& s) {
        out.push_back('"');
        for (const char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\b': out += "\\b"; break;
                case '\f': out += "\\f"; break;
                case '\n': out += "\\n"; break;
                case '\r': out += "\\r"; break;
                case '\t': out += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x",
                                      static_cast<unsigned>(c));
                        out += buf;
                    } else {
                        out.push_back(c);
                    }
            }
        }
        out.push_back('"');
    }

    static void write_double(std::string& out, double v) {
        if (!std::isfinite(v)) {
            // JSON has no NaN/Inf literals; emit null, consumers treat it
            // as "not available" (e.g. an invalid directional test).
            out += "null";
            return;
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
    }

    void write(std::string& out, int depth) const {
        const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
        const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            out += "null";
        } else if (const auto* b = std::get_if<bool>(&value_)) {
            out += *b ? "true" : "false";
        } else if (const auto* i = std::get_if<std::int64_t>(&value_)) {
            out += std::to_string(*i);
        } else if (const auto* u = std::get_if<std::uint64_t>(&value_)) {
            out += std::to_string(*u);
        } else if (const auto* d = std::get_if<double>(&value_)) {
            write_double(out, *d);
        } else if (const auto* s = std::get_if<std::string>(&value_)) {
            write_escaped(out, *s);
        } else if (const auto* obj = std::get_if<Object>(&value_)) {
            if (obj->empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            for (std::size_t i = 0; i < obj->size(); ++i) {
                out += pad_in;
                write_escaped(out, (*obj)[i].first);
                out += ": ";
                (*obj)[i].second.write(out, depth + 1);
                if (i + 1 < obj->size()) out += ",";
                out += "\n";
            }
            out += pad + "}";
        } else if (const auto* arr = std::get_if<Array>(&value_)) {
            if (arr->empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line; nested structures get
            // one element per line.
            bool scalars = true;
            for (const auto& e : *arr)
                scalars = scalars && !std::holds_alternative<Object>(e.value_) &&
                          !std::holds_alternative<Array>(e.value_);
            if (scalars) {
                out += "[";
                for (std::size_t i = 0; i < arr->size(); ++i) {
                    if (i) out += ", ";
                    (*arr)[i].write(out, depth);
                }
                out += "]";
            } else {
                out += "[\n";
                for (std::size_t i = 0; i < arr->size(); ++i) {
                    out += pad_in;
                    (*arr)[i].write(out, depth + 1);
                    if (i + 1 < arr->size()) out += ",";
                    out += "\n";
                }
                out += pad + "]";
            }
        }
    }
};

/// Formats one double exactly as the JSON writer does (shared by the CSV
/// emitters so every artifact uses the same representation).
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace vargc::tool
