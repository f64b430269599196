#pragma once

// Deterministic CSV / JSON tables: fixed column order, 12 significant digits,
// a header carrying tool version, config hash and units.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rotent/errors.hpp"

#ifndef ROTENT_VERSION
#define ROTENT_VERSION "0.0.0"
#endif

namespace rotent::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* version = ROTENT_VERSION;
inline constexpr const char* units = "hbar=m=omega=1; lengths in a0=sqrt(hbar/(m omega)); energies in hbar omega; entropies in nats";

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x + 0.0);
    return buf;
}

/// x rounded to the 12 significant digits that the CSV carries.
inline double rounded(double x) {
    if (!std::isfinite(x)) return x;
    return std::stod(format_double(x));
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

using Cell = std::variant<std::monostate, long long, double, std::string, std::vector<double>>;

inline Cell cell(std::optional<double> v) { return v ? Cell{*v} : Cell{}; }

struct Table {
    std::string command;
    Json config = Json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::string config_hash() const { return hex64(fnv1a(config.dump())); }

    Json meta() const {
        Json m;
        m["tool"] = "rotent";
        m["version"] = version;
        m["command"] = command;
        m["config_hash"] = config_hash();
        m["units"] = units;
        m["config"] = config;
        return m;
    }
};

inline std::string csv_field(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) {
                if (ch == '"') q += '"';
                q += ch;
            }
            return q + "\"";
        }
        std::string operator()(const std::vector<double>& v) const {
            std::string s = "[";
            for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_double(v[k]);
            return (*this)(s + "]");
        }
    };
    return std::visit(Visitor{}, c);
}

inline Json json_value(const Cell& c) {
    struct Visitor {
        Json operator()(std::monostate) const { return nullptr; }
        Json operator()(long long v) const { return v; }
        Json operator()(double v) const { return std::isfinite(v) ? Json(rounded(v)) : Json(format_double(v)); }
        Json operator()(const std::string& s) const { return s; }
        Json operator()(const std::vector<double>& v) const {
            Json a = Json::array();
            for (double x : v) a.push_back(rounded(x));
            return a;
        }
    };
    return std::visit(Visitor{}, c);
}

/// Row-at-a-time CSV output; each row is flushed as it is written.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const Table& t) : os_(os), width_(t.columns.size()) {
        os_ << "# rotent " << version << " command=" << t.command << " config_hash=" << t.config_hash() << "\n";
        os_ << "# units: " << units << "\n";
        os_ << "# config: " << t.config.dump() << "\n";
        for (std::size_t k = 0; k < t.columns.size(); ++k) os_ << (k ? "," : "") << t.columns[k];
        os_ << "\n";
        os_.flush();
    }

    void row(const std::vector<Cell>& cells) {
        if (cells.size() != width_) throw std::logic_error("row width does not match the header");
        for (std::size_t k = 0; k < cells.size(); ++k) os_ << (k ? "," : "") << csv_field(cells[k]);
        os_ << "\n";
        os_.flush();
    }

private:
    std::ostream& os_;
    std::size_t width_;
};

inline void write_csv(std::ostream& os, const Table& t) {
    CsvWriter w(os, t);
    for (const auto& r : t.rows) w.row(r);
}

inline Json to_json(const Table& t, const Json& annotations = Json()) {
    Json doc;
    doc["meta"] = t.meta();
    if (!annotations.is_null()) doc["meta"]["annotations"] = annotations;
    Json rows = Json::array();
    for (const auto& r : t.rows) {
        Json o = Json::object();
        for (std::size_t k = 0; k < t.columns.size(); ++k) o[t.columns[k]] = json_value(r[k]);
        rows.push_back(std::move(o));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

inline void write_json(std::ostream& os, const Table& t, const Json& annotations = Json()) {
    os << to_json(t, annotations).dump(2) << "\n";
}

} // namespace rotent::io
