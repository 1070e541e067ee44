#pragma once
// Flat typed key = value configuration (a TOML subset): strings in double quotes,
// numbers, true/false, and one-line arrays of numbers. [section] headers prefix
// the following keys with "section.". Comments start with '#'.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlslab {

class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& msg, std::string field = {}, int line = 0)
        : std::invalid_argument(format(msg, field, line)), field_(std::move(field)), line_(line) {}
    const std::string& field() const { return field_; }
    int line() const { return line_; }

private:
    static std::string format(const std::string& msg, const std::string& field, int line) {
        std::string s = "config";
        if (line > 0) s += " line " + std::to_string(line);
        if (!field.empty()) s += " field '" + field + "'";
        return s + ": " + msg;
    }
    std::string field_;
    int line_;
};

struct ConfigValue {
    enum class Kind { string, number, boolean, array };
    Kind kind = Kind::string;
    std::string text;         // canonical text
    double number = 0.0;
    bool boolean = false;
    std::vector<double> array;
    int line = 0;
};

namespace detail {
inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}
inline bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::string t;
    for (char c : s)
        if (c != '_') t += c;
    std::size_t pos = 0;
    try {
        out = std::stod(t, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == t.size();
}
inline std::string number_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
inline bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    return true;
}
}  // namespace detail

class Config {
public:
    static Config parse(std::istream& is, const std::string& source = "<config>") {
        Config c;
        c.source_ = source;
        std::string line, section;
        int ln = 0;
        while (std::getline(is, line)) {
            ++ln;
            std::string body = strip_comment(line);
            body = detail::trim(body);
            if (body.empty()) continue;
            if (body.front() == '[') {
                if (body.back() != ']') throw ConfigError("unterminated section header", {}, ln);
                section = detail::trim(body.substr(1, body.size() - 2));
                if (!detail::valid_key(section)) throw ConfigError("bad section name", section, ln);
                continue;
            }
            const auto eq = body.find('=');
            if (eq == std::string::npos) throw ConfigError("expected key = value", {}, ln);
            std::string key = detail::trim(body.substr(0, eq));
            if (!detail::valid_key(key)) throw ConfigError("bad key", key, ln);
            if (!section.empty()) key = section + "." + key;
            if (c.values_.count(key)) throw ConfigError("duplicate key", key, ln);
            c.values_[key] = parse_value(detail::trim(body.substr(eq + 1)), key, ln);
        }
        return c;
    }

    static Config parse_string(const std::string& text) {
        std::istringstream is(text);
        return parse(is);
    }

    static Config load(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open config file " + path);
        return parse(is, path);
    }

    // command-line override; the value uses the file syntax
    void set(const std::string& key, const std::string& value) {
        if (!detail::valid_key(key)) throw ConfigError("bad key", key);
        values_[key] = parse_value(value, key, 0);
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    double number(const std::string& key) const {
        const auto& v = require(key);
        if (v.kind != ConfigValue::Kind::number) throw ConfigError("expected a number", key, v.line);
        return v.number;
    }
    double number(const std::string& key, double def) const { return has(key) ? number(key) : mark(def); }

    long integer(const std::string& key) const {
        const double x = number(key);
        if (x != static_cast<double>(static_cast<long>(x))) throw ConfigError("expected an integer", key, values_.at(key).line);
        return static_cast<long>(x);
    }
    long integer(const std::string& key, long def) const { return has(key) ? integer(key) : def; }

    std::uint64_t seed(const std::string& key, std::uint64_t def) const {
        if (!has(key)) return def;
        const auto& v = require(key);
        if (v.kind != ConfigValue::Kind::number) throw ConfigError("expected an integer", key, v.line);
        try {
            std::size_t pos = 0;
            const auto s = std::stoull(v.text, &pos);
            if (pos != v.text.size()) throw ConfigError("expected a non-negative integer", key, v.line);
            return s;
        } catch (const std::logic_error&) {
            throw ConfigError("expected a non-negative integer", key, v.line);
        }
    }

    std::size_t count(const std::string& key, std::size_t def) const {
        if (!has(key)) return def;
        const long v = integer(key);
        if (v < 0) throw ConfigError("expected a non-negative integer", key, values_.at(key).line);
        return static_cast<std::size_t>(v);
    }

    std::string string(const std::string& key) const {
        const auto& v = require(key);
        if (v.kind != ConfigValue::Kind::string) throw ConfigError("expected a string", key, v.line);
        return v.text;
    }
    std::string string(const std::string& key, const std::string& def) const { return has(key) ? string(key) : def; }

    bool boolean(const std::string& key, bool def) const {
        if (!has(key)) return def;
        const auto& v = require(key);
        if (v.kind != ConfigValue::Kind::boolean) throw ConfigError("expected true or false", key, v.line);
        return v.boolean;
    }

    std::vector<double> array(const std::string& key) const {
        const auto& v = require(key);
        if (v.kind == ConfigValue::Kind::number) return {v.number};
        if (v.kind != ConfigValue::Kind::array) throw ConfigError("expected an array of numbers", key, v.line);
        return v.array;
    }
    std::vector<double> array(const std::string& key, const std::vector<double>& def) const {
        return has(key) ? array(key) : def;
    }

    // keys never read by the experiment; a typo in a key should not pass silently
    std::vector<std::string> unused() const {
        std::vector<std::string> out;
        for (const auto& kv : values_)
            if (!used_.count(kv.first)) out.push_back(kv.first);
        return out;
    }

    // sorted key = value lines
    std::string canonical() const {
        std::string s;
        for (const auto& kv : values_) s += kv.first + " = " + render(kv.second) + "\n";
        return s;
    }

    // FNV-1a over the canonical text
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char ch : canonical()) {
            h ^= ch;
            h *= 1099511628211ull;
        }
        return h;
    }

    const std::string& source() const { return source_; }

private:
    static std::string strip_comment(const std::string& line) {
        bool in_str = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
            if (line[i] == '#' && !in_str) return line.substr(0, i);
        }
        return line;
    }

    static std::string render(const ConfigValue& v) {
        switch (v.kind) {
            case ConfigValue::Kind::string: return "\"" + v.text + "\"";
            case ConfigValue::Kind::array: {
                std::string s = "[";
                for (std::size_t i = 0; i < v.array.size(); ++i) s += (i ? ", " : "") + detail::number_text(v.array[i]);
                return s + "]";
            }
            default: return v.text;
        }
    }

    static ConfigValue parse_value(const std::string& raw, const std::string& key, int ln) {
        ConfigValue v;
        v.line = ln;
        if (raw.empty()) throw ConfigError("missing value", key, ln);
        if (raw.front() == '"') {
            if (raw.size() < 2 || raw.back() != '"') throw ConfigError("unterminated string", key, ln);
            v.kind = ConfigValue::Kind::string;
            v.text = raw.substr(1, raw.size() - 2);
            return v;
        }
        if (raw == "true" || raw == "false") {
            v.kind = ConfigValue::Kind::boolean;
            v.boolean = raw == "true";
            v.text = raw;
            return v;
        }
        if (raw.front() == '[') {
            if (raw.back() != ']') throw ConfigError("unterminated array", key, ln);
            v.kind = ConfigValue::Kind::array;
            std::string inner = detail::trim(raw.substr(1, raw.size() - 2));
            if (!inner.empty()) {
                std::stringstream ss(inner);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    item = detail::trim(item);
                    if (item.empty()) continue;  // trailing comma
                    double x = 0.0;
                    if (!detail::parse_number(item, x)) throw ConfigError("array element '" + item + "' is not a number", key, ln);
                    v.array.push_back(x);
                }
            }
            return v;
        }
        double x = 0.0;
        if (!detail::parse_number(raw, x)) throw ConfigError("cannot parse value '" + raw + "'", key, ln);
        v.kind = ConfigValue::Kind::number;
        v.number = x;
        v.text = raw;
        return v;
    }

    const ConfigValue& require(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing required field", key);
        used_.insert(key);
        return it->second;
    }
    static double mark(double d) { return d; }

    std::map<std::string, ConfigValue> values_;
    mutable std::set<std::string> used_;
    std::string source_;
};

}  // namespace nlslab
