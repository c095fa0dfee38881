#include "tbwsim/config.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tbwsim {

namespace {

std::string trim_ws(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str());
}

KeyValueFile KeyValueFile::from_string(const std::string& text) {
    KeyValueFile cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim_ws(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " has no '=': " + line);
        const std::string key = trim_ws(line.substr(0, eq));
        const std::string value = trim_ws(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + " has empty key");
        cfg.entries_[key] = value;
    }
    return cfg;
}

bool KeyValueFile::has(const std::string& key) const {
    return entries_.count(key) != 0;
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    consumed_[key] = true;
    return it->second;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    return parse_double(*v, key);
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        size_t pos = 0;
        const int out = std::stoi(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing chars");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' is not an integer: " + *v);
    }
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "on" || *v == "1") return true;
    if (*v == "false" || *v == "off" || *v == "0") return false;
    throw ConfigError("key '" + key + "' is not a boolean: " + *v);
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    auto v = get(key);
    return v ? *v : fallback;
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

void KeyValueFile::set_double(const std::string& key, double value) {
    entries_[key] = format_double(value);
}

void KeyValueFile::reject_unknown() const {
    for (const auto& [key, value] : entries_) {
        if (!consumed_.count(key))
            throw ConfigError("unknown config key: " + key);
    }
}

std::string KeyValueFile::serialize() const {
    std::string out;
    for (const auto& [key, value] : entries_) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[64];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

double parse_double(const std::string& s, const std::string& context) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("'" + context + "' is not a number: " + s);
    return out;
}

std::string hash_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace tbwsim
