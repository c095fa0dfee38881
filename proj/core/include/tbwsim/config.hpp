#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tbwsim/types.hpp"

namespace tbwsim {

// Flat key=value config file. '#' starts a comment, blank lines are skipped,
// keys are case-sensitive. Used for aircraft models and run configs.
class KeyValueFile {
public:
    KeyValueFile() = default;

    static KeyValueFile load(const std::string& path);
    static KeyValueFile from_string(const std::string& text);

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    void set(const std::string& key, const std::string& value);
    void set_double(const std::string& key, double value);

    // Keys read so far; reject_unknown() throws ConfigError if the file holds
    // keys nobody consumed (typo guard).
    void reject_unknown() const;

    std::string serialize() const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
    mutable std::map<std::string, bool> consumed_;
};

std::string format_double(double v);  // shortest round-trip decimal, '.' separator
double parse_double(const std::string& s, const std::string& context);

// FNV-1a over a canonical serialization; stable across runs for manifests.
std::string hash_hex(const std::string& text);

}  // namespace tbwsim
