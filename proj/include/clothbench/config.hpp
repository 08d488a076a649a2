#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace clothbench {

// Flat key = value config. Lines starting with '#' are comments, blank
// lines ignored. Keys are dotted paths ("sim.dt"). Values parse on demand.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig load(const std::string& path);

    void save(const std::string& path) const;
    std::string serialize() const;

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);

    std::string get_string(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace clothbench
