#ifndef NKG_IO_HPP
#define NKG_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "nkg/model_config.hpp"

namespace nkg {

// Flat INI-style key-value file: [section] headers, `key = value` lines,
// '#' comments.  Order-preserving so serialization is canonical.
class IniFile {
public:
    using Section = std::vector<std::pair<std::string, std::string>>;

    static IniFile parse(const std::string& text, const std::string& origin = "<string>");
    static IniFile parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    const std::string* find(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

    // missing key raises config_error naming section and key
    std::string require(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);
    std::string serialize() const;

private:
    std::vector<std::pair<std::string, Section>> sections_;
    std::string origin_;
};

// [model]/[grid]/[formfactor]/[potential] sections <-> ModelConfig
ModelConfig model_config_from_ini(const IniFile& ini);
IniFile model_config_to_ini(const ModelConfig& cfg);

std::uint64_t fnv1a_hash(const std::string& text);

// hex FNV-1a of the canonical serialization of the resolved configuration
std::string config_hash(const IniFile& ini);

// CSV with '#'-prefixed metadata lines, comma separator, '.' decimals, and
// %.17g number formatting so identical inputs give identical bytes.
class CsvWriter {
public:
    CsvWriter(const std::string& path);
    void comment(const std::string& key, const std::string& value);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);
    static std::string format(double v);

private:
    std::ofstream out_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace nkg

#endif
