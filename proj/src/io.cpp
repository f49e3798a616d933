#include "nkg/io.hpp"

#include <cstdio>
#include <sstream>

namespace nkg {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

IniFile IniFile::parse(const std::string& text, const std::string& origin) {
    IniFile ini;
    ini.origin_ = origin;
    std::istringstream is(text);
    std::string line;
    std::string current;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error(origin + ":" + std::to_string(lineno) +
                                   ": unterminated section header");
            current = trim(line.substr(1, line.size() - 2));
            ini.sections_.emplace_back(current, Section{});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
        if (current.empty())
            throw config_error(origin + ":" + std::to_string(lineno) +
                               ": key '" + key + "' outside any [section]");
        ini.set(current, key, value);
    }
    return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
    return parse(read_file(path), path);
}

const std::string* IniFile::find(const std::string& section, const std::string& key) const {
    for (const auto& [name, entries] : sections_) {
        if (name != section) continue;
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
    }
    return nullptr;
}

bool IniFile::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string IniFile::get_string(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
    const std::string* v = find(section, key);
    return v ? *v : fallback;
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
    const std::string* v = find(section, key);
    if (!v) return fallback;
    try {
        size_t pos = 0;
        const double d = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw config_error("[" + section + "] " + key + ": cannot parse '" + *v +
                           "' as a number");
    }
}

int IniFile::get_int(const std::string& section, const std::string& key, int fallback) const {
    const std::string* v = find(section, key);
    if (!v) return fallback;
    try {
        size_t pos = 0;
        const int i = std::stoi(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing characters");
        return i;
    } catch (const std::exception&) {
        throw config_error("[" + section + "] " + key + ": cannot parse '" + *v +
                           "' as an integer");
    }
}

bool IniFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const std::string* v = find(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw config_error("[" + section + "] " + key + ": cannot parse '" + *v + "' as a bool");
}

std::vector<double> IniFile::get_list(const std::string& section, const std::string& key,
                                      const std::vector<double>& fallback) const {
    const std::string* v = find(section, key);
    if (!v) return fallback;
    std::vector<double> out;
    std::istringstream is(*v);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw config_error("[" + section + "] " + key + ": cannot parse list item '" +
                               item + "'");
        }
    }
    if (out.empty())
        throw config_error("[" + section + "] " + key + ": empty list");
    return out;
}

std::string IniFile::require(const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v)
        throw config_error(origin_ + ": missing required key '" + key + "' in [" + section +
                           "]");
    return *v;
}

void IniFile::set(const std::string& section, const std::string& key, const std::string& value) {
    for (auto& [name, entries] : sections_) {
        if (name != section) continue;
        for (auto& [k, v] : entries) {
            if (k == key) {
                v = value;
                return;
            }
        }
        entries.emplace_back(key, value);
        return;
    }
    sections_.emplace_back(section, Section{{key, value}});
}

std::string IniFile::serialize() const {
    std::ostringstream os;
    for (const auto& [name, entries] : sections_) {
        os << "[" << name << "]\n";
        for (const auto& [k, v] : entries)
            os << k << " = " << v << "\n";
        os << "\n";
    }
    return os.str();
}

ModelConfig model_config_from_ini(const IniFile& ini) {
    ModelConfig cfg;
    cfg.d = ini.get_int("model", "d", 1);
    cfg.n = ini.get_int("model", "n", 1);
    std::vector<double> masses = ini.get_list("model", "masses", std::vector<double>(cfg.n, 1.0));
    if (static_cast<int>(masses.size()) != cfg.n)
        throw config_error("[model] masses: need exactly n values");
    cfg.masses = Eigen::Map<Eigen::VectorXd>(masses.data(), masses.size());
    cfg.relativistic = ini.get_bool("model", "relativistic", true);
    cfg.sigma = ini.get_double("model", "sigma", 0.5);
    cfg.dispersion.mass = ini.get_double("model", "field_mass", 1.0);

    cfg.grid = KGrid::symmetric(ini.get_double("grid", "kmax", 8.0),
                                ini.get_int("grid", "points", 129));

    const std::string ff = ini.get_string("formfactor", "preset", "gaussian");
    const double amp = ini.get_double("formfactor", "amplitude", 0.25);
    const double fwidth = ini.get_double("formfactor", "width", 2.0);
    if (ff == "gaussian")
        cfg.chi = FormFactor::gaussian(amp, fwidth);
    else if (ff == "bump")
        cfg.chi = FormFactor::bump(amp, fwidth);
    else
        throw config_error("[formfactor] preset: unknown preset '" + ff + "'");

    const std::string pot = ini.get_string("potential", "preset", "zero");
    if (pot == "zero")
        cfg.potential = Potential::zero();
    else if (pot == "gaussian-well")
        cfg.potential = Potential::gaussian_well(ini.get_double("potential", "depth", 0.1),
                                                 ini.get_double("potential", "width", 1.5),
                                                 cfg.dn());
    else
        throw config_error("[potential] preset: unknown preset '" + pot + "'");

    cfg.validate();
    return cfg;
}

IniFile model_config_to_ini(const ModelConfig& cfg) {
    IniFile ini;
    auto num = [](double v) { return CsvWriter::format(v); };
    ini.set("model", "d", std::to_string(cfg.d));
    ini.set("model", "n", std::to_string(cfg.n));
    std::string masses;
    for (int j = 0; j < cfg.n; ++j)
        masses += (j ? "," : "") + num(cfg.masses[j]);
    ini.set("model", "masses", masses);
    ini.set("model", "relativistic", cfg.relativistic ? "true" : "false");
    ini.set("model", "sigma", num(cfg.sigma));
    ini.set("model", "field_mass", num(cfg.dispersion.mass));
    ini.set("grid", "kmax", num(cfg.grid.points[cfg.grid.size() - 1]));
    ini.set("grid", "points", std::to_string(cfg.grid.size()));
    ini.set("formfactor", "preset", cfg.chi.preset_name());
    ini.set("formfactor", "amplitude", num(cfg.chi.amplitude));
    ini.set("formfactor", "width", num(cfg.chi.width));
    ini.set("potential", "preset", cfg.potential.preset_name());
    ini.set("potential", "depth", num(cfg.potential.depth));
    ini.set("potential", "width", num(cfg.potential.width));
    return ini;
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const IniFile& ini) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(ini.serialize())));
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
    if (!out_)
        throw config_error("cannot open output file '" + path + "'");
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
    out_ << "# " << key << ": " << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << format(values[i]);
    out_ << "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i)
        out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
}

std::string CsvWriter::format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error("cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw config_error("cannot open output file '" + path + "'");
    out << content;
}

} // namespace nkg
