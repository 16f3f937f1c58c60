#include "matting/common/kvfile.hpp"

#include <fstream>
#include <sstream>

#include "matting/common/errors.hpp"

namespace matting {

KvMap load_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open key-value file: " + path);
    KvMap kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": expected key<TAB>value");
        }
        kv[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return kv;
}

void save_kv_file(const KvMap& kv, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write key-value file: " + path);
    for (const auto& [k, v] : kv) out << k << '\t' << v << '\n';
    if (!out) throw DataError("write failed: " + path);
}

double kv_get_double(const KvMap& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw DataError("bad numeric value for key '" + key + "': " + it->second);
    }
}

int kv_get_int(const KvMap& kv, const std::string& key, int fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        size_t pos = 0;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw DataError("bad integer value for key '" + key + "': " + it->second);
    }
}

bool kv_get_bool(const KvMap& kv, const std::string& key, bool fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const std::string& s = it->second;
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    throw DataError("bad boolean value for key '" + key + "': " + s);
}

std::string kv_get_string(const KvMap& kv, const std::string& key,
                          const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

std::string kv_format(double v) {
    for (int prec = 1; prec <= 17; ++prec) {
        std::ostringstream os;
        os.precision(prec);
        os << v;
        if (std::stod(os.str()) == v) return os.str();
    }
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace matting
