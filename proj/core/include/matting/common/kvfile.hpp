#pragma once

#include <map>
#include <string>

namespace matting {

// Tab-separated key-value text, one "key<TAB>value" pair per line.
// Blank lines and lines starting with '#' are skipped. Used by training
// configs and degradation specs.
using KvMap = std::map<std::string, std::string>;

KvMap load_kv_file(const std::string& path);
void save_kv_file(const KvMap& kv, const std::string& path);

// Typed lookups with defaults. Throw DataError on unparseable values.
double kv_get_double(const KvMap& kv, const std::string& key, double fallback);
int kv_get_int(const KvMap& kv, const std::string& key, int fallback);
bool kv_get_bool(const KvMap& kv, const std::string& key, bool fallback);
std::string kv_get_string(const KvMap& kv, const std::string& key, const std::string& fallback);

// Round-trippable decimal text for a double (shortest form that reparses
// to the same value).
std::string kv_format(double v);

}  // namespace matting
