#include "codeeff/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "codeeff/error.hpp"

namespace codeeff {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

Config Config::parse(std::string_view text) {
    Config c;
    std::size_t line_no = 0, pos = 0;
    while (pos < text.size()) {
        ++line_no;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty() || line.front() == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("config line " + std::to_string(line_no) + ": expected key=value", line_no);
        std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + ": empty key", line_no);
        c.values_[key] = std::string(trim(line.substr(eq + 1)));
        c.lines_[key] = line_no;
    }
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::optional<std::string> Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        double d = std::stod(*v, &used);
        if (used == v->size()) return d;
    } catch (const std::exception&) {
    }
    throw ParseError("config key '" + key + "': '" + *v + "' is not a number", lines_.count(key) ? lines_.at(key) : 0);
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size())
        throw ParseError("config key '" + key + "': '" + *v + "' is not an integer",
                         lines_.count(key) ? lines_.at(key) : 0);
    return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw ParseError("config key '" + key + "': '" + *v + "' is not a boolean", lines_.count(key) ? lines_.at(key) : 0);
}

void Config::require_known(const std::set<std::string>& known) const {
    for (const auto& [key, value] : values_)
        if (!known.contains(key))
            throw ParseError("unknown config key '" + key + "'", lines_.count(key) ? lines_.at(key) : 0);
}

}  // namespace codeeff
