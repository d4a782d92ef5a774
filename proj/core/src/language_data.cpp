#include "codeeff/language_data.hpp"

namespace codeeff::data {
extern const char* const k_python_keywords;
extern const char* const k_python_builtins;
extern const char* const k_denylist;
extern const char* const k_tags;
}  // namespace codeeff::data

namespace codeeff::lang {

std::vector<std::string> parse_word_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.remove_suffix(1);
        if (!line.empty() && line.front() != '#') out.emplace_back(line);
        pos = end + 1;
    }
    return out;
}

namespace {

std::set<std::string, std::less<>> to_set(const char* text) {
    auto words = parse_word_list(text);
    return {words.begin(), words.end()};
}

}  // namespace

const std::set<std::string, std::less<>>& keywords() {
    static const auto set = to_set(data::k_python_keywords);
    return set;
}

const std::set<std::string, std::less<>>& builtins() {
    static const auto set = to_set(data::k_python_builtins);
    return set;
}

const std::set<std::string, std::less<>>& tag_vocabulary() {
    static const auto set = to_set(data::k_tags);
    return set;
}

const std::vector<std::string>& default_denylist() {
    static const auto list = parse_word_list(data::k_denylist);
    return list;
}

bool is_keyword(std::string_view word) { return keywords().contains(word); }
bool is_builtin(std::string_view word) { return builtins().contains(word); }

}  // namespace codeeff::lang
