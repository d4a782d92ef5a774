#include "codeeff/lccs.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace codeeff {

namespace {

// Suffix automaton over the bytes of one string.
class SuffixAutomaton {
public:
    explicit SuffixAutomaton(std::string_view s) {
        states_.reserve(2 * s.size() + 1);
        states_.push_back(State{});
        for (char c : s) extend(static_cast<unsigned char>(c));
    }

    // Longest substring of `t` that occurs in the automaton's string.
    std::size_t longest_match(std::string_view t) const {
        int v = 0;
        std::size_t len = 0, best = 0;
        for (char ch : t) {
            auto c = static_cast<unsigned char>(ch);
            while (v != 0 && states_[static_cast<std::size_t>(v)].next[c] < 0) {
                v = states_[static_cast<std::size_t>(v)].link;
                len = states_[static_cast<std::size_t>(v)].len;
            }
            int to = states_[static_cast<std::size_t>(v)].next[c];
            if (to >= 0) {
                v = to;
                ++len;
            }
            best = std::max(best, len);
        }
        return best;
    }

private:
    struct State {
        std::size_t len = 0;
        int link = -1;
        std::array<int, 256> next;
        State() { next.fill(-1); }
    };

    void extend(unsigned char c) {
        auto cur = static_cast<int>(states_.size());
        states_.push_back(State{});
        states_.back().len = states_[static_cast<std::size_t>(last_)].len + 1;
        int p = last_;
        while (p != -1 && states_[static_cast<std::size_t>(p)].next[c] < 0) {
            states_[static_cast<std::size_t>(p)].next[c] = cur;
            p = states_[static_cast<std::size_t>(p)].link;
        }
        if (p == -1) {
            states_[static_cast<std::size_t>(cur)].link = 0;
        } else {
            int q = states_[static_cast<std::size_t>(p)].next[c];
            if (states_[static_cast<std::size_t>(p)].len + 1 == states_[static_cast<std::size_t>(q)].len) {
                states_[static_cast<std::size_t>(cur)].link = q;
            } else {
                auto clone = static_cast<int>(states_.size());
                State copy = states_[static_cast<std::size_t>(q)];
                copy.len = states_[static_cast<std::size_t>(p)].len + 1;
                states_.push_back(copy);
                while (p != -1 && states_[static_cast<std::size_t>(p)].next[c] == q) {
                    states_[static_cast<std::size_t>(p)].next[c] = clone;
                    p = states_[static_cast<std::size_t>(p)].link;
                }
                states_[static_cast<std::size_t>(q)].link = clone;
                states_[static_cast<std::size_t>(cur)].link = clone;
            }
        }
        last_ = cur;
    }

    std::vector<State> states_;
    int last_ = 0;
};

}  // namespace

std::size_t longest_common_substring(std::string_view a, std::string_view b) {
    if (a.empty() || b.empty()) return 0;
    // Build over the shorter text: fewer states.
    if (a.size() > b.size()) std::swap(a, b);
    return SuffixAutomaton(a).longest_match(b);
}

double lccs_similarity(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    return static_cast<double>(longest_common_substring(a, b)) / static_cast<double>(std::max(a.size(), b.size()));
}

}  // namespace codeeff
