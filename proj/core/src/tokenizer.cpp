#include "verity/tokenizer.hpp"

#include "verity/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace verity {

namespace {

bool is_word_byte(unsigned char c) {
    return std::isalnum(c) || c >= 0x80;
}

} // namespace

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            flush();
        } else if (is_word_byte(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
            tokens.push_back(std::string(1, static_cast<char>(c)));
        }
    }
    flush();
    return tokens;
}

Vocabulary Vocabulary::build(const std::vector<std::string>& texts, std::size_t max_words) {
    std::map<std::string, std::size_t> counts;
    for (const std::string& text : texts) {
        for (std::string& tok : split_tokens(text)) {
            ++counts[std::move(tok)];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (max_words != 0 && ranked.size() > max_words) {
        ranked.resize(max_words);
    }

    std::vector<std::string> tokens;
    tokens.reserve(ranked.size() + 2);
    tokens.emplace_back("<eos>");
    tokens.emplace_back("<unk>");
    for (auto& [tok, _] : ranked) tokens.push_back(std::move(tok));
    return from_tokens(std::move(tokens));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
    if (tokens.size() < 2) {
        throw InvalidArgument("vocabulary needs at least the two reserved entries");
    }
    Vocabulary vocab;
    vocab.tokens_ = std::move(tokens);
    vocab.index_.reserve(vocab.tokens_.size());
    for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
        vocab.index_.emplace_back(vocab.tokens_[i], static_cast<int>(i));
    }
    std::sort(vocab.index_.begin(), vocab.index_.end());
    return vocab;
}

int Vocabulary::id_of(const std::string& token) const {
    auto it = std::lower_bound(index_.begin(), index_.end(), token,
                               [](const auto& entry, const std::string& t) {
                                   return entry.first < t;
                               });
    if (it != index_.end() && it->first == token) return it->second;
    return unk_id;
}

std::vector<int> Vocabulary::encode(std::string_view text, std::size_t max_tokens) const {
    if (max_tokens < 1) throw InvalidArgument("encode requires max_tokens >= 1");
    std::vector<int> ids;
    for (const std::string& tok : split_tokens(text)) {
        ids.push_back(id_of(tok));
    }
    if (ids.size() + 1 > max_tokens) {
        ids.resize(max_tokens - 1);
    }
    ids.push_back(eos_id);
    return ids;
}

} // namespace verity
