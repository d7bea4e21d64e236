#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace verity {

// Lowercasing whitespace/punctuation tokenizer. Runs of letters, digits, and
// bytes >= 0x80 form words; every other non-space byte is its own token.
std::vector<std::string> split_tokens(std::string_view text);

// Token-id table with two reserved entries. Word ids are assigned by
// descending corpus frequency, ties broken lexicographically, so the table is
// a pure function of the corpus.
class Vocabulary {
public:
    static constexpr int eos_id = 0;
    static constexpr int unk_id = 1;

    Vocabulary() = default;

    // max_words = 0 keeps every distinct token.
    static Vocabulary build(const std::vector<std::string>& texts, std::size_t max_words = 0);

    // Rebuild from a stored id-ordered token list (first two entries are the
    // reserved ones).
    static Vocabulary from_tokens(std::vector<std::string> tokens);

    std::size_t size() const { return tokens_.size(); }
    int id_of(const std::string& token) const;
    const std::vector<std::string>& tokens() const { return tokens_; }

    // Token ids for text with EOS appended. If the result would exceed
    // max_tokens the front is kept and EOS stays last. max_tokens must be
    // >= 1.
    std::vector<int> encode(std::string_view text, std::size_t max_tokens) const;

private:
    std::vector<std::string> tokens_;
    std::vector<std::pair<std::string, int>> index_; // sorted by token
};

} // namespace verity
