#pragma once

#include "verity/statement.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace verity {

enum class SyntheticStyle {
    kb, // 4-way groups: one kb_original truth plus three kb_perturbed falsehoods
    qa, // mix of 2..8-way question_choice groups and singleton boolean groups
};

const char* to_string(SyntheticStyle style);
SyntheticStyle synthetic_style_from_string(std::string_view text);

struct SyntheticSpec {
    std::string name = "synthetic";
    SyntheticStyle style = SyntheticStyle::qa;
    std::size_t n_groups = 100;
    // qa style only: fraction of groups emitted as singleton boolean groups.
    double boolean_fraction = 0.3;
    // qa style multiple-choice width range, inclusive.
    std::size_t min_choices = 2;
    std::size_t max_choices = 8;
    Stage stage = Stage::stage_a;
};

// Deterministic labeled corpus whose classes are separable by keyword: every
// correct statement carries one token from a truth pool, every incorrect one
// a token from a disjoint falsehood pool, over shared filler. Both styles use
// the same pools, so a model fit on one transfers to the other. Every emitted
// group passes validation.
DatasetPartition generate_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace verity
