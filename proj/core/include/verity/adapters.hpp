#pragma once

#include "verity/forge.hpp"
#include "verity/statement.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace verity {

struct ForgeOptions {
    std::uint64_t seed = 0;
    std::size_t kb_k = 3;                  // perturbations per knowledge base entry
    const AnswerSampler* sampler = nullptr; // non-null enables falsehood augmentation
    FalsehoodOptions falsehoods;
};

// Named source adapters. Each reads a raw file in its documented format and
// emits validated statement groups:
//   mcq        JSONL {id?, question, choices, answer_index, form?}
//   boolq      JSONL {id?, question, answer}
//   kb         JSONL {id?, subject, text}; the subject pool is the whole file
//   skd        JSONL {id?, head, relation, tail, valid}
//   com2sense  JSONL {id?, sent_1, sent_2, correct}; paired sentences
//   cycic      JSONL {id?, type, question, choices?, answer_index?}; keeps
//              only type == "mc"
//   comve      CSV id,sent0,sent1,against; 'against' marks the bad sentence
//   i2d2       JSONL {id?, statement, label}; several input files are merged
//              in argument order
// Missing ids become "<adapter>-<line>". Every randomized step draws from a
// per-line seed derived from options.seed, so output is independent of any
// other line.
std::vector<StatementGroup> run_adapter(const std::string& name,
                                        const std::vector<std::filesystem::path>& inputs,
                                        const ForgeOptions& options);

const std::vector<std::string>& adapter_names();

} // namespace verity
