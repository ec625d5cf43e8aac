#ifndef SUPPORTGRAPH_TESTS_SUPPORT_HPP
#define SUPPORTGRAPH_TESTS_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "supportgraph/reasoners.hpp"
#include "supportgraph/similarity.hpp"
#include "supportgraph/view_model.hpp"

namespace sgtest {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(SUPPORTGRAPH_FIXTURES) / name;
}

inline const supportgraph::EmbeddingTable& table() {
    static const supportgraph::EmbeddingTable t = supportgraph::load_embeddings(fixture("embeddings.txt"));
    return t;
}

inline supportgraph::QAInstance load(const std::string& name) { return supportgraph::load_instance(fixture(name)); }

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fixtures small enough for the exhaustive oracle under every reasoner that applies.
inline const char* const kParaphrases[] = {"morata_a_simple.json", "morata_b_appositive.json",
                                           "morata_c_coref.json"};

inline const char* const kAllFixtures[] = {
    "micro_comb1.json",      "micro_comb1_one_sentence.json", "micro_comb2.json",
    "morata_a_simple.json",  "morata_b_appositive.json",      "morata_c_coref.json",
    "morata_full.json",      "no_prep.json",                  "two_chains.json",
    "two_frames.json",       "eval/05_psg.json",              "eval/06_united.json",
    "eval/07_unrelated.json", "eval/08_shallow_move.json",    "eval/10_plays_for.json",
};

} // namespace sgtest

#endif
