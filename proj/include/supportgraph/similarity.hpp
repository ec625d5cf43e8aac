#ifndef SUPPORTGRAPH_SIMILARITY_HPP
#define SUPPORTGRAPH_SIMILARITY_HPP

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace supportgraph {

/// Word vectors keyed by lowercase word. Read-only after loading.
class EmbeddingTable {
public:
    EmbeddingTable() = default;

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return norms_.size(); }

    /// Adds a vector; the first insertion of a word wins. Throws DimensionError
    /// on a ragged vector and ParseError on non-finite components.
    void add(std::string word, std::span<const double> vector);

    /// Index of `word` (already lowercase) or -1.
    long index_of(std::string_view word) const;
    std::span<const double> vector(long index) const;
    double norm(long index) const { return norms_[static_cast<std::size_t>(index)]; }

    /// Cosine of two table entries; 0 when either vector is zero.
    double cosine(long a, long b) const;

private:
    std::size_t dimension_ = 0;
    std::vector<double> data_;
    std::vector<double> norms_;
    std::unordered_map<std::string, long> index_;
};

EmbeddingTable load_embeddings(const std::filesystem::path& path);
EmbeddingTable read_embeddings(std::istream& in);

class Stopwords {
public:
    /// The list compiled in from data/stopwords.txt.
    static const Stopwords& builtin();
    static Stopwords load(const std::filesystem::path& path);
    static Stopwords parse(std::string_view lines);

    bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

/// Lowercase, split on punctuation/whitespace and drop stopwords; when that
/// empties the phrase the unstripped words are kept instead.
std::vector<std::string> content_words(std::string_view phrase, const Stopwords& stopwords = Stopwords::builtin());

/// A phrase normalized once and resolved against a table, so that pairwise
/// scoring does no string hashing.
struct PreparedPhrase {
    std::vector<std::string> words;
    std::vector<long> vocab;   // table index per word, -1 when out of vocabulary
    std::vector<double> mean;  // mean in-vocabulary vector; empty when none

    bool empty() const { return words.empty(); }
};

PreparedPhrase prepare(std::string_view phrase, const EmbeddingTable& table,
                       const Stopwords& stopwords = Stopwords::builtin());

/// Directional coverage: mean over hypothesis words of the best match in the
/// premise (1 on exact match, else clamped cosine, 0 when out of vocabulary).
double entailment_score(const PreparedPhrase& hypothesis, const PreparedPhrase& premise, const EmbeddingTable& table);
/// Clamped cosine of the mean in-vocabulary vectors; 1 on equal normalized surfaces.
double phrase_sim(const PreparedPhrase& a, const PreparedPhrase& b, const EmbeddingTable& table);
/// min of both entailment directions.
double symmetric_score(const PreparedPhrase& a, const PreparedPhrase& b, const EmbeddingTable& table);

double entailment_score(std::string_view hypothesis, std::string_view premise, const EmbeddingTable& table);
double phrase_sim(std::string_view a, std::string_view b, const EmbeddingTable& table);
double symmetric_score(std::string_view a, std::string_view b, const EmbeddingTable& table);

enum class ScorerKind { Entailment, PhraseSim, Symmetric };

std::string_view to_string(ScorerKind kind);
double score(ScorerKind kind, const PreparedPhrase& a, const PreparedPhrase& b, const EmbeddingTable& table);
double score(ScorerKind kind, std::string_view a, std::string_view b, const EmbeddingTable& table);

} // namespace supportgraph

#endif
