#include "supportgraph/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "supportgraph/errors.hpp"

namespace supportgraph {

namespace {

#include "stopwords.inc"

// ASCII-only folding keeps scores independent of the process locale.
char fold(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_word_byte(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::vector<std::string> split_words(std::string_view phrase) {
    std::vector<std::string> words;
    std::string current;
    for (const char c : phrase) {
        if (is_word_byte(c)) {
            current.push_back(fold(c));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        words.push_back(std::move(current));
    }
    return words;
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

double word_pair(const PreparedPhrase& a, std::size_t i, const PreparedPhrase& b, std::size_t j,
                 const EmbeddingTable& table) {
    if (a.words[i] == b.words[j]) {
        return 1.0;
    }
    if (a.vocab[i] < 0 || b.vocab[j] < 0) {
        return 0.0;
    }
    return clamp_unit(table.cosine(a.vocab[i], b.vocab[j]));
}

} // namespace

void EmbeddingTable::add(std::string word, std::span<const double> vector) {
    if (vector.empty()) {
        throw DimensionError("embedding for '" + word + "' has no components");
    }
    if (norms_.empty() && dimension_ == 0) {
        dimension_ = vector.size();
    } else if (vector.size() != dimension_) {
        throw DimensionError("embedding for '" + word + "' has " + std::to_string(vector.size()) +
                             " components, expected " + std::to_string(dimension_));
    }
    double sq = 0.0;
    for (const double x : vector) {
        if (!std::isfinite(x)) {
            throw ParseError("embedding for '" + word + "' has a non-finite component");
        }
        sq += x * x;
    }
    std::transform(word.begin(), word.end(), word.begin(), fold);
    if (index_.contains(word)) {
        return;
    }
    index_.emplace(std::move(word), static_cast<long>(norms_.size()));
    data_.insert(data_.end(), vector.begin(), vector.end());
    norms_.push_back(std::sqrt(sq));
}

long EmbeddingTable::index_of(std::string_view word) const {
    const auto it = index_.find(std::string(word));
    return it == index_.end() ? -1 : it->second;
}

std::span<const double> EmbeddingTable::vector(long index) const {
    return {data_.data() + static_cast<std::size_t>(index) * dimension_, dimension_};
}

double EmbeddingTable::cosine(long a, long b) const {
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    const auto va = vector(a);
    const auto vb = vector(b);
    double dot = 0.0;
    for (std::size_t k = 0; k < dimension_; ++k) {
        dot += va[k] * vb[k];
    }
    return dot / (na * nb);
}

EmbeddingTable read_embeddings(std::istream& in) {
    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string word;
        if (!(fields >> word)) {
            continue;  // blank line
        }
        values.clear();
        std::string token;
        while (fields >> token) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(token, &used));
                if (used != token.size()) {
                    throw std::invalid_argument(token);
                }
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(line_no) + ": '" + token + "' is not a number");
            }
        }
        try {
            table.add(word, values);
        } catch (const DimensionError& e) {
            throw DimensionError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open embeddings file " + path.string());
    }
    return read_embeddings(in);
}

const Stopwords& Stopwords::builtin() {
    static const Stopwords instance = parse(kBuiltinStopwords);
    return instance;
}

Stopwords Stopwords::parse(std::string_view lines) {
    Stopwords out;
    std::istringstream in{std::string(lines)};
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        for (auto& word : split_words(line)) {
            out.words_.insert(std::move(word));
        }
    }
    return out;
}

Stopwords Stopwords::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open stopword file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::vector<std::string> content_words(std::string_view phrase, const Stopwords& stopwords) {
    auto words = split_words(phrase);
    std::vector<std::string> content;
    for (const auto& w : words) {
        if (!stopwords.contains(w)) {
            content.push_back(w);
        }
    }
    return content.empty() ? words : content;
}

PreparedPhrase prepare(std::string_view phrase, const EmbeddingTable& table, const Stopwords& stopwords) {
    PreparedPhrase out;
    out.words = content_words(phrase, stopwords);
    std::size_t in_vocab = 0;
    for (const auto& w : out.words) {
        const long idx = table.index_of(w);
        out.vocab.push_back(idx);
        if (idx < 0) {
            continue;
        }
        if (out.mean.empty()) {
            out.mean.assign(table.dimension(), 0.0);
        }
        const auto v = table.vector(idx);
        for (std::size_t k = 0; k < v.size(); ++k) {
            out.mean[k] += v[k];
        }
        ++in_vocab;
    }
    for (auto& x : out.mean) {
        x /= static_cast<double>(in_vocab);
    }
    return out;
}

double entailment_score(const PreparedPhrase& hypothesis, const PreparedPhrase& premise, const EmbeddingTable& table) {
    if (hypothesis.empty() || premise.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < hypothesis.words.size(); ++i) {
        double best = 0.0;
        for (std::size_t j = 0; j < premise.words.size() && best < 1.0; ++j) {
            best = std::max(best, word_pair(hypothesis, i, premise, j, table));
        }
        total += best;
    }
    return clamp_unit(total / static_cast<double>(hypothesis.words.size()));
}

double phrase_sim(const PreparedPhrase& a, const PreparedPhrase& b, const EmbeddingTable& table) {
    if (a.empty() || b.empty()) {
        return 0.0;
    }
    if (a.words == b.words) {
        return 1.0;
    }
    if (a.mean.empty() || b.mean.empty()) {
        return 0.0;
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t k = 0; k < table.dimension(); ++k) {
        dot += a.mean[k] * b.mean[k];
        na += a.mean[k] * a.mean[k];
        nb += b.mean[k] * b.mean[k];
    }
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return clamp_unit(dot / (std::sqrt(na) * std::sqrt(nb)));
}

double symmetric_score(const PreparedPhrase& a, const PreparedPhrase& b, const EmbeddingTable& table) {
    return std::min(entailment_score(a, b, table), entailment_score(b, a, table));
}

double entailment_score(std::string_view hypothesis, std::string_view premise, const EmbeddingTable& table) {
    return entailment_score(prepare(hypothesis, table), prepare(premise, table), table);
}

double phrase_sim(std::string_view a, std::string_view b, const EmbeddingTable& table) {
    return phrase_sim(prepare(a, table), prepare(b, table), table);
}

double symmetric_score(std::string_view a, std::string_view b, const EmbeddingTable& table) {
    return symmetric_score(prepare(a, table), prepare(b, table), table);
}

std::string_view to_string(ScorerKind kind) {
    switch (kind) {
    case ScorerKind::Entailment: return "entailment";
    case ScorerKind::PhraseSim: return "phrase_sim";
    case ScorerKind::Symmetric: return "symmetric";
    }
    return "?";
}

double score(ScorerKind kind, const PreparedPhrase& a, const PreparedPhrase& b, const EmbeddingTable& table) {
    switch (kind) {
    case ScorerKind::Entailment: return entailment_score(a, b, table);
    case ScorerKind::PhraseSim: return phrase_sim(a, b, table);
    case ScorerKind::Symmetric: return symmetric_score(a, b, table);
    }
    return 0.0;
}

double score(ScorerKind kind, std::string_view a, std::string_view b, const EmbeddingTable& table) {
    return score(kind, prepare(a, table), prepare(b, table), table);
}

} // namespace supportgraph
