#ifndef SUPPORTGRAPH_VIEW_MODEL_HPP
#define SUPPORTGRAPH_VIEW_MODEL_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace supportgraph {

enum class ViewKind {
    Tokens,
    ShallowParse,
    Dependency,
    Coreference,
    VerbSRL,
    PrepSRL,
    CommaSRL,
    NomSRL,
};

inline constexpr std::array<ViewKind, 8> kAllViewKinds = {
    ViewKind::Tokens,  ViewKind::ShallowParse, ViewKind::Dependency, ViewKind::Coreference,
    ViewKind::VerbSRL, ViewKind::PrepSRL,      ViewKind::CommaSRL,   ViewKind::NomSRL,
};

std::string_view to_string(ViewKind kind);
std::optional<ViewKind> parse_view_kind(std::string_view name);
bool is_srl(ViewKind kind);

inline constexpr std::string_view kPredicateLabel = "Predicate";

/// Half-open range of Unicode code point offsets into a text.
struct CharRange {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - start; }
    bool contains(const CharRange& other) const { return start <= other.start && other.end <= end; }
    bool overlaps(const CharRange& other) const { return start < other.end && other.start < end; }

    friend bool operator==(const CharRange&, const CharRange&) = default;
    friend auto operator<=>(const CharRange&, const CharRange&) = default;
};

struct Constituent {
    int id = 0;
    CharRange span;
    std::string surface;
    std::string label;
    std::optional<int> frame;

    bool is_predicate() const { return label == kPredicateLabel; }

    friend bool operator==(const Constituent&, const Constituent&) = default;
};

struct Relation {
    int source = 0;
    int target = 0;
    std::string label;

    friend bool operator==(const Relation&, const Relation&) = default;
    friend auto operator<=>(const Relation&, const Relation&) = default;
};

struct View {
    ViewKind kind = ViewKind::Tokens;
    std::vector<Constituent> constituents;
    std::vector<Relation> relations;

    const Constituent* find(int id) const;
    const Constituent& at(int id) const;

    /// Predicate of an SRL frame, or nullptr.
    const Constituent* predicate_of(int frame) const;

    /// Frame / cluster ids in ascending order.
    std::vector<int> frame_ids() const;

    friend bool operator==(const View&, const View&) = default;
};

/// One text (question, answer option or paragraph) with its semantic views.
///
/// Instances are validated on construction and immutable afterwards. Spans
/// are code point offsets; the UTF-8 byte mapping is kept internally.
class AnnotatedText {
public:
    AnnotatedText() = default;

    /// Validates every view against `text` and fills constituent surfaces.
    /// Throws SchemaError, SpanError or FrameError.
    static AnnotatedText build(std::string text, std::vector<View> views,
                               std::optional<std::vector<CharRange>> declared_sentences = std::nullopt);

    const std::string& text() const { return text_; }
    std::size_t length() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::string slice(CharRange range) const;

    bool has(ViewKind kind) const { return views_.contains(kind); }
    const View* view(ViewKind kind) const;
    /// Throws MissingViewError mentioning `owner` when the view is absent.
    const View& require(ViewKind kind, std::string_view owner) const;
    const std::map<ViewKind, View>& views() const { return views_; }

    const std::optional<std::vector<CharRange>>& declared_sentences() const { return declared_; }
    const std::optional<std::vector<CharRange>>& sentences() const { return sentences_; }

    friend bool operator==(const AnnotatedText& a, const AnnotatedText& b) {
        return a.text_ == b.text_ && a.views_ == b.views_ && a.declared_ == b.declared_;
    }

private:
    std::string text_;
    std::vector<std::size_t> offsets_;  // code point index -> byte offset, plus end
    std::map<ViewKind, View> views_;
    std::optional<std::vector<CharRange>> declared_;
    std::optional<std::vector<CharRange>> sentences_;
};

/// Sentence ranges of a text: declared in the file, else split at
/// sentence-final punctuation tokens/chunks. Throws MissingViewError when no
/// boundary source exists.
std::vector<CharRange> sentence_index(const AnnotatedText& text);

/// Index of the sentence containing `span`, or -1.
int sentence_of(const std::vector<CharRange>& sentences, CharRange span);

struct QAInstance {
    AnnotatedText question;
    std::vector<AnnotatedText> answers;
    AnnotatedText paragraph;
    std::optional<int> gold;

    friend bool operator==(const QAInstance&, const QAInstance&) = default;
};

QAInstance parse_instance(const nlohmann::json& doc);
QAInstance parse_instance(std::string_view json_text);
/// Throws SchemaError if the file is missing or not valid JSON.
QAInstance load_instance(const std::filesystem::path& path);

nlohmann::json to_json(const AnnotatedText& text);
nlohmann::json to_json(const QAInstance& instance);
std::string serialize(const QAInstance& instance);

} // namespace supportgraph

#endif
