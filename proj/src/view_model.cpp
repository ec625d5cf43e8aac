#include "supportgraph/view_model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "supportgraph/errors.hpp"

namespace supportgraph {

namespace {

constexpr std::array<std::string_view, 8> kViewNames = {
    "Tokens", "ShallowParse", "Dependency", "Coreference", "VerbSRL", "PrepSRL", "CommaSRL", "NomSRL",
};

// Byte offset of every code point, plus the end offset. Throws on malformed UTF-8.
std::vector<std::size_t> utf8_offsets(const std::string& text) {
    std::vector<std::size_t> offsets;
    offsets.reserve(text.size() + 1);
    std::size_t i = 0;
    while (i < text.size()) {
        offsets.push_back(i);
        const auto lead = static_cast<unsigned char>(text[i]);
        std::size_t width = 0;
        if (lead < 0x80) {
            width = 1;
        } else if ((lead & 0xE0) == 0xC0 && lead >= 0xC2) {
            width = 2;
        } else if ((lead & 0xF0) == 0xE0) {
            width = 3;
        } else if ((lead & 0xF8) == 0xF0 && lead <= 0xF4) {
            width = 4;
        } else {
            throw SchemaError("text is not valid UTF-8 (byte " + std::to_string(i) + ")");
        }
        if (i + width > text.size()) {
            throw SchemaError("text is not valid UTF-8 (truncated sequence)");
        }
        for (std::size_t k = 1; k < width; ++k) {
            if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
                throw SchemaError("text is not valid UTF-8 (bad continuation byte)");
            }
        }
        i += width;
    }
    offsets.push_back(text.size());
    return offsets;
}

std::string describe(ViewKind kind, const Constituent& c) {
    std::ostringstream out;
    out << to_string(kind) << " constituent " << c.id << " [" << c.span.start << "," << c.span.end << ")";
    return out.str();
}

void validate_srl(View& view) {
    std::map<int, std::vector<const Constituent*>> frames;
    for (const auto& c : view.constituents) {
        if (!c.frame) {
            throw FrameError(describe(view.kind, c) + " has no frame id");
        }
        frames[*c.frame].push_back(&c);
    }
    std::vector<Relation> expected;
    for (const auto& [frame, members] : frames) {
        const Constituent* predicate = nullptr;
        for (const auto* c : members) {
            if (!c->is_predicate()) {
                continue;
            }
            if (predicate != nullptr) {
                throw FrameError(std::string(to_string(view.kind)) + " frame " + std::to_string(frame) +
                                 " has more than one predicate");
            }
            predicate = c;
        }
        if (predicate == nullptr) {
            throw FrameError(std::string(to_string(view.kind)) + " frame " + std::to_string(frame) +
                             " has no predicate");
        }
        for (const auto* c : members) {
            if (c != predicate) {
                expected.push_back({predicate->id, c->id, c->label});
            }
        }
    }
    std::sort(expected.begin(), expected.end());
    if (view.relations.empty()) {
        view.relations = std::move(expected);
        return;
    }
    auto given = view.relations;
    std::sort(given.begin(), given.end());
    if (given != expected) {
        throw FrameError(std::string(to_string(view.kind)) +
                         " relations must be exactly the predicate->argument links of each frame");
    }
}

void validate_coreference(const View& view) {
    if (!view.relations.empty()) {
        throw SchemaError("Coreference view must not carry relations (membership is by cluster id)");
    }
    std::map<int, int> sizes;
    for (const auto& c : view.constituents) {
        if (!c.frame) {
            throw FrameError(describe(view.kind, c) + " has no cluster id");
        }
        ++sizes[*c.frame];
    }
    for (const auto& [cluster, size] : sizes) {
        if (size < 2) {
            throw FrameError("Coreference cluster " + std::to_string(cluster) + " has a single mention");
        }
    }
}

void validate_dependency(const View& view, const std::optional<std::vector<CharRange>>& sentences) {
    std::map<int, int> head;
    for (const auto& r : view.relations) {
        if (r.source == r.target) {
            throw SchemaError("Dependency relation is a self-loop on " + std::to_string(r.source));
        }
        if (!head.emplace(r.target, r.source).second) {
            throw SchemaError("Dependency token " + std::to_string(r.target) + " has two heads");
        }
    }
    for (const auto& c : view.constituents) {
        // Walking up from any node must terminate within |nodes| steps.
        int node = c.id;
        std::size_t steps = 0;
        for (auto it = head.find(node); it != head.end(); it = head.find(node)) {
            node = it->second;
            if (++steps > view.constituents.size()) {
                throw SchemaError("Dependency relations contain a cycle");
            }
        }
    }
    // One root per sentence that carries dependency tokens.
    std::map<int, int> roots_per_sentence;
    for (const auto& c : view.constituents) {
        const int sentence = sentences ? sentence_of(*sentences, c.span) : 0;
        auto& roots = roots_per_sentence[sentence];
        if (!head.contains(c.id)) {
            ++roots;
        }
    }
    for (const auto& [sentence, roots] : roots_per_sentence) {
        if (roots != 1) {
            throw SchemaError("Dependency view must have exactly one root per sentence");
        }
    }
}

bool is_sentence_final(std::string_view surface) {
    if (surface.empty()) {
        return false;
    }
    const char last = surface.back();
    return last == '.' || last == '!' || last == '?';
}

std::optional<std::vector<CharRange>> fallback_sentences(const std::map<ViewKind, View>& views) {
    const View* source = nullptr;
    if (auto it = views.find(ViewKind::Tokens); it != views.end()) {
        source = &it->second;
    } else if (auto it2 = views.find(ViewKind::ShallowParse); it2 != views.end()) {
        source = &it2->second;
    }
    if (source == nullptr) {
        return std::nullopt;
    }
    std::vector<const Constituent*> ordered;
    for (const auto& c : source->constituents) {
        ordered.push_back(&c);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const Constituent* a, const Constituent* b) { return a->span < b->span; });
    std::vector<CharRange> result;
    std::optional<CharRange> open;
    for (const auto* c : ordered) {
        if (!open) {
            open = c->span;
        }
        open->end = std::max(open->end, c->span.end);
        if (is_sentence_final(c->surface)) {
            result.push_back(*open);
            open.reset();
        }
    }
    if (open) {
        result.push_back(*open);
    }
    return result;
}

// ---------------------------------------------------------------- JSON input

const nlohmann::json& field(const nlohmann::json& obj, const char* key, std::string_view where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw SchemaError(std::string(where) + ": missing required field '" + key + "'");
    }
    return obj.at(key);
}

CharRange parse_range(const nlohmann::json& value, std::string_view where) {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() || !value[1].is_number_integer()) {
        throw SchemaError(std::string(where) + ": range must be [int, int]");
    }
    const auto start = value[0].get<long long>();
    const auto end = value[1].get<long long>();
    if (start < 0 || end < 0) {
        throw SpanError(std::string(where) + ": negative offset");
    }
    return {static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
}

struct RawView {
    View view;
    std::map<int, std::string> surfaces;  // optional stored surfaces, checked against the text
};

RawView parse_view(ViewKind kind, const nlohmann::json& doc, const std::string& where) {
    RawView raw;
    raw.view.kind = kind;
    const auto& constituents = field(doc, "constituents", where);
    if (!constituents.is_array()) {
        throw SchemaError(where + ": 'constituents' must be an array");
    }
    for (const auto& c : constituents) {
        Constituent out;
        const auto& id = field(c, "id", where);
        if (!id.is_number_integer()) {
            throw SchemaError(where + ": constituent id must be an integer");
        }
        out.id = id.get<int>();
        out.span = parse_range(field(c, "span", where), where);
        const auto& label = field(c, "label", where);
        if (!label.is_string()) {
            throw SchemaError(where + ": constituent label must be a string");
        }
        out.label = label.get<std::string>();
        if (c.contains("frame") && !c.at("frame").is_null()) {
            if (!c.at("frame").is_number_integer()) {
                throw SchemaError(where + ": frame must be an integer");
            }
            out.frame = c.at("frame").get<int>();
        }
        if (c.contains("surface")) {
            if (!c.at("surface").is_string()) {
                throw SchemaError(where + ": surface must be a string");
            }
            raw.surfaces[out.id] = c.at("surface").get<std::string>();
        }
        raw.view.constituents.push_back(std::move(out));
    }
    if (doc.contains("relations")) {
        const auto& relations = doc.at("relations");
        if (!relations.is_array()) {
            throw SchemaError(where + ": 'relations' must be an array");
        }
        for (const auto& r : relations) {
            if (!r.is_array() || r.size() != 3 || !r[0].is_number_integer() || !r[1].is_number_integer() ||
                !r[2].is_string()) {
                throw SchemaError(where + ": relation must be [int, int, string]");
            }
            raw.view.relations.push_back({r[0].get<int>(), r[1].get<int>(), r[2].get<std::string>()});
        }
    }
    return raw;
}

AnnotatedText parse_text(const nlohmann::json& doc, const std::string& where) {
    const auto& text = field(doc, "text", where);
    if (!text.is_string()) {
        throw SchemaError(where + ": 'text' must be a string");
    }
    std::vector<View> views;
    std::vector<std::map<int, std::string>> stored_surfaces;
    if (doc.contains("views")) {
        const auto& v = doc.at("views");
        if (!v.is_object()) {
            throw SchemaError(where + ": 'views' must be an object");
        }
        for (const auto& [name, body] : v.items()) {
            const auto kind = parse_view_kind(name);
            if (!kind) {
                throw SchemaError(where + ": unknown view kind '" + name + "'");
            }
            auto raw = parse_view(*kind, body, where + "." + name);
            views.push_back(std::move(raw.view));
            stored_surfaces.push_back(std::move(raw.surfaces));
        }
    }
    std::optional<std::vector<CharRange>> sentences;
    if (doc.contains("sentences")) {
        const auto& s = doc.at("sentences");
        if (!s.is_array()) {
            throw SchemaError(where + ": 'sentences' must be an array");
        }
        sentences.emplace();
        for (const auto& range : s) {
            sentences->push_back(parse_range(range, where + ".sentences"));
        }
    }
    auto result = AnnotatedText::build(text.get<std::string>(), views, std::move(sentences));
    for (std::size_t i = 0; i < views.size(); ++i) {
        const View* built = result.view(views[i].kind);
        for (const auto& [id, surface] : stored_surfaces[i]) {
            if (built->at(id).surface != surface) {
                throw SpanError(where + ": " + describe(built->kind, built->at(id)) + " surface '" + surface +
                                "' does not match text slice '" + built->at(id).surface + "'");
            }
        }
    }
    return result;
}

nlohmann::json range_json(CharRange r) { return nlohmann::json::array({r.start, r.end}); }

} // namespace

std::string_view to_string(ViewKind kind) { return kViewNames[static_cast<std::size_t>(kind)]; }

std::optional<ViewKind> parse_view_kind(std::string_view name) {
    for (std::size_t i = 0; i < kViewNames.size(); ++i) {
        if (kViewNames[i] == name) {
            return kAllViewKinds[i];
        }
    }
    return std::nullopt;
}

bool is_srl(ViewKind kind) {
    return kind == ViewKind::VerbSRL || kind == ViewKind::PrepSRL || kind == ViewKind::CommaSRL ||
           kind == ViewKind::NomSRL;
}

const Constituent* View::find(int id) const {
    for (const auto& c : constituents) {
        if (c.id == id) {
            return &c;
        }
    }
    return nullptr;
}

const Constituent& View::at(int id) const {
    const auto* c = find(id);
    if (c == nullptr) {
        throw SchemaError(std::string(to_string(kind)) + ": no constituent with id " + std::to_string(id));
    }
    return *c;
}

const Constituent* View::predicate_of(int frame) const {
    for (const auto& c : constituents) {
        if (c.frame == frame && c.is_predicate()) {
            return &c;
        }
    }
    return nullptr;
}

std::vector<int> View::frame_ids() const {
    std::set<int> ids;
    for (const auto& c : constituents) {
        if (c.frame) {
            ids.insert(*c.frame);
        }
    }
    return {ids.begin(), ids.end()};
}

AnnotatedText AnnotatedText::build(std::string text, std::vector<View> views,
                                   std::optional<std::vector<CharRange>> declared_sentences) {
    AnnotatedText out;
    out.offsets_ = utf8_offsets(text);
    out.text_ = std::move(text);
    const std::size_t length = out.length();

    for (auto& view : views) {
        std::set<int> ids;
        for (auto& c : view.constituents) {
            if (!ids.insert(c.id).second) {
                throw SchemaError(std::string(to_string(view.kind)) + ": duplicate constituent id " +
                                  std::to_string(c.id));
            }
            if (c.span.start >= c.span.end || c.span.end > length) {
                throw SpanError(describe(view.kind, c) + " is empty or outside the text (length " +
                                std::to_string(length) + ")");
            }
            c.surface = out.slice(c.span);
        }
        for (const auto& r : view.relations) {
            if (!ids.contains(r.source) || !ids.contains(r.target)) {
                throw SchemaError(std::string(to_string(view.kind)) + ": relation references unknown constituent");
            }
        }
        if (is_srl(view.kind)) {
            validate_srl(view);
        } else if (view.kind == ViewKind::Coreference) {
            validate_coreference(view);
        }
        if (!out.views_.emplace(view.kind, std::move(view)).second) {
            throw SchemaError("duplicate view kind");
        }
    }

    if (declared_sentences) {
        std::size_t previous_end = 0;
        for (const auto& s : *declared_sentences) {
            if (s.start >= s.end || s.end > length || s.start < previous_end) {
                throw SpanError("declared sentences must be non-empty, sorted, disjoint and inside the text");
            }
            previous_end = s.end;
        }
        out.declared_ = declared_sentences;
        out.sentences_ = std::move(declared_sentences);
    } else {
        out.sentences_ = fallback_sentences(out.views_);
    }

    if (out.sentences_) {
        for (const auto& [kind, view] : out.views_) {
            for (const auto& c : view.constituents) {
                if (sentence_of(*out.sentences_, c.span) < 0) {
                    throw SpanError(describe(kind, c) + " does not lie inside exactly one sentence");
                }
            }
        }
    }
    if (const auto it = out.views_.find(ViewKind::Dependency); it != out.views_.end()) {
        validate_dependency(it->second, out.sentences_);
    }
    return out;
}

std::string AnnotatedText::slice(CharRange range) const {
    const std::size_t begin = offsets_.at(range.start);
    const std::size_t end = offsets_.at(range.end);
    return text_.substr(begin, end - begin);
}

const View* AnnotatedText::view(ViewKind kind) const {
    const auto it = views_.find(kind);
    return it == views_.end() ? nullptr : &it->second;
}

const View& AnnotatedText::require(ViewKind kind, std::string_view owner) const {
    const View* v = view(kind);
    if (v == nullptr) {
        throw MissingViewError("missing " + std::string(to_string(kind)) + " view on " + std::string(owner));
    }
    return *v;
}

std::vector<CharRange> sentence_index(const AnnotatedText& text) {
    if (!text.sentences()) {
        throw MissingViewError("no sentence boundary source (declared sentences, Tokens or ShallowParse)");
    }
    return *text.sentences();
}

int sentence_of(const std::vector<CharRange>& sentences, CharRange span) {
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (sentences[i].contains(span)) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

QAInstance parse_instance(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw SchemaError("instance must be a JSON object");
    }
    QAInstance instance;
    try {
        instance.question = parse_text(field(doc, "question", "instance"), "question");
        const auto& answers = field(doc, "answers", "instance");
        if (!answers.is_array() || answers.empty()) {
            throw SchemaError("'answers' must be a non-empty array");
        }
        for (std::size_t i = 0; i < answers.size(); ++i) {
            instance.answers.push_back(parse_text(answers[i], "answers[" + std::to_string(i) + "]"));
        }
        instance.paragraph = parse_text(field(doc, "paragraph", "instance"), "paragraph");
        if (doc.contains("gold") && !doc.at("gold").is_null()) {
            const auto& gold = doc.at("gold");
            if (!gold.is_number_integer() || gold.get<long long>() < 0 ||
                gold.get<std::size_t>() >= instance.answers.size()) {
                throw SchemaError("'gold' must index into answers");
            }
            instance.gold = gold.get<int>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed instance: ") + e.what());
    }
    return instance;
}

QAInstance parse_instance(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    return parse_instance(doc);
}

QAInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SchemaError("cannot open instance file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
        return parse_instance(std::string_view(text));
    } catch (const Error& e) {
        // Keep the concrete error type; only prefix the file name.
        const std::string message = path.string() + ": " + e.what();
        if (dynamic_cast<const SpanError*>(&e)) throw SpanError(message);
        if (dynamic_cast<const FrameError*>(&e)) throw FrameError(message);
        throw SchemaError(message);
    }
}

nlohmann::json to_json(const AnnotatedText& text) {
    nlohmann::json out;
    out["text"] = text.text();
    nlohmann::json views = nlohmann::json::object();
    for (const auto& [kind, view] : text.views()) {
        nlohmann::json v;
        v["constituents"] = nlohmann::json::array();
        for (const auto& c : view.constituents) {
            nlohmann::json jc{{"id", c.id}, {"span", range_json(c.span)}, {"label", c.label}};
            if (c.frame) {
                jc["frame"] = *c.frame;
            }
            v["constituents"].push_back(std::move(jc));
        }
        v["relations"] = nlohmann::json::array();
        for (const auto& r : view.relations) {
            v["relations"].push_back({r.source, r.target, r.label});
        }
        views[std::string(to_string(kind))] = std::move(v);
    }
    out["views"] = std::move(views);
    if (text.declared_sentences()) {
        out["sentences"] = nlohmann::json::array();
        for (const auto& s : *text.declared_sentences()) {
            out["sentences"].push_back(range_json(s));
        }
    }
    return out;
}

nlohmann::json to_json(const QAInstance& instance) {
    nlohmann::json out;
    out["question"] = to_json(instance.question);
    out["answers"] = nlohmann::json::array();
    for (const auto& a : instance.answers) {
        out["answers"].push_back(to_json(a));
    }
    out["paragraph"] = to_json(instance.paragraph);
    if (instance.gold) {
        out["gold"] = *instance.gold;
    }
    return out;
}

std::string serialize(const QAInstance& instance) { return to_json(instance).dump(2); }

} // namespace supportgraph
