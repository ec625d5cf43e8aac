#ifndef SUPPORTGRAPH_RENDER_HPP
#define SUPPORTGRAPH_RENDER_HPP

#include <string>

#include <json.hpp>

#include "supportgraph/reasoners.hpp"

namespace supportgraph {

nlohmann::json to_json(const SupportGraph& support);
nlohmann::json to_json(const AnswerDecision& decision, const QAInstance& instance);

std::string to_text(const AnswerDecision& decision, const QAInstance& instance);

/// Graphviz rendering of the whole augmented graph with three clusters
/// (question, answers, paragraph); the support subgraph is drawn in red.
std::string to_dot(const SupportGraph& support);

/// The same clusters with nothing highlighted, for an abstaining decision.
std::string to_dot(const AugmentedGraph& graph);

} // namespace supportgraph

#endif
