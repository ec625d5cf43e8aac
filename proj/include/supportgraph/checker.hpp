#ifndef SUPPORTGRAPH_CHECKER_HPP
#define SUPPORTGRAPH_CHECKER_HPP

#include <string>
#include <vector>

#include "supportgraph/config.hpp"
#include "supportgraph/reasoners.hpp"
#include "supportgraph/similarity.hpp"
#include "supportgraph/view_model.hpp"

namespace supportgraph {

/// Re-checks a decoded support graph against the reasoner's rules straight
/// from the instance views and configuration, without the ILP. Returns one
/// message per violated rule; empty means the graph is sound.
std::vector<std::string> check_support_graph(const QAInstance& instance, const SupportGraph& support,
                                             const Config& config, const EmbeddingTable& table);

} // namespace supportgraph

#endif
