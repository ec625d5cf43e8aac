#ifndef SUPPORTGRAPH_EVAL_HPP
#define SUPPORTGRAPH_EVAL_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "supportgraph/reasoners.hpp"

namespace supportgraph {

struct InstanceResult {
    std::string name;
    int gold = 0;
    int predicted = 0;
    double confidence = 0.0;
    std::optional<ReasonerKind> reasoner;  // none when every reasoner abstained

    bool answered() const { return reasoner.has_value(); }
    bool correct() const { return answered() && predicted == gold; }
};

struct EvalReport {
    std::size_t total = 0;  // instances with a gold answer
    std::size_t answered = 0;
    std::size_t correct = 0;
    std::size_t skipped_without_gold = 0;
    double accuracy = 0.0;  // correct / total, 0 when total is 0
    std::map<std::string, std::size_t> reasoner_usage;  // "none" counts abstentions
    std::vector<InstanceResult> instances;              // sorted by name
};

using NamedInstance = std::pair<std::string, QAInstance>;

/// Answers every instance that has a gold label; the rest are only counted.
EvalReport evaluate(const std::vector<NamedInstance>& instances, const std::vector<ReasonerKind>& reasoners,
                    const Config& config, const EmbeddingTable& table, Execution execution = Execution::Parallel);

/// Every *.json file directly inside `dir`, in file name order.
std::vector<NamedInstance> load_directory(const std::filesystem::path& dir);

EvalReport evaluate_directory(const std::filesystem::path& dir, const std::vector<ReasonerKind>& reasoners,
                              const Config& config, const EmbeddingTable& table,
                              Execution execution = Execution::Parallel);

nlohmann::json to_json(const EvalReport& report);

} // namespace supportgraph

#endif
