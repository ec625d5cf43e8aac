#include "supportgraph/eval.hpp"

#include <algorithm>
#include <exception>

#include "supportgraph/errors.hpp"

namespace supportgraph {

EvalReport evaluate(const std::vector<NamedInstance>& instances, const std::vector<ReasonerKind>& reasoners,
                    const Config& config, const EmbeddingTable& table, Execution execution) {
    EvalReport report;
    std::vector<const NamedInstance*> gold;
    for (const auto& item : instances) {
        if (item.second.gold) gold.push_back(&item);
        else ++report.skipped_without_gold;
    }
    std::sort(gold.begin(), gold.end(), [](const auto* a, const auto* b) { return a->first < b->first; });
    std::vector<InstanceResult> results(gold.size());
    std::vector<std::exception_ptr> errors(gold.size());
    const long long n = static_cast<long long>(gold.size());
#pragma omp parallel for schedule(dynamic) if (execution == Execution::Parallel)
    for (long long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            const auto& [name, instance] = *gold[idx];
            const AnswerDecision d = answer(instance, reasoners, config, table, Execution::Serial);
            results[idx] = {name, *instance.gold, d.answer, d.confidence, d.reasoner};
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    report.total = results.size();
    for (const auto& r : results) {
        if (r.correct()) ++report.correct;
        if (r.answered()) ++report.answered;
        ++report.reasoner_usage[r.reasoner ? std::string(to_string(*r.reasoner)) : std::string("none")];
    }
    report.accuracy =
        report.total == 0 ? 0.0 : static_cast<double>(report.correct) / static_cast<double>(report.total);
    report.instances = std::move(results);
    return report;
}

std::vector<NamedInstance> load_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw SchemaError("not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<NamedInstance> out;
    for (const auto& f : files) out.emplace_back(f.filename().string(), load_instance(f));
    return out;
}

EvalReport evaluate_directory(const std::filesystem::path& dir, const std::vector<ReasonerKind>& reasoners,
                              const Config& config, const EmbeddingTable& table, Execution execution) {
    return evaluate(load_directory(dir), reasoners, config, table, execution);
}

nlohmann::json to_json(const EvalReport& report) {
    using nlohmann::json;
    json instances = json::array();
    for (const auto& r : report.instances) {
        instances.push_back({{"name", r.name},
                             {"gold", r.gold},
                             {"predicted", r.predicted},
                             {"confidence", r.confidence},
                             {"reasoner", r.reasoner ? json(std::string(to_string(*r.reasoner))) : json(nullptr)},
                             {"correct", r.correct()}});
    }
    return json{{"total", report.total},
                {"answered", report.answered},
                {"correct", report.correct},
                {"skipped_without_gold", report.skipped_without_gold},
                {"accuracy", report.accuracy},
                {"reasoner_usage", report.reasoner_usage},
                {"instances", std::move(instances)}};
}

} // namespace supportgraph
