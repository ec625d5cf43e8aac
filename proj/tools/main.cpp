// supportgraph: answer a multiple-choice question over annotated text, or
// evaluate a directory of gold-labelled instances.
//
// Exit status: 0 on success, 1 on bad input or configuration, 2 when the
// solver runs out of its node budget.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "supportgraph/config.hpp"
#include "supportgraph/errors.hpp"
#include "supportgraph/eval.hpp"
#include "supportgraph/reasoners.hpp"
#include "supportgraph/render.hpp"

namespace sg = supportgraph;

namespace {

std::vector<sg::ReasonerKind> parse_reasoners(const std::string& list) {
    std::vector<sg::ReasonerKind> out;
    std::stringstream in(list);
    std::string name;
    while (std::getline(in, name, ',')) {
        const auto kind = sg::parse_reasoner(name);
        if (!kind) throw sg::ConfigError("unknown reasoner '" + name + "'");
        out.push_back(*kind);
    }
    if (out.empty()) throw sg::ConfigError("no reasoner selected");
    return out;
}

sg::Config make_config(const std::string& path) {
    sg::Config config = path.empty() ? sg::Config{} : sg::load_config(path);
    if (const char* env = std::getenv("SUPPORTGRAPH_NODE_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*env == '\0' || *end != '\0' || v == 0) {
            throw sg::ConfigError("SUPPORTGRAPH_NODE_BUDGET must be a positive integer");
        }
        config.node_budget = v;
    }
    return config;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw sg::SchemaError("cannot write " + out);
    f << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiple-choice question answering over semantic views"};
    app.require_subcommand(1);

    std::string instance_path;
    std::string embeddings_path;
    std::string config_path;
    std::string reasoner_list;
    std::string format = "json";
    std::string out_path;
    std::string dir;

    auto* ans = app.add_subcommand("answer", "Answer one instance");
    ans->add_option("--instance", instance_path, "Instance JSON file")->required()->check(CLI::ExistingFile);
    ans->add_option("--embeddings", embeddings_path, "Word vector text file")->required()->check(CLI::ExistingFile);
    ans->add_option("--config", config_path, "Config JSON file")->check(CLI::ExistingFile);
    ans->add_option("--reasoners", reasoner_list, "Comma separated subset of comb1,comb2,comb3,comb5");
    ans->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "dot", "text"}));
    ans->add_option("--out", out_path, "Output file (default stdout)");

    auto* ev = app.add_subcommand("eval", "Evaluate a directory of instances");
    ev->add_option("--dir", dir, "Directory of instance JSON files")->required()->check(CLI::ExistingDirectory);
    ev->add_option("--embeddings", embeddings_path, "Word vector text file")->required()->check(CLI::ExistingFile);
    ev->add_option("--config", config_path, "Config JSON file")->check(CLI::ExistingFile);
    ev->add_option("--reasoners", reasoner_list, "Comma separated subset of comb1,comb2,comb3,comb5");
    ev->add_option("--report", out_path, "Report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const sg::Config config = make_config(config_path);
        const auto reasoners = reasoner_list.empty() ? config.reasoners : parse_reasoners(reasoner_list);
        const sg::EmbeddingTable table = sg::load_embeddings(embeddings_path);

        if (*ans) {
            const sg::QAInstance instance = sg::load_instance(instance_path);
            const sg::AnswerDecision d = sg::answer(instance, reasoners, config, table);
            if (format == "json") {
                emit(sg::to_json(d, instance).dump(2) + "\n", out_path);
            } else if (format == "text") {
                emit(sg::to_text(d, instance), out_path);
            } else {
                const auto* s = d.support();
                emit(s ? sg::to_dot(*s) : sg::to_dot(sg::AugmentedGraph{}), out_path);
            }
        } else {
            const sg::EvalReport report = sg::evaluate_directory(dir, reasoners, config, table);
            if (report.total == 0) {
                throw sg::SchemaError("no instance with a gold answer in " + dir);
            }
            emit(sg::to_json(report).dump(2) + "\n", out_path);
        }
    } catch (const sg::ResourceLimit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
