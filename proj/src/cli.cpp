#include "dcr/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "dcr/dataset.hpp"
#include "dcr/error.hpp"
#include "dcr/gateway.hpp"
#include "dcr/http_backend.hpp"
#include "dcr/mock_backend.hpp"
#include "dcr/pipeline.hpp"
#include "dcr/prompts.hpp"
#include "dcr/report.hpp"
#include "dcr/resources.hpp"
#include "dcr/run_config.hpp"

namespace dcr {

namespace {

enum class Command { Evaluate, Improve, ScoreOnly, MockDemo };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flag values as typed; applied on top of the config file.
struct Flags {
    std::optional<std::string> config, task, dataset, family, model, cache_dir, prompt_dir, out, fail_policy, mock_script,
        field_map;
    std::optional<int> rounds, threads;
    std::optional<std::size_t> limit;
};

void add_run_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "key=value config file; flags override it");
    sub->add_option("--task", f.task, "semantic | summarization | paragraph");
    sub->add_option("--dataset", f.dataset, "JSONL or TSV dataset");
    sub->add_option("--family", f.family, "qqp | paws | summeval | qags_cnn | qags_xsum | generic_pairs");
    sub->add_option("--field-map", f.field_map, "column:role,... (roles: reference, candidate, label, id)");
    sub->add_option("--model", f.model, "model name sent to the backend");
    sub->add_option("--rounds", f.rounds, "maximum improvement rounds");
    sub->add_option("--threads", f.threads, "worker threads");
    sub->add_option("--cache-dir", f.cache_dir, "on-disk response cache");
    sub->add_option("--prompt-dir", f.prompt_dir, "directory of template overrides");
    sub->add_option("--out", f.out, "run directory");
    sub->add_option("--limit", f.limit, "first N items only");
    sub->add_option("--fail-policy", f.fail_policy, "skip | abort");
    sub->add_option("--mock-script", f.mock_script, "scripted offline backend (JSON)");
}

RunConfig resolve_config(const Flags& f) {
    RunConfig cfg;
    if (f.config) apply_config_file(cfg, *f.config);
    auto apply = [&](const char* key, const auto& value) {
        if (!value) return;
        if constexpr (std::is_same_v<std::decay_t<decltype(*value)>, std::string>) cfg.set(key, *value);
        else cfg.set(key, std::to_string(*value));
    };
    apply("task", f.task);
    apply("dataset", f.dataset);
    apply("family", f.family);
    apply("field_map", f.field_map);
    apply("model_name", f.model);
    apply("rounds", f.rounds);
    apply("threads", f.threads);
    apply("cache_dir", f.cache_dir);
    apply("prompt_dir", f.prompt_dir);
    apply("out", f.out);
    apply("limit", f.limit);
    apply("fail_policy", f.fail_policy);
    apply("mock_script", f.mock_script);
    return cfg;
}

std::string resource_text(std::string_view name) {
    const auto data = embedded_resource(name);
    if (!data) throw Error(ErrorCode::FileMissing, "missing bundled resource " + std::string(name));
    return std::string(*data);
}

struct Inputs {
    std::vector<EvaluationItem> items;
    std::shared_ptr<ChatBackend> backend;
};

Inputs load_inputs(const RunConfig& cfg, bool demo) {
    Inputs in;
    DatasetSpec spec;
    spec.family = cfg.family;
    spec.path = cfg.dataset;
    spec.limit = cfg.limit;
    spec.field_map = parse_field_map(cfg.field_map);
    if (demo) {
        spec.path = "demo/dataset.jsonl";
        in.items = parse_dataset(resource_text("fixtures/demo/dataset.jsonl"), spec);
        in.backend = make_mock(parse_mock_script(nlohmann::json::parse(resource_text("fixtures/demo/mock_script.json"))));
        return in;
    }
    in.items = load_dataset(spec);
    if (!cfg.mock_script.empty()) {
        in.backend = make_mock(load_mock_script(cfg.mock_script));
    } else {
        in.backend = std::make_shared<OpenAiCompatibleBackend>(HttpBackendConfig{cfg.base_url, api_key_from_env()});
    }
    return in;
}

void print_summary(const RunReport& report, std::ostream& out) {
    out << "items: " << report.per_item.size() << ", failures: " << report.failures.size() << "\n";
    if (report.correlations) {
        out << "pearson " << format_metric(report.correlations->pearson) << ", spearman "
            << format_metric(report.correlations->spearman) << ", kendall_tau "
            << format_metric(report.correlations->kendall_tau) << "\n";
    }
    if (report.auroc) out << "auroc " << format_metric(*report.auroc) << "\n";
    if (report.improvement) {
        char rate[32];
        std::snprintf(rate, sizeof rate, "%.2f%%", report.improvement->rate * 100.0);
        out << "improvement: " << report.improvement->corrected << "/" << report.improvement->inconsistent << " corrected ("
            << rate << ")\n";
    }
}

int run_pipeline(Command command, RunConfig cfg, std::ostream& out) {
    const bool demo = command == Command::MockDemo;
    const bool improve = command != Command::Evaluate;
    if (demo) {
        cfg.task = TaskKind::SummarizationConsistency;
        cfg.family = DatasetFamily::GenericPairs;
        cfg.dataset = "<bundled demo>";
        cfg.mock_script = "<bundled demo>";
    } else if (cfg.dataset.empty()) {
        throw UsageError("--dataset is required");
    }

    auto inputs = load_inputs(cfg, demo);

    PipelineConfig pcfg;
    pcfg.task = cfg.task;
    pcfg.improve = improve;
    pcfg.max_rounds = improve ? cfg.rounds : 1;
    pcfg.worker_count = cfg.threads;
    pcfg.fail_policy = cfg.fail_policy;
    pcfg.segmentation.min_sentence_chars = cfg.min_sentence_chars;
    pcfg.segmentation.treat_newline_as_boundary = cfg.newline_boundary;
    if (!cfg.abbreviations_file.empty()) pcfg.segmentation.abbreviation_list = load_abbreviations(cfg.abbreviations_file);
    pcfg.run_dir = cfg.out;
    try {
        pcfg.validate();
        cfg.generation.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    GatewayOptions gopts;
    if (!cfg.cache_dir.empty()) gopts.cache_dir = cfg.cache_dir;
    gopts.max_in_flight = cfg.max_in_flight;
    LlmGateway gateway(inputs.backend, gopts);
    const auto prompts = cfg.prompt_dir.empty() ? PromptRegistry::defaults() : PromptRegistry::load(cfg.prompt_dir);
    AgentContext ctx{gateway, prompts, cfg.generation};

    auto report = run_batch(inputs.items, pcfg, ctx);
    report.config_echo = cfg.to_pairs();
    report.config_echo["command"] = demo ? "mock-demo" : (improve ? "improve" : "evaluate");
    compute_aggregates(report, cfg.positive_class, improve);
    write_report(report, cfg.out);

    const auto stats = gateway.stats();
    spdlog::info("{} requests, {} cache hits", stats.requests, stats.cache_hits);
    print_summary(report, out);
    out << "wrote " << cfg.out << "\n";
    return kExitOk;
}

int score_only(const RunConfig& cfg, std::ostream& out) {
    auto report = read_report(cfg.out);
    const auto command = report.config_echo.find("command");
    const bool improve = command == report.config_echo.end() || command->second != "evaluate";
    int positive_class = cfg.positive_class;
    if (const auto it = report.config_echo.find("positive_class"); it != report.config_echo.end()) {
        positive_class = std::stoi(it->second);
    }
    compute_aggregates(report, positive_class, improve);
    write_report(report, cfg.out);
    print_summary(report, out);
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Divide-conquer-reasoning consistency evaluator", "dcr"};
    app.require_subcommand(1);

    Flags flags;
    Command command = Command::Evaluate;
    auto* evaluate = app.add_subcommand("evaluate", "Score each candidate once (no rewriting)");
    auto* improve = app.add_subcommand("improve", "Score and rewrite until consistent or out of rounds");
    auto* score = app.add_subcommand("score-only", "Recompute metrics from the per-item results in --out");
    auto* demo = app.add_subcommand("mock-demo", "Run the bundled offline demo");
    add_run_flags(evaluate, flags);
    add_run_flags(improve, flags);
    score->add_option("--config", flags.config, "key=value config file");
    score->add_option("--out", flags.out, "run directory holding report.json")->required();
    demo->add_option("--threads", flags.threads, "worker threads");
    demo->add_option("--rounds", flags.rounds, "maximum improvement rounds");
    demo->add_option("--out", flags.out, "run directory");
    demo->add_option("--cache-dir", flags.cache_dir, "on-disk response cache");
    evaluate->callback([&] { command = Command::Evaluate; });
    improve->callback([&] { command = Command::Improve; });
    score->callback([&] { command = Command::ScoreOnly; });
    demo->callback([&] { command = Command::MockDemo; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        auto cfg = resolve_config(flags);
        if (command == Command::MockDemo && !flags.out) cfg.out = "runs/mock-demo";
        if (command == Command::ScoreOnly) return score_only(cfg, out);
        return run_pipeline(command, std::move(cfg), out);
    } catch (const UsageError& e) {
        const auto selected = app.get_subcommands();
        err << "error: " << e.what() << "\n\n" << (selected.empty() ? app.help() : selected.front()->help());
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::InvalidSettings ||
            e.code() == ErrorCode::UnknownTemplate) {
            return kExitUsage;
        }
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace dcr
