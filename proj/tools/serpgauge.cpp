#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "serpgauge/errors.hpp"
#include "serpgauge/pipeline.hpp"
#include "serpgauge/queryset.hpp"
#include "serpgauge/report.hpp"

namespace {

using namespace serpgauge;

// Exit codes are part of the contract: 0 success, 1 bad input, 2 missing
// fixtures, 3 too many transport failures in a live run.
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kMissingFixtures = 2;
constexpr int kTransportBudget = 3;

std::string read_file_or_die(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int cmd_validate(const std::string& queryset_path) {
    const auto validated = queryset::validate_queryset(read_file_or_die(queryset_path));
    for (const auto& violation : validated.violations) {
        std::cout << violation.query_id << "\t" << violation.field << "\t" << violation.message
                  << "\n";
    }
    if (!validated.ok()) {
        std::cout << validated.violations.size() << " violation(s)\n";
        return kInputError;
    }
    std::cout << "ok: " << validated.set.queries.size() << " queries\n";
    return kOk;
}

int cmd_samplesize(double confidence, double margin, double proportion) {
    queryset::SampleSizeRequest request;
    request.confidence = confidence;
    request.margin = margin;
    request.proportion = proportion;
    std::cout << queryset::required_sample_size(request) << "\n";
    return kOk;
}

int cmd_record(const pipeline::RecordConfig& config) {
    const auto outcome = pipeline::run_record(config);
    for (const auto& [engine_id, summary] : outcome.engines) {
        std::cout << engine_id << ": " << summary.serps << " serps, " << summary.pages
                  << " pages, " << summary.failures << " failures\n";
        for (const auto& error : summary.errors) std::cout << "  " << error << "\n";
    }
    return kOk;
}

int cmd_evaluate(const pipeline::RunConfig& config) {
    const auto outcome = pipeline::run_evaluate(config);
    for (const auto& component : outcome.report.components) {
        std::cout << component.engine_id << "\t" << component.component << "\t"
                  << report::format9(component.headline) << "\n";
    }
    std::cout << "report written to " << config.out_dir.string() << " (" << outcome.total_queries
              << " tasks, " << outcome.failed_queries << " failed, "
              << outcome.report.warnings.size() << " warnings)\n";
    if (!config.offline && outcome.budget_exceeded()) {
        std::cerr << "transport failure budget exceeded: " << outcome.failed_queries << " of "
                  << outcome.total_queries << " queries lost\n";
        return kTransportBudget;
    }
    return kOk;
}

int cmd_tune(const pipeline::TuneConfig& config) {
    const auto outcome = pipeline::run_tune(config);
    for (const auto& warning : outcome.warnings) std::cout << "warning: " << warning << "\n";
    std::cout << "fitted over " << outcome.queries_used << " queries / " << outcome.candidates
              << " labeled pages; rank agreement " << report::format9(outcome.result.e_train)
              << " after " << outcome.result.iterations << " sweeps\n";
    std::cout << "model written to " << config.out_path.string() << "\n";
    return kOk;
}

int cmd_mock(std::uint64_t seed, int size, const std::string& defects_list,
             const std::string& out_dir) {
    pipeline::MockConfig config;
    config.seed = seed;
    config.size = size;
    config.defects = mock::parse_defects(defects_list);
    config.out_dir = out_dir;
    const auto outcome = pipeline::run_mock(config);
    std::cout << outcome.emitted.engine_id << ": " << outcome.emitted.serps << " serps, "
              << outcome.emitted.pages << " pages\n"
              << "engine config: " << outcome.engine_config_path.string() << "\n"
              << "query set: " << outcome.queryset_path.string() << "\n";
    return kOk;
}

int cmd_report(const std::string& in_dir, const std::string& format) {
    const auto parsed =
        report::parse_report(read_file_or_die(in_dir + "/report.json"));
    if (format == "json") {
        std::cout << report::emit_report(parsed, report::Format::json);
    } else if (format == "csv") {
        std::cout << report::emit_report(parsed, report::Format::csv);
    } else {
        std::filesystem::create_directories(std::filesystem::path(in_dir) / "charts");
        for (const auto& [name, svg] : report::emit_charts(parsed)) {
            const auto path = std::filesystem::path(in_dir) / "charts" / name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            out << svg;
            std::cout << path.string() << "\n";
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"component-level search engine evaluation"};
    app.require_subcommand(1);

    auto* validate = app.add_subcommand("validate", "check a query-set file");
    std::string queryset_path;
    validate->add_option("queryset", queryset_path, "query-set JSON file")->required();

    auto* samplesize =
        app.add_subcommand("samplesize", "required query count for a confidence/margin target");
    double confidence = 0.95, margin = 0.05, proportion = 0.5;
    samplesize->add_option("--confidence", confidence, "confidence level, e.g. 0.95")->required();
    samplesize->add_option("--margin", margin, "tolerated error, e.g. 0.05")->required();
    samplesize->add_option("--p", proportion, "expected proportion (default 0.5)");

    auto* record = app.add_subcommand("record", "fetch SERPs and pages into the fixture cache");
    pipeline::RecordConfig record_config;
    record->add_option("--engines", record_config.engines_dir, "engine config dir")->required();
    record->add_option("--queryset", record_config.queryset_path, "query-set file")->required();
    record->add_option("--count", record_config.count, "results per query")->required();
    record->add_option("--cache", record_config.cache_dir, "fixture cache dir (default: cache)");

    auto* evaluate = app.add_subcommand("evaluate", "judge every engine against the query set");
    pipeline::RunConfig run_config;
    evaluate->add_option("--queryset", run_config.queryset_path, "query-set file")->required();
    evaluate->add_option("--engines", run_config.engines_dir, "engine config dir")->required();
    evaluate->add_option("--cache", run_config.cache_dir, "fixture cache dir")->required();
    evaluate->add_option("--out", run_config.out_dir, "report output dir")->required();
    evaluate->add_flag("--offline", run_config.offline, "replay fixtures only, never the network");
    evaluate->add_option("--k", run_config.k, "judged SERP depth (default 10)");
    evaluate->add_option("--workers", run_config.workers, "worker threads (default 4)");
    evaluate->add_option("--model", run_config.model_path, "tuned weight file");

    auto* tune = app.add_subcommand("tune", "fit score weights to expert grades");
    pipeline::TuneConfig tune_config;
    tune->add_option("--queryset", tune_config.queryset_path, "query-set file")->required();
    tune->add_option("--labels", tune_config.labels_path, "TSV: query_id, url, grade")->required();
    tune->add_option("--cache", tune_config.cache_dir, "fixture cache dir")->required();
    tune->add_option("--seed", tune_config.seed, "restart seed")->required();
    tune->add_option("--out", tune_config.out_path, "output model file")->required();

    auto* mock_cmd = app.add_subcommand("mock", "emit a synthetic engine with known deficiencies");
    std::uint64_t mock_seed = 1;
    int mock_size = 120;
    std::string mock_defects;
    std::string mock_out;
    mock_cmd->add_option("--seed", mock_seed, "corpus seed")->required();
    mock_cmd->add_option("--size", mock_size, "corpus size (>= 100)")->required();
    mock_cmd->add_option("--defects", mock_defects, "comma list of deficiency flags (may be empty)");
    mock_cmd->add_option("--out", mock_out, "output dir")->required();

    auto* report_cmd = app.add_subcommand("report", "re-emit a stored report");
    std::string report_in;
    std::string report_format;
    report_cmd->add_option("--in", report_in, "report dir containing report.json")->required();
    report_cmd->add_option("--format", report_format, "json, csv or svg")
        ->required()
        ->check(CLI::IsMember({"json", "csv", "svg"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(queryset_path);
        if (samplesize->parsed()) return cmd_samplesize(confidence, margin, proportion);
        if (record->parsed()) {
            if (record_config.cache_dir.empty()) record_config.cache_dir = "cache";
            return cmd_record(record_config);
        }
        if (evaluate->parsed()) return cmd_evaluate(run_config);
        if (tune->parsed()) return cmd_tune(tune_config);
        if (mock_cmd->parsed()) return cmd_mock(mock_seed, mock_size, mock_defects, mock_out);
        if (report_cmd->parsed()) return cmd_report(report_in, report_format);
    } catch (const pipeline::PreflightError& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const auto& item : e.missing()) std::cerr << "  missing " << item << "\n";
        return kMissingFixtures;
    } catch (const MissingFixtureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMissingFixtures;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kOk;
}
