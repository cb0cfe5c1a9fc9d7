#include "restree/generators.hpp"
#include "restree/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

// Trace-driven CLI for the resilient dynamic tree simulator.
//
//   restree --generate chain --n 64 --delta 4 --trace out.txt
//       write a generated trace to out.txt
//   restree --trace t.txt --adversary random --rate 0.001 --report r.json
//       run a trace under an adversary and validate against the oracle
//   restree --generate chain --n 64 --delta 4
//       generate and run in one step
//
// Exit status: 0 clean, 1 contract violation, 2 parse/usage error.
int main(int argc, char** argv) {
    CLI::App app{"resilient dynamic tree on a simulated faulty RAM"};

    std::uint64_t delta = 0, seed = 0, n = 64;
    std::uint64_t budget = ~std::uint64_t{0};
    double rate = -1.0;
    std::string adversary, trace_file, generate_kind, report_file;
    std::uint64_t safe_words = 128;
    std::string profile = "wide";
    bool check_oracle = true;
    double density = 0.5;
    std::uint64_t wmin = 1, wmax = 8, scripted = 0;

    app.add_option("--delta", delta, "corruption budget / spacing parameter");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--adversary", adversary,
                   "none|scripted|random|targeted-flags|adaptive-path");
    app.add_option("--budget", budget, "corruption budget (default: delta)");
    app.add_option("--rate", rate, "per-access corruption probability");
    app.add_option("--trace", trace_file,
                   "trace file to run (or to write with --generate)");
    app.add_option("--generate", generate_kind,
                   "chain|caterpillar|random_attach|star_of_paths|figure2");
    app.add_option("--n", n, "generated tree size (vertices)");
    app.add_flag("--check-oracle,!--no-check-oracle", check_oracle,
                 "validate every answer against the oracle (default on)");
    app.add_option("--report", report_file, "write the JSON run report here");
    app.add_option("--safe-words", safe_words, "safe store capacity");
    app.add_option("--profile", profile, "record layout: wide|packed");
    app.add_option("--query-density", density, "queries per vertex generated");
    app.add_option("--weight-min", wmin, "generated weight range low end");
    app.add_option("--weight-max", wmax, "generated weight range high end");
    app.add_option("--corruptions", scripted,
                   "scripted CORRUPT directives to generate");

    CLI11_PARSE(app, argc, argv);

    restree::trace tr;
    try {
        if (!generate_kind.empty()) {
            restree::gen_params p;
            p.kind = generate_kind;
            p.n = n;
            p.delta = delta ? delta : 2;
            p.seed = seed ? seed : 1;
            p.weight_min = wmin;
            p.weight_max = wmax;
            p.query_density = density;
            p.scripted_corruptions = scripted;
            tr = restree::generate(p);
            if (!trace_file.empty()) {
                std::ofstream out(trace_file);
                if (!out) {
                    std::cerr << "cannot write " << trace_file << "\n";
                    return 2;
                }
                out << restree::serialize_trace(tr);
                return 0;
            }
        } else if (!trace_file.empty()) {
            auto parsed = restree::parse_trace_file(trace_file);
            if (auto* err = std::get_if<restree::parse_error>(&parsed)) {
                std::cerr << trace_file << ":" << err->line << ": "
                          << err->message << "\n";
                return 2;
            }
            tr = std::get<restree::trace>(parsed);
        } else {
            std::cerr << "nothing to do: pass --trace or --generate\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    restree::run_config cfg;
    cfg.delta = delta;
    cfg.seed = seed;
    cfg.adversary = adversary;
    cfg.budget = budget;
    cfg.rate = rate;
    cfg.safe_words = safe_words;
    cfg.check_oracle = check_oracle;
    if (profile == "packed") cfg.profile = restree::record_profile::packed;
    else if (profile != "wide") {
        std::cerr << "unknown profile '" << profile << "'\n";
        return 2;
    }

    restree::run_report rep = restree::run_trace(tr, cfg);
    for (const auto& line : rep.output) std::cout << line << "\n";
    if (!rep.error.empty()) std::cerr << "error: " << rep.error << "\n";
    std::cerr << "verdicts: " << rep.matches << " match, "
              << rep.exempt_mismatches << " exempt-mismatch, "
              << rep.violations << " VIOLATION\n";
    if (!report_file.empty()) {
        std::ofstream out(report_file);
        out << rep.to_json() << "\n";
    }
    return rep.ok ? 0 : 1;
}
