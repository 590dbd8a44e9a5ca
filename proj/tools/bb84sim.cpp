// bb84sim: batch driver for the BB84 blinding-attack simulator.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bb84/config.hpp"
#include "bb84/report.hpp"

namespace {

void print_stat(const char* name, const bb84::Stat& s) {
    std::printf("  %-24s mean=%.6g  sd=%.3g\n", name, s.mean, s.stddev);
}

void print_summary(const bb84::SimulationConfig& config, const bb84::BatchSummary& b) {
    std::printf("preset=%s receiver=%s attack=%s gates=%llu sessions=%llu seed=%llu\n", config.preset.c_str(),
                std::string(bb84::to_string(config.session.receiver)).c_str(),
                bb84::to_string(config.session.attack).c_str(),
                static_cast<unsigned long long>(config.session.gates),
                static_cast<unsigned long long>(config.sessions),
                static_cast<unsigned long long>(config.session.seed));
    if (b.count == 0) {
        std::printf("  no sessions run\n");
        return;
    }
    print_stat("sifted_rate", b.sifted_rate);
    print_stat("qber", b.qber);
    print_stat("coincidence_probability", b.coincidence_probability);
    print_stat("eve_knowledge_fraction", b.eve_knowledge_fraction);
    print_stat("leaked_bits_bound", b.leaked_bits_bound);
    print_stat("final_key_bound", b.final_key_bound);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-gate BB84 simulator: detector blinding attacks and coincidence monitoring"};

    bb84::CliFlags flags;
    std::string preset, receiver, attack, format, reference;
    std::string config_path, out_dir;
    std::uint64_t gates = 0, sessions = 0, seed = 0;
    unsigned threads = 0;
    bool list_presets = false;

    auto* o_preset = app.add_option("--preset", preset, "baseline|fig1a-blind|fig1b-blind|fig1c-blind|intercept|"
                                                        "rng-control|weak-cw|partial:<f>");
    auto* o_gates = app.add_option("--gates", gates, "gates per session");
    auto* o_sessions = app.add_option("--sessions", sessions, "number of sessions");
    auto* o_seed = app.add_option("--seed", seed, "master seed (default " + std::to_string(bb84::kDefaultSeed) + ")");
    auto* o_receiver = app.add_option("--receiver", receiver, "passive|pem|mirror");
    auto* o_attack = app.add_option("--attack", attack, "none|intercept|blind|blind-partial:<f>|rng-control");
    auto* o_config = app.add_option("--config", config_path, "key-value config file");
    auto* o_out = app.add_option("--out", out_dir, "output directory (default .)");
    auto* o_format = app.add_option("--format", format, "csv|json|both");
    auto* o_reference = app.add_option("--reference", reference,
                                       "also run this preset with the same gates/sessions/seed and print "
                                       "the sifted-rate ratio reference/run");
    app.add_option("--threads", threads, "worker threads (default: hardware concurrency)");
    app.add_flag("--list-presets", list_presets, "print preset names and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? bb84::kExitOk : bb84::kExitConfig;
    }

    if (list_presets) {
        for (const auto& name : bb84::preset_names()) std::cout << name << '\n';
        return bb84::kExitOk;
    }

    if (*o_preset) flags.preset = preset;
    if (*o_gates) flags.gates = gates;
    if (*o_sessions) flags.sessions = sessions;
    if (*o_seed) flags.seed = seed;
    if (*o_receiver) flags.receiver = receiver;
    if (*o_attack) flags.attack = attack;
    if (*o_config) flags.config_path = config_path;
    if (*o_out) flags.out_dir = out_dir;
    if (*o_format) flags.format = format;

    try {
        const bb84::SimulationConfig config = bb84::parse_config(flags);
        const auto results = bb84::run_batch(config, threads);
        bb84::emit(config, results);
        const bb84::BatchSummary summary = bb84::summarize(results);
        print_summary(config, summary);

        if (*o_reference) {
            bb84::CliFlags ref_flags;
            ref_flags.preset = reference;
            ref_flags.gates = config.session.gates;
            ref_flags.sessions = config.sessions;
            ref_flags.seed = config.session.seed;
            const auto ref = bb84::summarize(bb84::run_batch(bb84::parse_config(ref_flags), threads));
            if (ref.count > 0 && summary.sifted_rate.mean > 0.0)
                std::printf("sifted_rate_ratio %s/%s = %.4f\n", reference.c_str(), config.preset.c_str(),
                            ref.sifted_rate.mean / summary.sifted_rate.mean);
            else
                std::printf("sifted_rate_ratio %s/%s undefined\n", reference.c_str(), config.preset.c_str());
        }
    } catch (const bb84::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return bb84::exit_code(e.kind());
    } catch (const bb84::ModelingViolation& e) {
        std::cerr << "modeling violation: " << e.what() << '\n';
        return bb84::kExitConfig;
    } catch (const bb84::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return bb84::kExitIo;
    }
    return bb84::kExitOk;
}
