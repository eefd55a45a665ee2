#pragma once

// Command-line front end: segmented parallel ladder builds, certificate
// checking, ternary verification, statistics. Every run prints stable
// key=value report lines so runs can be diffed.
//
// Exit codes: 0 success, 1 verification failure (check/gap/counterexample),
// 2 certificate parse error, 3 I/O error, 4 configuration error.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "prothladder/checker.hpp"
#include "prothladder/errors.hpp"
#include "prothladder/goldbach.hpp"
#include "prothladder/ladder.hpp"
#include "prothladder/natural.hpp"

namespace prothladder::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failed = 1;
inline constexpr int exit_parse_error = 2;
inline constexpr int exit_io_error = 3;
inline constexpr int exit_config_error = 4;

struct RunConfig {
    unsigned n = 16;
    std::string delta = "1000000";
    std::uint32_t witness_bound = 29;
    std::uint32_t sieve_bound = 16000;
    std::string max_gap = "10000000";
    std::string start = "3";
    std::string end = "100000000";
    std::string segment_width = "100000000";
    unsigned workers = 0; // 0 = hardware concurrency
    std::string out = "ladder.cert";
    std::string in = "ladder.cert";
    std::uint64_t samples = 10000;

    Natural nat(const std::string& text, const char* flag) const {
        Natural v;
        if (!parse_natural(text, v))
            throw PreconditionError(std::string(flag) + " must be a plain decimal integer");
        return v;
    }

    ladder::LadderParams params() const {
        ladder::LadderParams p;
        p.n = n;
        p.delta = nat(delta, "--delta");
        p.witness_bound = witness_bound;
        p.sieve_bound = sieve_bound;
        p.max_gap = nat(max_gap, "--max-gap");
        p.segment_width = nat(segment_width, "--segment-width");
        return p;
    }

    unsigned worker_count() const {
        if (workers > 0) return workers;
        unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? hw : 1;
    }
};

namespace detail {

inline std::int64_t elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - since)
        .count();
}

/// Prime-aligned segment boundaries: cut [start, end] at multiples of the
/// segment width, moving every interior cut down to the nearest prime. Each
/// part then starts on its boundary prime, so parts splice with gaps no
/// wider than one in-segment step.
inline std::vector<Natural> segment_bounds(const Natural& start, const Natural& end,
                                           const ladder::LadderParams& params) {
    const Natural width = params.segment_width;
    if (width < 1) throw PreconditionError("--segment-width must be >= 1");
    std::vector<Natural> bounds{start};
    if (end - start > width) {
        if (width < 4 * params.delta)
            throw PreconditionError("--segment-width must be at least 4 * delta");
        for (Natural cut = start + width; cut < end; cut += width) {
            Natural b = ladder::prev_general_prime(cut + 1);
            if (b <= bounds.back())
                throw PreconditionError("--segment-width too small to place boundaries");
            bounds.push_back(b);
        }
    }
    bounds.push_back(end);
    return bounds;
}

inline ladder::Ladder build_segmented(const Natural& start, const Natural& end,
                                      const ladder::LadderParams& params, unsigned workers,
                                      std::uint64_t* segments_out = nullptr) {
    std::vector<Natural> bounds = segment_bounds(start, end, params);
    const std::size_t count = bounds.size() - 1;
    if (segments_out) *segments_out = count;

    std::vector<std::optional<ladder::Ladder>> parts(count);
    std::vector<std::exception_ptr> failures(count);
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                parts[i] = ladder::build_ladder(bounds[i], bounds[i + 1], params);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    unsigned pool = std::min<std::size_t>(std::max(1u, workers), count);
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (unsigned t = 0; t < pool; ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();

    for (std::size_t i = 0; i < count; ++i)
        if (failures[i]) std::rethrow_exception(failures[i]);

    std::vector<ladder::Ladder> built;
    built.reserve(count);
    for (auto& p : parts) built.push_back(std::move(*p));
    return ladder::stitch(built);
}

inline void print_ladder_stats(std::ostream& os, const ladder::Ladder& lad) {
    os << "rungs=" << lad.rungs.size() << "\n"
       << "proth_rungs=" << lad.stats.proth_rungs << "\n"
       << "general_rungs=" << lad.stats.general_rungs << "\n"
       << "nowitness_skips=" << lad.stats.nowitness_skips << "\n"
       << "max_gap=" << to_decimal(lad.stats.max_gap) << "\n"
       << "first_rung=" << to_decimal(lad.rungs.front().value) << "\n"
       << "last_rung=" << to_decimal(lad.last_value()) << "\n";
}

} // namespace detail

inline int cmd_build(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    ladder::LadderParams params = cfg.params();
    params.validate();
    const Natural start = cfg.nat(cfg.start, "--start");
    const Natural end = cfg.nat(cfg.end, "--end");
    if (!(start < end)) throw PreconditionError("--end must exceed --start");
    if (!is_prime(start)) throw PreconditionError("--start must be prime");

    std::uint64_t segments = 0;
    ladder::Ladder lad = detail::build_segmented(start, end, params, cfg.worker_count(), &segments);
    checker::write_certificate_file(cfg.out, lad);

    std::cout << "segments=" << segments << "\n"
              << "workers=" << cfg.worker_count() << "\n";
    detail::print_ladder_stats(std::cout, lad);
    std::cout << "out=" << cfg.out << "\n"
              << "elapsed_ms=" << detail::elapsed_ms(t0) << "\n";
    return exit_ok;
}

namespace detail {

inline checker::Expectation expectation_from_flags(const CLI::App& sub, const RunConfig& cfg) {
    checker::Expectation e;
    if (sub.count("--n")) e.n = cfg.n;
    if (sub.count("--delta")) e.delta = cfg.nat(cfg.delta, "--delta");
    if (sub.count("--witness-bound")) e.witness_bound = cfg.witness_bound;
    if (sub.count("--sieve-bound")) e.sieve_bound = cfg.sieve_bound;
    if (sub.count("--max-gap")) e.max_gap = cfg.nat(cfg.max_gap, "--max-gap");
    if (sub.count("--start")) e.start = cfg.nat(cfg.start, "--start");
    if (sub.count("--end")) e.end = cfg.nat(cfg.end, "--end");
    return e;
}

inline int report_outcome(const checker::CheckReport& rep) {
    std::cout << rep.to_keyvalues();
    if (rep.pass) return exit_ok;
    return rep.fail_kind == checker::FailKind::parse ? exit_parse_error
                                                     : exit_verification_failed;
}

} // namespace detail

inline int cmd_check(const RunConfig& cfg, const checker::Expectation& expected) {
    auto t0 = std::chrono::steady_clock::now();
    checker::CheckReport rep = checker::check_file(cfg.in, expected);
    int code = detail::report_outcome(rep);
    std::cout << "elapsed_ms=" << detail::elapsed_ms(t0) << "\n";
    return code;
}

inline int cmd_stats(const RunConfig& cfg) {
    ladder::Ladder lad = checker::load_certificate(cfg.in);
    std::cout << "n=" << lad.params.n << "\n"
              << "delta=" << to_decimal(lad.params.delta) << "\n"
              << "witness_bound=" << lad.params.witness_bound << "\n"
              << "sieve_bound=" << lad.params.sieve_bound << "\n"
              << "max_gap_allowed=" << to_decimal(lad.params.max_gap) << "\n"
              << "start=" << to_decimal(lad.start) << "\n"
              << "end=" << to_decimal(lad.end) << "\n";
    detail::print_ladder_stats(std::cout, lad);
    return exit_ok;
}

inline int cmd_binary_verify(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    const Natural bound = cfg.nat(cfg.max_gap, "--max-gap");
    goldbach::BinaryTable table = goldbach::verify_binary_range(bound);
    std::cout << "bound=" << table.bound << "\n"
              << "prime_count=" << table.prime_count << "\n"
              << "counterexamples=" << (table.verified ? 0 : 1) << "\n"
              << "verified=" << (table.verified ? "true" : "false") << "\n"
              << "elapsed_ms=" << detail::elapsed_ms(t0) << "\n";
    if (!table.verified) {
        std::cout << "counterexample=" << table.counterexample << "\n";
        return exit_verification_failed;
    }
    return exit_ok;
}

inline int cmd_verify_ternary(const RunConfig& cfg, const checker::Expectation& expected) {
    auto t0 = std::chrono::steady_clock::now();
    checker::CheckReport rep = checker::check_file(cfg.in, expected);
    if (!rep.pass) return detail::report_outcome(rep);
    std::cout << "check=pass\n";

    ladder::Ladder lad = checker::load_certificate(cfg.in);
    goldbach::BinaryTable table = goldbach::verify_binary_range(lad.params.max_gap);
    if (!table.verified) {
        std::cout << "binary_verified=false\n"
                  << "counterexample=" << table.counterexample << "\n";
        return exit_verification_failed;
    }
    std::cout << "binary_verified=true\n"
              << "prime_count=" << table.prime_count << "\n";

    const Natural limit = goldbach::coverage_bound(lad, table);
    std::cout << "coverage_bound=" << to_decimal(limit) << "\n";

    if (limit < 7) throw PreconditionError("coverage bound below 7; nothing to sample");
    if (!fits_u64(limit) || to_u64(limit) > (std::uint64_t(1) << 62))
        throw PreconditionError("sampling requires a coverage bound below 2^62");
    const std::uint64_t limit64 = to_u64(limit);

    std::mt19937_64 rng(0xa11ce5);
    std::uniform_int_distribution<std::uint64_t> pick(0, (limit64 - 7) / 2);
    for (std::uint64_t i = 0; i < cfg.samples; ++i) {
        const Natural m = Natural(7 + 2 * pick(rng));
        goldbach::TernaryWitness w = goldbach::ternary_decompose(m, lad, table);
        std::cout << to_decimal(w.m) << " = " << to_decimal(w.p1) << " + " << to_decimal(w.p2)
                  << " + " << to_decimal(w.p3) << "\n";
    }
    std::cout << "samples=" << cfg.samples << "\n"
              << "all_samples_verified=true\n"
              << "coverage_bound=" << to_decimal(limit) << "\n"
              << "elapsed_ms=" << detail::elapsed_ms(t0) << "\n";
    return exit_ok;
}

namespace detail {

inline void add_param_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--n", cfg.n, "Proth exponent n")->capture_default_str();
    sub->add_option("--delta", cfg.delta, "search window width")->capture_default_str();
    sub->add_option("--witness-bound", cfg.witness_bound, "witness prime bound B")
        ->capture_default_str();
    sub->add_option("--sieve-bound", cfg.sieve_bound, "small-prime sieve bound S")
        ->capture_default_str();
    sub->add_option("--max-gap", cfg.max_gap, "maximum allowed gap G")->capture_default_str();
    sub->add_option("--start", cfg.start, "range start (prime)")->capture_default_str();
    sub->add_option("--end", cfg.end, "range end")->capture_default_str();
    sub->set_config("--config", "", "key=value configuration file");
}

} // namespace detail

inline int run(int argc, const char* const* argv) {
    CLI::App app{"prime ladders from Proth primes, with certified Goldbach composition"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* build = app.add_subcommand("build", "build a ladder and write its certificate");
    detail::add_param_flags(build, cfg);
    build->add_option("--segment-width", cfg.segment_width, "range width per work segment")
        ->capture_default_str();
    build->add_option("--workers", cfg.workers, "worker threads (0 = hardware)")
        ->capture_default_str();
    build->add_option("--out", cfg.out, "certificate output path")->capture_default_str();

    CLI::App* check = app.add_subcommand("check", "independently verify a certificate");
    detail::add_param_flags(check, cfg);
    check->add_option("--in", cfg.in, "certificate input path")->capture_default_str();

    CLI::App* stats = app.add_subcommand("stats", "re-print certificate statistics");
    stats->add_option("--in", cfg.in, "certificate input path")->capture_default_str();

    CLI::App* binary = app.add_subcommand("binary-verify", "verify binary Goldbach on [4, G]");
    binary->add_option("--max-gap", cfg.max_gap, "verification bound G")->capture_default_str();
    binary->set_config("--config", "", "key=value configuration file");

    CLI::App* ternary =
        app.add_subcommand("verify-ternary", "check certificate, verify binary range, "
                                             "sample ternary decompositions");
    detail::add_param_flags(ternary, cfg);
    ternary->add_option("--in", cfg.in, "certificate input path")->capture_default_str();
    ternary->add_option("--samples", cfg.samples, "number of odd values to decompose")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config_error;
    }

    try {
        if (build->parsed()) return cmd_build(cfg);
        if (check->parsed()) return cmd_check(cfg, detail::expectation_from_flags(*check, cfg));
        if (stats->parsed()) return cmd_stats(cfg);
        if (binary->parsed()) return cmd_binary_verify(cfg);
        if (ternary->parsed())
            return cmd_verify_ternary(cfg, detail::expectation_from_flags(*ternary, cfg));
    } catch (const ParseError& e) {
        std::cerr << "error: parse: line " << e.line << ": " << e.what() << "\n";
        return exit_parse_error;
    } catch (const IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return exit_io_error;
    } catch (const PreconditionError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return exit_config_error;
    } catch (const GapExceededError& e) {
        std::cerr << "error: gap exceeded: " << e.what() << "\n";
        return exit_verification_failed;
    } catch (const SpliceGapError& e) {
        std::cerr << "error: splice gap: " << e.what() << "\n";
        return exit_verification_failed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_verification_failed;
    }
    return exit_config_error;
}

/// Test-friendly entry point: arguments without the program name.
inline int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("prothladder");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace prothladder::cli
