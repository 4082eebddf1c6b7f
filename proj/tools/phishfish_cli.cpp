// phishfish: terminal front end for the anti-phishing fish game.
//
//   phishfish classify <url> [--json]
//   phishfish simulate --policy <name> --seed <n> --runs <n> --decision-time <s> [--log-dir <dir>] [--json]
//   phishfish play [--seed <n>] [--log-dir <dir>]
//   phishfish deck validate <path>
//   phishfish deck dump
//   phishfish serve [--port <n>] [--host <addr>] [--deck-dir <dir>] [--log-dir <dir>]

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "phishfish/phishfish.hpp"
#include "phishfish/service.hpp"

namespace fs = std::filesystem;
using namespace phishfish;

namespace {

// classify exit codes
constexpr int exit_legit = 0;
constexpr int exit_usage = 1;
constexpr int exit_phishing = 2;
constexpr int exit_unknown_domain = 3;
// deck validate
constexpr int exit_invalid_deck = 4;

int cmd_classify(const std::string& url, bool as_json)
{
    const auto rules = rulebook_for(builtin_deck());
    try {
        const auto v = rules.classify(url);
        if (as_json) {
            nlohmann::ordered_json j{{"url", url},
                                     {"label", to_string(v.label)},
                                     {"rule", to_string(v.fired_rule)},
                                     {"tip", v.tip}};
            std::cout << j.dump() << '\n';
        } else {
            std::cout << "label: " << to_string(v.label) << '\n'
                      << "rule:  " << to_string(v.fired_rule) << '\n'
                      << "tip:   " << v.tip << '\n';
        }
        return v.label == verdict_label::legit ? exit_legit : exit_phishing;
    } catch (const error& e) {
        const bool unknown = e.code() == errc::unknown_domain;
        if (as_json) {
            nlohmann::ordered_json j{{"url", url}, {"error", to_string(e.code())}, {"message", e.what()}};
            std::cout << j.dump() << '\n';
        } else {
            std::cerr << (unknown ? "unknown domain: " : "cannot parse URL: ") << e.what() << '\n';
        }
        return unknown ? exit_unknown_domain : exit_usage;
    }
}

std::ofstream open_log(const fs::path& dir, const std::string& stem)
{
    fs::create_directories(dir);
    auto path = dir / (stem + ".phlog");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

struct simulate_options {
    std::string policy;
    std::uint64_t seed = 0;
    int runs = 1;
    seconds decision_time = 10;
    std::string log_dir;
    bool json = false;
};

int cmd_simulate(const simulate_options& opt)
{
    auto kind = parse_bot_kind(opt.policy);
    if (!kind) {
        std::cerr << "unknown policy '" << opt.policy << "' (oracle, random, always-eat, teacher-first)\n";
        return exit_usage;
    }
    const deck d = builtin_deck();
    const game_config config;

    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    std::ostringstream table;
    table << std::left << std::setw(6) << "run" << std::setw(22) << "seed" << std::setw(7) << "score"
          << std::setw(7) << "lives" << std::setw(6) << "time" << "phase\n";
    int wins = 0;
    for (int i = 0; i < opt.runs; ++i) {
        const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(i);
        std::ofstream log_file;
        recorded_session::event_sink sink;
        if (!opt.log_dir.empty()) {
            log_file = open_log(opt.log_dir, "run-" + std::to_string(i + 1) + "-seed-" + std::to_string(seed));
            sink = [&log_file](const session_event& e) { log_file << to_json_line(e) << '\n'; };
        }
        const auto session = play_bot_session(config, d, seed, *kind, opt.decision_time, sink);
        const auto r = result(session.state());
        if (r.phase == game_phase::won)
            ++wins;
        table << std::left << std::setw(6) << (i + 1) << std::setw(22) << seed << std::setw(7) << r.score
              << std::setw(7) << r.lives << std::setw(6) << r.time_remaining << to_string(r.phase) << '\n';
        runs.push_back({{"seed", seed},
                        {"score", r.score},
                        {"lives", r.lives},
                        {"time_remaining", r.time_remaining},
                        {"phase", to_string(r.phase)}});
    }
    const double win_rate = static_cast<double>(wins) / opt.runs;
    if (opt.json) {
        nlohmann::ordered_json j{{"policy", opt.policy},
                                 {"seed", opt.seed},
                                 {"decision_time", opt.decision_time},
                                 {"runs", runs},
                                 {"wins", wins},
                                 {"win_rate", win_rate}};
        std::cout << j.dump() << '\n';
    } else {
        std::cout << table.str() << "win_rate " << std::fixed << std::setprecision(3) << win_rate << " (" << wins
                  << "/" << opt.runs << ")\n";
    }
    return 0;
}

int cmd_play(std::optional<std::uint64_t> seed_opt, const std::string& log_dir)
{
    const std::uint64_t seed = seed_opt ? *seed_opt : (static_cast<std::uint64_t>(std::random_device{}()) << 32 |
                                                       std::random_device{}());
    std::ofstream log_file;
    recorded_session::event_sink sink;
    if (!log_dir.empty()) {
        log_file = open_log(log_dir, "play-seed-" + std::to_string(seed));
        sink = [&log_file](const session_event& e) {
            log_file << to_json_line(e) << '\n';
            log_file.flush();
        };
    }

    recorded_session session(game_config{}, builtin_deck(), seed, sink);
    std::cout << "You are the small fish. Eat the real worms, avoid the fake ones.\n"
              << "Each worm carries a website address. Ask the teacher fish for a tip if unsure,\n"
              << "but every tip costs 100 seconds. Wrong choices cost a life and 100 seconds.\n"
              << "seed " << seed << "\n";

    using clock = std::chrono::steady_clock;
    while (!session.state().finished()) {
        const auto v = view(session.state());
        std::cout << "\nRound " << (v.round_index + 1) << "/" << v.total_rounds << "   Score " << v.score
                  << "   Lives " << v.lives << "   Time " << v.time_remaining << "s\n"
                  << "  URL: " << v.url << '\n';
        if (v.tip)
            std::cout << "  Tip: " << *v.tip << '\n';
        std::cout << "[e]at  [a]void  [t]eacher  [q]uit > " << std::flush;

        const auto shown = clock::now();
        std::string line;
        if (!std::getline(std::cin, line) || line == "q") {
            session.abandon();
            std::cout << "\nQuit. Final score " << session.state().score << '\n';
            return 0;
        }
        const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(clock::now() - shown).count();

        std::optional<action> a;
        if (line == "e")
            a = action::eat;
        else if (line == "a")
            a = action::avoid;
        else if (line == "t")
            a = action::ask_teacher;
        if (!a) {
            std::cout << "Press e, a, t or q.\n";
            session.tick(elapsed);
            continue;
        }
        session.tick(elapsed);
        if (session.state().finished())
            break;
        const auto out = session.act(*a);
        if (out.kind == outcome_kind::tip_given)
            std::cout << "  Tip: " << *out.tip << '\n';
        else
            std::cout << out.feedback << '\n';
    }

    const auto r = result(session.state());
    if (r.phase == game_phase::won)
        std::cout << "\n*** You became a big fish! Score " << r.score << " ***\n";
    else
        std::cout << "\nGame over. Score " << r.score << ", lives " << r.lives << ", time " << r.time_remaining
                  << "s\n";
    return 0;
}

int cmd_deck_validate(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << path << ": cannot open file\n";
        return exit_usage;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        const auto d = load_deck(ss.str());
        std::cout << path << ": deck '" << d.name << "' is valid (" << d.cards.size() << " cards)\n";
        return 0;
    } catch (const validation_error& e) {
        for (const auto& v : e.violations())
            std::cerr << path << ": " << v << '\n';
        return exit_invalid_deck;
    } catch (const error& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return exit_invalid_deck;
    }
}

int cmd_serve(int port, const std::string& host, const std::string& deck_dir, const std::string& log_dir)
{
    if (port <= 0 || port > 65535) {
        std::cerr << "invalid port " << port << '\n';
        return exit_usage;
    }
    deck_catalog decks;
    service_options options;
    try {
        if (!deck_dir.empty())
            decks.load_directory(deck_dir);
    } catch (const error& e) {
        std::cerr << e.what() << '\n';
        return exit_usage;
    }
    if (!log_dir.empty())
        options.log_dir = log_dir;

    game_service service(std::move(decks), options);
    httplib::Server server;
    service.mount(server);
    std::cerr << "serving on http://" << host << ":" << port << '\n';
    if (!server.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ":" << port << '\n';
        return exit_usage;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Anti-phishing fish game: URL classifier, simulator and game server"};
    app.require_subcommand(1);

    std::string url;
    bool classify_json = false;
    auto* classify = app.add_subcommand("classify", "Classify a URL with the training rules");
    classify->add_option("url", url, "URL to classify")->required();
    classify->add_flag("--json", classify_json, "Machine-readable output");

    simulate_options sim;
    auto* simulate = app.add_subcommand("simulate", "Run bot sessions headlessly");
    simulate->add_option("--policy", sim.policy, "oracle | random | always-eat | teacher-first")->required();
    simulate->add_option("--seed", sim.seed, "Seed of the first run")->default_val(0);
    simulate->add_option("--runs", sim.runs, "Number of sessions")->default_val(1)->check(CLI::PositiveNumber);
    simulate->add_option("--decision-time", sim.decision_time, "Seconds spent before each action")
        ->default_val(10)
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--log-dir", sim.log_dir, "Write one .phlog per run here");
    simulate->add_flag("--json", sim.json, "Machine-readable output");

    std::optional<std::uint64_t> play_seed;
    std::string play_log_dir;
    auto* play = app.add_subcommand("play", "Play interactively in the terminal");
    play->add_option("--seed", play_seed, "Round-order seed (random when omitted)");
    play->add_option("--log-dir", play_log_dir, "Write the session .phlog here");

    auto* deck_cmd = app.add_subcommand("deck", "Deck file utilities");
    deck_cmd->require_subcommand(1);
    std::string deck_path;
    auto* validate_cmd = deck_cmd->add_subcommand("validate", "Check a deck file");
    validate_cmd->add_option("path", deck_path, "Deck JSON file")->required();
    auto* dump_cmd = deck_cmd->add_subcommand("dump", "Print the built-in deck as a deck file");

    int port = default_service_port;
    std::string host = "127.0.0.1", deck_dir, serve_log_dir;
    auto* serve = app.add_subcommand("serve", "Run the HTTP game service");
    serve->add_option("--port", port, "TCP port")->default_val(default_service_port);
    serve->add_option("--host", host, "Bind address")->default_val("127.0.0.1");
    serve->add_option("--deck-dir", deck_dir, "Directory of extra deck files");
    serve->add_option("--log-dir", serve_log_dir, "Write session .phlog files here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*classify)
            return cmd_classify(url, classify_json);
        if (*simulate)
            return cmd_simulate(sim);
        if (*play)
            return cmd_play(play_seed, play_log_dir);
        if (*validate_cmd)
            return cmd_deck_validate(deck_path);
        if (*dump_cmd) {
            std::cout << serialize_deck(builtin_deck());
            return 0;
        }
        if (*serve)
            return cmd_serve(port, host, deck_dir, serve_log_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
