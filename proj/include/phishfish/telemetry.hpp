#pragma once

// Append-only session event log, JSON Lines (.phlog) serialization,
// deterministic replay against the engine, and learner metrics.
//
// A log names its deck and seed rather than embedding cards; replay resolves
// the deck through a deck_catalog.

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "phishfish/deck.hpp"
#include "phishfish/error.hpp"
#include "phishfish/game_engine.hpp"

namespace phishfish {

struct game_started {
    game_config config;
    std::string deck_name;
    std::uint64_t seed = 0;

    bool operator==(const game_started&) const = default;
};

struct ticked {
    seconds elapsed = 0;

    bool operator==(const ticked&) const = default;
};

struct acted {
    action act = action::eat;
    outcome_kind kind = outcome_kind::correct_eat;
    int round_index = 0;
    std::string url;

    bool operator==(const acted&) const = default;
};

struct ended {
    game_phase phase = game_phase::lost;
    int score = 0;
    int lives = 0;

    bool operator==(const ended&) const = default;
};

using event_payload = std::variant<game_started, ticked, acted, ended>;

struct session_event {
    std::uint64_t sequence_number = 0;
    // time_remaining after the event was applied
    seconds at_game_time = 0;
    event_payload event;

    bool operator==(const session_event&) const = default;
};

class event_log {
public:
    void record(session_event e)
    {
        const std::uint64_t expected = events_.size();
        if (e.sequence_number != expected)
            throw error(errc::sequence_gap, "expected sequence number " + std::to_string(expected) + ", got " +
                                                std::to_string(e.sequence_number));
        events_.push_back(std::move(e));
    }

    std::uint64_t next_sequence() const noexcept { return events_.size(); }
    const std::vector<session_event>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }
    const session_event& operator[](std::size_t i) const { return events_[i]; }

    bool operator==(const event_log&) const = default;

private:
    std::vector<session_event> events_;
};

// ---- JSON Lines ----------------------------------------------------------

namespace detail {

template <typename Enum, std::size_t N>
Enum enum_from(std::string_view text, const Enum (&values)[N], std::string_view what)
{
    for (auto v : values) {
        if (to_string(v) == text)
            return v;
    }
    throw error(errc::parse_error, "unknown " + std::string(what) + " '" + std::string(text) + "'");
}

inline action parse_action(std::string_view s)
{
    static constexpr action all[] = {action::eat, action::avoid, action::ask_teacher};
    return enum_from(s, all, "action");
}

inline outcome_kind parse_outcome_kind(std::string_view s)
{
    static constexpr outcome_kind all[] = {outcome_kind::correct_eat, outcome_kind::correct_avoid,
                                           outcome_kind::false_negative, outcome_kind::false_positive,
                                           outcome_kind::tip_given};
    return enum_from(s, all, "outcome");
}

inline game_phase parse_phase(std::string_view s)
{
    static constexpr game_phase all[] = {game_phase::in_round, game_phase::won, game_phase::lost};
    return enum_from(s, all, "phase");
}

} // namespace detail

inline nlohmann::ordered_json config_to_json(const game_config& c)
{
    return {{"initial_time", c.initial_time},
            {"initial_lives", c.initial_lives},
            {"points_per_correct", c.points_per_correct},
            {"teacher_cost", c.teacher_cost},
            {"error_time_penalty", c.error_time_penalty},
            {"error_life_penalty", c.error_life_penalty},
            {"deck_size", c.deck_size}};
}

// Reads any subset of config keys over `base`. Unknown keys are rejected.
inline game_config config_from_json(const nlohmann::json& j, game_config base = {})
{
    if (!j.is_object())
        throw error(errc::invalid_config, "config must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number_integer())
            throw error(errc::invalid_config, "config key '" + key + "' must be an integer");
        const auto v = value.get<std::int64_t>();
        auto narrow = [&](int& field) {
            if (v < INT32_MIN || v > INT32_MAX)
                throw error(errc::invalid_config, "config key '" + key + "' out of range");
            field = static_cast<int>(v);
        };
        if (key == "initial_time")
            base.initial_time = v;
        else if (key == "initial_lives")
            narrow(base.initial_lives);
        else if (key == "points_per_correct")
            narrow(base.points_per_correct);
        else if (key == "teacher_cost")
            base.teacher_cost = v;
        else if (key == "error_time_penalty")
            base.error_time_penalty = v;
        else if (key == "error_life_penalty")
            narrow(base.error_life_penalty);
        else if (key == "deck_size")
            narrow(base.deck_size);
        else
            throw error(errc::invalid_config, "unknown config key '" + key + "'");
    }
    return base;
}

inline std::string to_json_line(const session_event& e)
{
    nlohmann::ordered_json j;
    j["seq"] = e.sequence_number;
    j["t"] = e.at_game_time;
    std::visit(
        [&](const auto& ev) {
            using T = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<T, game_started>) {
                j["kind"] = "game_started";
                j["payload"] = {{"config", config_to_json(ev.config)}, {"deck", ev.deck_name}, {"seed", ev.seed}};
            } else if constexpr (std::is_same_v<T, ticked>) {
                j["kind"] = "ticked";
                j["payload"] = {{"elapsed", ev.elapsed}};
            } else if constexpr (std::is_same_v<T, acted>) {
                j["kind"] = "acted";
                j["payload"] = {{"action", to_string(ev.act)},
                                {"outcome", to_string(ev.kind)},
                                {"round_index", ev.round_index},
                                {"url", ev.url}};
            } else {
                j["kind"] = "ended";
                j["payload"] = {{"phase", to_string(ev.phase)}, {"score", ev.score}, {"lives", ev.lives}};
            }
        },
        e.event);
    return j.dump();
}

inline session_event parse_event_line(std::string_view line)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
        session_event e;
        e.sequence_number = j.at("seq").get<std::uint64_t>();
        e.at_game_time = j.at("t").get<seconds>();
        const auto kind = j.at("kind").get<std::string>();
        const auto& p = j.at("payload");
        if (kind == "game_started") {
            e.event = game_started{config_from_json(p.at("config")), p.at("deck").get<std::string>(),
                                   p.at("seed").get<std::uint64_t>()};
        } else if (kind == "ticked") {
            e.event = ticked{p.at("elapsed").get<seconds>()};
        } else if (kind == "acted") {
            e.event = acted{detail::parse_action(p.at("action").get<std::string>()),
                            detail::parse_outcome_kind(p.at("outcome").get<std::string>()),
                            p.at("round_index").get<int>(), p.at("url").get<std::string>()};
        } else if (kind == "ended") {
            e.event = ended{detail::parse_phase(p.at("phase").get<std::string>()), p.at("score").get<int>(),
                            p.at("lives").get<int>()};
        } else {
            throw error(errc::parse_error, "unknown event kind '" + kind + "'");
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw error(errc::parse_error, std::string("malformed event line: ") + ex.what());
    } catch (const error& ex) {
        if (ex.code() == errc::parse_error)
            throw;
        throw error(errc::parse_error, std::string("malformed event line: ") + ex.what());
    }
}

inline std::string serialize_log(const event_log& log)
{
    std::string out;
    for (const auto& e : log.events()) {
        out += to_json_line(e);
        out += '\n';
    }
    return out;
}

inline event_log parse_log(std::string_view text)
{
    event_log log;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!line.empty())
            log.record(parse_event_line(line));
        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    return log;
}

// ---- live recording ------------------------------------------------------

// A game plus its log. Every transition goes through here so the log always
// reproduces the state. `on_event` (if set) sees each event as it is
// recorded, for write-through to disk.
class recorded_session {
public:
    using event_sink = std::function<void(const session_event&)>;

    recorded_session(const game_config& config, const deck& d, std::uint64_t seed, event_sink sink = {})
        : state_(new_game(config, d, seed)), sink_(std::move(sink))
    {
        append(game_started{config, d.name, seed});
    }

    const game_state& state() const noexcept { return state_; }
    const event_log& log() const noexcept { return log_; }

    void tick(seconds elapsed)
    {
        state_ = phishfish::tick(state_, elapsed);
        append(ticked{elapsed});
        close_if_finished();
    }

    outcome act(action a)
    {
        const int round = state_.round_index;
        const std::string url = state_.current_card().url;
        auto [next, out] = apply_action(state_, a);
        state_ = std::move(next);
        append(acted{a, out.kind, round, url});
        close_if_finished();
        return out;
    }

    // Quitting mid-game closes the log as a loss; the engine state itself is
    // left as it was.
    void abandon()
    {
        if (!state_.finished() && !closed_)
            append(ended{game_phase::lost, state_.score, state_.lives});
        closed_ = true;
    }

    bool closed() const noexcept { return closed_; }

private:
    void append(event_payload ev)
    {
        session_event e{log_.next_sequence(), state_.time_remaining, std::move(ev)};
        log_.record(e);
        if (sink_)
            sink_(e);
    }

    void close_if_finished()
    {
        if (state_.finished() && !closed_) {
            append(ended{state_.phase, state_.score, state_.lives});
            closed_ = true;
        }
    }

    game_state state_;
    event_log log_;
    event_sink sink_;
    bool closed_ = false;
};

// ---- replay --------------------------------------------------------------

namespace detail {

[[noreturn]] inline void diverged(const session_event& e, const std::string& why)
{
    throw error(errc::replay_divergence, "event " + std::to_string(e.sequence_number) + ": " + why);
}

inline void check_time(const session_event& e, const game_state& s)
{
    if (e.at_game_time != s.time_remaining)
        diverged(e, "logged time " + std::to_string(e.at_game_time) + " but replay has " +
                        std::to_string(s.time_remaining));
}

} // namespace detail

// Re-executes a log against the engine and returns the final state. Throws
// errc::replay_divergence when any recomputed value disagrees with the log.
inline game_state replay(const event_log& log, const deck_catalog& decks)
{
    if (log.empty())
        throw error(errc::replay_divergence, "log is empty");
    const auto* start = std::get_if<game_started>(&log[0].event);
    if (!start)
        throw error(errc::replay_divergence, "log does not begin with game_started");

    game_state s = new_game(start->config, decks.at(start->deck_name), start->seed);
    detail::check_time(log[0], s);

    for (std::size_t i = 1; i < log.size(); ++i) {
        const auto& e = log[i];
        if (const auto* t = std::get_if<ticked>(&e.event)) {
            if (s.finished())
                detail::diverged(e, "tick after the game ended");
            s = tick(s, t->elapsed);
        } else if (const auto* a = std::get_if<acted>(&e.event)) {
            if (s.finished())
                detail::diverged(e, "action after the game ended");
            if (a->round_index != s.round_index || a->url != s.current_card().url)
                detail::diverged(e, "action logged for a different round");
            auto [next, out] = apply_action(s, a->act);
            if (out.kind != a->kind)
                detail::diverged(e, "logged outcome " + std::string(to_string(a->kind)) + " but replay gives " +
                                        std::string(to_string(out.kind)));
            s = std::move(next);
        } else if (const auto* end = std::get_if<ended>(&e.event)) {
            if (i + 1 != log.size())
                detail::diverged(e, "events after ended");
            const bool abandoned = !s.finished() && end->phase == game_phase::lost;
            if ((!abandoned && end->phase != s.phase) || end->score != s.score || end->lives != s.lives)
                detail::diverged(e, "final result does not match replay");
        } else {
            detail::diverged(e, "second game_started");
        }
        detail::check_time(e, s);
    }
    return s;
}

// ---- metrics -------------------------------------------------------------

struct session_metrics {
    // Absent when the session made no eat/avoid decision.
    std::optional<double> accuracy;
    int correct_count = 0;
    int false_positive_count = 0;
    int false_negative_count = 0;
    int teacher_ask_count = 0;
    std::optional<double> mean_time_per_decision;
    int final_score = 0;
    game_phase final_phase = game_phase::in_round;

    bool operator==(const session_metrics&) const = default;
};

// Counts come from the logged events alone; replay is run first so that a
// corrupt log is rejected rather than summarized.
inline session_metrics metrics(const event_log& log, const deck_catalog& decks)
{
    const game_state final_state = replay(log, decks);

    session_metrics m;
    seconds pending = 0, decision_time = 0;
    int decisions = 0;
    for (const auto& e : log.events()) {
        if (const auto* t = std::get_if<ticked>(&e.event)) {
            pending += t->elapsed;
        } else if (const auto* a = std::get_if<acted>(&e.event)) {
            switch (a->kind) {
            case outcome_kind::tip_given: ++m.teacher_ask_count; continue;
            case outcome_kind::false_positive: ++m.false_positive_count; break;
            case outcome_kind::false_negative: ++m.false_negative_count; break;
            default: ++m.correct_count; break;
            }
            ++decisions;
            decision_time += pending;
            pending = 0;
        } else if (const auto* end = std::get_if<ended>(&e.event)) {
            m.final_phase = end->phase;
        }
    }
    if (decisions > 0) {
        m.accuracy = static_cast<double>(m.correct_count) / decisions;
        m.mean_time_per_decision = static_cast<double>(decision_time) / decisions;
    }
    m.final_score = final_state.score;
    if (!std::holds_alternative<ended>(log.events().back().event))
        m.final_phase = final_state.phase;
    return m;
}

} // namespace phishfish
