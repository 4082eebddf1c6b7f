#pragma once

// The play loop as a pure state machine. States are values: apply_action and
// tick return a new state and never touch their input. The engine never
// advances time on its own; the host reports elapsed seconds through tick.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phishfish/deck.hpp"
#include "phishfish/error.hpp"

namespace phishfish {

using seconds = std::int64_t;

inline constexpr std::string_view feedback_correct = "WOW well done";
inline constexpr std::string_view feedback_wrong = "Oh Try again";
inline constexpr std::string_view feedback_tip = "The teacher fish gives you a tip";

struct game_config {
    seconds initial_time = 600;
    int initial_lives = 5;
    int points_per_correct = 1;
    seconds teacher_cost = 100;
    seconds error_time_penalty = 100;
    int error_life_penalty = 1;
    int deck_size = 10;

    bool operator==(const game_config&) const = default;
};

inline void validate(const game_config& c)
{
    std::vector<std::string> bad;
    if (c.initial_time <= 0)
        bad.emplace_back("initial_time must be > 0");
    if (c.initial_lives <= 0)
        bad.emplace_back("initial_lives must be > 0");
    if (c.points_per_correct <= 0)
        bad.emplace_back("points_per_correct must be > 0");
    if (c.teacher_cost <= 0)
        bad.emplace_back("teacher_cost must be > 0");
    if (c.error_time_penalty < 0)
        bad.emplace_back("error_time_penalty must be >= 0");
    if (c.error_life_penalty < 0)
        bad.emplace_back("error_life_penalty must be >= 0");
    if (c.deck_size <= 0)
        bad.emplace_back("deck_size must be > 0");
    if (!bad.empty()) {
        std::string msg = "invalid config:";
        for (const auto& b : bad)
            msg += " " + b + ";";
        throw error(errc::invalid_config, msg);
    }
}

enum class game_phase { in_round, won, lost };

constexpr std::string_view to_string(game_phase p) noexcept
{
    switch (p) {
    case game_phase::in_round: return "in_round";
    case game_phase::won: return "won";
    case game_phase::lost: return "lost";
    }
    return "";
}

enum class action { eat, avoid, ask_teacher };

constexpr std::string_view to_string(action a) noexcept
{
    switch (a) {
    case action::eat: return "eat";
    case action::avoid: return "avoid";
    case action::ask_teacher: return "ask_teacher";
    }
    return "";
}

enum class outcome_kind { correct_eat, correct_avoid, false_negative, false_positive, tip_given };

constexpr std::string_view to_string(outcome_kind k) noexcept
{
    switch (k) {
    case outcome_kind::correct_eat: return "correct_eat";
    case outcome_kind::correct_avoid: return "correct_avoid";
    case outcome_kind::false_negative: return "false_negative";
    case outcome_kind::false_positive: return "false_positive";
    case outcome_kind::tip_given: return "tip_given";
    }
    return "";
}

constexpr bool is_correct(outcome_kind k) noexcept
{
    return k == outcome_kind::correct_eat || k == outcome_kind::correct_avoid;
}

constexpr bool is_error(outcome_kind k) noexcept
{
    return k == outcome_kind::false_negative || k == outcome_kind::false_positive;
}

struct outcome {
    outcome_kind kind = outcome_kind::tip_given;
    std::string feedback;
    std::optional<std::string> tip;
    int score_delta = 0;
    seconds time_delta = 0;
    int lives_delta = 0;

    bool operator==(const outcome&) const = default;
};

struct game_state {
    game_config config;
    std::vector<worm_card> arranged_cards;
    int round_index = 0;
    int score = 0;
    int lives = 0;
    // May go negative when an error or an ask overdraws the clock; any value
    // <= 0 means the game is lost.
    seconds time_remaining = 0;
    game_phase phase = game_phase::in_round;
    bool tip_shown_this_round = false;
    std::uint64_t seed = 0;

    bool operator==(const game_state&) const = default;

    const worm_card& current_card() const { return arranged_cards.at(static_cast<std::size_t>(round_index)); }
    bool finished() const noexcept { return phase != game_phase::in_round; }
};

// What the player may see mid-round. Deliberately carries no truth label and
// no focus category.
struct round_view {
    std::string url;
    int round_index = 0;
    int total_rounds = 0;
    int score = 0;
    int lives = 0;
    seconds time_remaining = 0;
    std::optional<std::string> tip;

    bool operator==(const round_view&) const = default;
};

struct final_result {
    game_phase phase = game_phase::lost;
    int score = 0;
    int lives = 0;
    seconds time_remaining = 0;
    int rounds_played = 0;
    int total_rounds = 0;

    bool operator==(const final_result&) const = default;
};

inline game_state new_game(const game_config& config, const deck& d, std::uint64_t seed)
{
    validate(config);
    if (static_cast<std::size_t>(config.deck_size) > d.cards.size())
        throw error(errc::deck_too_small, "deck '" + d.name + "' has " + std::to_string(d.cards.size()) +
                                              " cards, game needs " + std::to_string(config.deck_size));
    game_state s;
    s.config = config;
    s.arranged_cards = arrange(d, seed);
    s.arranged_cards.resize(static_cast<std::size_t>(config.deck_size));
    s.lives = config.initial_lives;
    s.time_remaining = config.initial_time;
    s.seed = seed;
    return s;
}

namespace detail {

inline void require_in_round(const game_state& s)
{
    if (s.finished())
        throw error(errc::game_over, std::string("game is over (") + std::string(to_string(s.phase)) + ")");
}

inline void settle_phase(game_state& s)
{
    if (s.lives <= 0 || s.time_remaining <= 0)
        s.phase = game_phase::lost;
    else if (s.round_index == s.config.deck_size)
        s.phase = game_phase::won;
}

} // namespace detail

inline std::pair<game_state, outcome> apply_action(const game_state& s, action a)
{
    detail::require_in_round(s);
    game_state next = s;
    outcome out;
    const auto& card = s.current_card();

    if (a == action::ask_teacher) {
        out.kind = outcome_kind::tip_given;
        out.feedback = feedback_tip;
        out.tip = card.tip;
        out.time_delta = -s.config.teacher_cost;
        next.tip_shown_this_round = true;
    } else {
        const bool good = card.truth == worm_truth::good;
        if (a == action::eat)
            out.kind = good ? outcome_kind::correct_eat : outcome_kind::false_negative;
        else
            out.kind = good ? outcome_kind::false_positive : outcome_kind::correct_avoid;

        if (is_correct(out.kind)) {
            out.feedback = feedback_correct;
            out.score_delta = s.config.points_per_correct;
        } else {
            out.feedback = feedback_wrong;
            out.time_delta = -s.config.error_time_penalty;
            out.lives_delta = -std::min(s.config.error_life_penalty, s.lives);
        }
        ++next.round_index;
        next.tip_shown_this_round = false;
    }

    next.score += out.score_delta;
    next.time_remaining += out.time_delta;
    next.lives += out.lives_delta;
    detail::settle_phase(next);
    return {std::move(next), std::move(out)};
}

inline game_state tick(const game_state& s, seconds elapsed)
{
    if (elapsed < 0)
        throw error(errc::invalid_argument, "elapsed time must be >= 0");
    detail::require_in_round(s);
    game_state next = s;
    next.time_remaining -= elapsed;
    if (next.time_remaining <= 0) {
        next.time_remaining = 0;
        next.phase = game_phase::lost;
    }
    return next;
}

inline round_view view(const game_state& s)
{
    detail::require_in_round(s);
    round_view v;
    v.url = s.current_card().url;
    v.round_index = s.round_index;
    v.total_rounds = s.config.deck_size;
    v.score = s.score;
    v.lives = s.lives;
    v.time_remaining = s.time_remaining;
    if (s.tip_shown_this_round)
        v.tip = s.current_card().tip;
    return v;
}

inline final_result result(const game_state& s)
{
    return {s.phase, s.score, s.lives, std::max<seconds>(0, s.time_remaining), s.round_index, s.config.deck_size};
}

} // namespace phishfish
