#pragma once

// Scripted players for headless simulation.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "phishfish/game_engine.hpp"
#include "phishfish/phish_rules.hpp"
#include "phishfish/telemetry.hpp"
#include "phishfish/xorshift.hpp"

namespace phishfish {

enum class bot_kind {
    oracle,        // reads the hidden truth label
    random,        // uniform over eat / avoid / ask_teacher
    always_eat,
    teacher_first, // asks once per round, then follows the tip
};

constexpr std::string_view to_string(bot_kind k) noexcept
{
    switch (k) {
    case bot_kind::oracle: return "oracle";
    case bot_kind::random: return "random";
    case bot_kind::always_eat: return "always-eat";
    case bot_kind::teacher_first: return "teacher-first";
    }
    return "";
}

inline std::optional<bot_kind> parse_bot_kind(std::string_view name)
{
    for (auto k : {bot_kind::oracle, bot_kind::random, bot_kind::always_eat, bot_kind::teacher_first}) {
        if (to_string(k) == name)
            return k;
    }
    return std::nullopt;
}

class bot {
public:
    static constexpr std::uint64_t random_stream_salt = 0xA5A5A5A5A5A5A5A5ULL;

    bot(bot_kind kind, std::uint64_t seed) : kind_(kind), rng_(seed ^ random_stream_salt) {}

    bot_kind kind() const noexcept { return kind_; }

    action decide(const game_state& s)
    {
        const auto& card = s.current_card();
        switch (kind_) {
        case bot_kind::oracle:
            return card.truth == worm_truth::good ? action::eat : action::avoid;
        case bot_kind::random: {
            static constexpr action choices[] = {action::eat, action::avoid, action::ask_teacher};
            return choices[rng_.below(3)];
        }
        case bot_kind::always_eat:
            return action::eat;
        case bot_kind::teacher_first: {
            if (!s.tip_shown_this_round)
                return action::ask_teacher;
            auto rule = rule_for_tip(card.tip);
            // A tip that is not one of the rule messages gives no guidance.
            if (!rule)
                return action::avoid;
            return label_of(*rule) == verdict_label::legit ? action::eat : action::avoid;
        }
        }
        return action::avoid;
    }

private:
    bot_kind kind_;
    xorshift64star rng_;
};

// Plays one session to the end: before every action the bot spends
// `decision_time` seconds, which are ticked into the engine.
inline recorded_session play_bot_session(const game_config& config, const deck& d, std::uint64_t seed, bot_kind kind,
                                         seconds decision_time, recorded_session::event_sink sink = {})
{
    recorded_session session(config, d, seed, std::move(sink));
    bot player(kind, seed);
    while (!session.state().finished()) {
        session.tick(decision_time);
        if (session.state().finished())
            break;
        session.act(player.decide(session.state()));
    }
    return session;
}

} // namespace phishfish
