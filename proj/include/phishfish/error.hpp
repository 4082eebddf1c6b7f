#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phishfish {

enum class errc {
    empty_input,
    malformed_host,
    ip_host_has_no_domain,
    unknown_domain,
    parse_error,
    validation_error,
    deck_too_small,
    invalid_config,
    game_over,
    sequence_gap,
    replay_divergence,
    unknown_deck,
    invalid_argument,
};

constexpr std::string_view to_string(errc c) noexcept
{
    switch (c) {
    case errc::empty_input: return "empty_input";
    case errc::malformed_host: return "malformed_host";
    case errc::ip_host_has_no_domain: return "ip_host_has_no_domain";
    case errc::unknown_domain: return "unknown_domain";
    case errc::parse_error: return "parse_error";
    case errc::validation_error: return "validation_error";
    case errc::deck_too_small: return "deck_too_small";
    case errc::invalid_config: return "invalid_config";
    case errc::game_over: return "game_over";
    case errc::sequence_gap: return "sequence_gap";
    case errc::replay_divergence: return "replay_divergence";
    case errc::unknown_deck: return "unknown_deck";
    case errc::invalid_argument: return "invalid_argument";
    }
    return "unknown";
}

// Every failure the library reports is an `error` carrying a stable code.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

class validation_error : public error {
public:
    explicit validation_error(std::vector<std::string> violations)
        : error(errc::validation_error, join(violations)), violations_(std::move(violations))
    {
    }

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v)
    {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty())
                out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

} // namespace phishfish
