#pragma once

// HTTP+JSON facade over the engine. All game logic stays in the library;
// this layer only routes requests, keeps sessions in memory, and appends to
// each session's event log.
//
//   POST /games                  {"deck", "seed"?, "config"?}        -> 201
//   GET  /games/{id}                                                 -> 200
//   POST /games/{id}/actions     {"action", "elapsed"?}              -> 200
//   GET  /games/{id}/metrics                                         -> 200
//   GET  /decks                                                      -> 200
//
// Errors are {"error": code, "message": text}.

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "phishfish/deck.hpp"
#include "phishfish/error.hpp"
#include "phishfish/game_engine.hpp"
#include "phishfish/telemetry.hpp"

namespace phishfish {

inline constexpr int default_service_port = 8642;

inline nlohmann::json to_json(const round_view& v)
{
    return {{"url", v.url},
            {"round_index", v.round_index},
            {"total_rounds", v.total_rounds},
            {"score", v.score},
            {"lives", v.lives},
            {"time_remaining", v.time_remaining},
            {"tip", v.tip ? nlohmann::json(*v.tip) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const final_result& r)
{
    return {{"phase", to_string(r.phase)},     {"score", r.score},
            {"lives", r.lives},                {"time_remaining", r.time_remaining},
            {"rounds_played", r.rounds_played}, {"total_rounds", r.total_rounds}};
}

inline nlohmann::json to_json(const outcome& o)
{
    return {{"kind", to_string(o.kind)},
            {"feedback", o.feedback},
            {"tip", o.tip ? nlohmann::json(*o.tip) : nlohmann::json(nullptr)},
            {"score_delta", o.score_delta},
            {"time_delta", o.time_delta},
            {"lives_delta", o.lives_delta}};
}

inline nlohmann::json to_json(const session_metrics& m)
{
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    return {{"accuracy", opt(m.accuracy)},
            {"correct_count", m.correct_count},
            {"false_positive_count", m.false_positive_count},
            {"false_negative_count", m.false_negative_count},
            {"teacher_ask_count", m.teacher_ask_count},
            {"mean_time_per_decision", opt(m.mean_time_per_decision)},
            {"final_score", m.final_score},
            {"final_phase", to_string(m.final_phase)}};
}

struct service_options {
    std::optional<std::filesystem::path> log_dir;
    seconds elapsed_cap = 600;
};

class game_service {
public:
    struct response {
        int status = 200;
        nlohmann::json body;
    };

    explicit game_service(deck_catalog decks, service_options options = {})
        : decks_(std::move(decks)), options_(std::move(options))
    {
        if (options_.log_dir)
            std::filesystem::create_directories(*options_.log_dir);
    }

    response list_decks() const { return {200, {{"decks", decks_.names()}}}; }

    response create_session(const nlohmann::json& body)
    {
        if (!body.is_object())
            return fail(400, "bad_request", "body must be a JSON object");
        for (const auto& [key, _] : body.items()) {
            if (key != "deck" && key != "seed" && key != "config")
                return fail(422, "invalid_request", "unknown key '" + key + "'");
        }
        if (body.contains("deck") && !body["deck"].is_string())
            return fail(422, "invalid_request", "deck must be a string");
        const std::string deck_name = body.value("deck", std::string("builtin"));
        const deck* d = decks_.find(deck_name);
        if (!d)
            return fail(404, "unknown_deck", "unknown deck '" + deck_name + "'");

        std::uint64_t seed = 0;
        if (body.contains("seed")) {
            if (!body["seed"].is_number_unsigned())
                return fail(422, "invalid_request", "seed must be a non-negative integer");
            seed = body["seed"].get<std::uint64_t>();
        } else {
            seed = entropy_seed();
        }

        try {
            game_config config = body.contains("config") ? config_from_json(body["config"]) : game_config{};
            auto slot = std::make_shared<session_slot>();
            std::string id;
            {
                std::unique_lock lock(sessions_mutex_);
                id = fresh_id();
                slot->id = id;
                if (options_.log_dir)
                    slot->file.open(*options_.log_dir / (id + ".phlog"), std::ios::binary | std::ios::trunc);
                auto* raw = slot.get();
                slot->session.emplace(config, *d, seed, [raw](const session_event& e) { raw->write(e); });
                sessions_.emplace(id, slot);
            }
            std::lock_guard slot_lock(slot->mutex);
            auto body_out = state_body(*slot);
            body_out["seed"] = seed;
            body_out["deck"] = deck_name;
            return {201, std::move(body_out)};
        } catch (const error& e) {
            if (e.code() == errc::invalid_config || e.code() == errc::deck_too_small)
                return fail(422, std::string(to_string(e.code())), e.what());
            throw;
        }
    }

    response get_state(const std::string& id) const
    {
        auto slot = find(id);
        if (!slot)
            return unknown_session(id);
        std::lock_guard lock(slot->mutex);
        return {200, state_body(*slot)};
    }

    response post_action(const std::string& id, const nlohmann::json& body)
    {
        auto slot = find(id);
        if (!slot)
            return unknown_session(id);
        if (!body.is_object())
            return fail(400, "bad_request", "body must be a JSON object");

        std::optional<action> act;
        if (body.contains("action") && body["action"].is_string()) {
            const auto name = body["action"].get<std::string>();
            for (auto a : {action::eat, action::avoid, action::ask_teacher}) {
                if (to_string(a) == name)
                    act = a;
            }
        }
        if (!act)
            return fail(422, "invalid_request", "action must be one of \"eat\", \"avoid\", \"ask_teacher\"");
        seconds elapsed = 0;
        if (body.contains("elapsed")) {
            if (!body["elapsed"].is_number_integer() || body["elapsed"].get<std::int64_t>() < 0)
                return fail(422, "invalid_request", "elapsed must be a non-negative integer");
            elapsed = std::min<seconds>(body["elapsed"].get<std::int64_t>(), options_.elapsed_cap);
        }

        std::lock_guard lock(slot->mutex);
        auto& session = *slot->session;
        if (session.state().finished())
            return game_over(*slot);
        session.tick(elapsed);
        if (session.state().finished())
            return game_over(*slot);
        auto out = session.act(*act);
        auto body_out = state_body(*slot);
        body_out["outcome"] = to_json(out);
        return {200, std::move(body_out)};
    }

    response get_metrics(const std::string& id) const
    {
        auto slot = find(id);
        if (!slot)
            return unknown_session(id);
        std::lock_guard lock(slot->mutex);
        const auto& log = slot->session->log();
        auto body = to_json(metrics(log, decks_));
        auto rounds = nlohmann::json::array();
        for (const auto& e : log.events()) {
            if (const auto* a = std::get_if<acted>(&e.event)) {
                rounds.push_back({{"round_index", a->round_index},
                                  {"url", a->url},
                                  {"action", to_string(a->act)},
                                  {"outcome", to_string(a->kind)}});
            }
        }
        body["rounds"] = std::move(rounds);
        body["session_id"] = id;
        return {200, std::move(body)};
    }

    // Event log of a session, for replay checks and the CLI.
    std::optional<event_log> session_log(const std::string& id) const
    {
        auto slot = find(id);
        if (!slot)
            return std::nullopt;
        std::lock_guard lock(slot->mutex);
        return slot->session->log();
    }

    const deck_catalog& decks() const noexcept { return decks_; }

    // Transport-independent routing; `mount` forwards httplib requests here.
    response handle(std::string_view method, std::string_view path, std::string_view body_text)
    {
        nlohmann::json body = nlohmann::json::object();
        if (method == "POST" && !body_text.empty()) {
            body = nlohmann::json::parse(body_text, nullptr, false);
            if (body.is_discarded())
                return fail(400, "bad_request", "body is not valid JSON");
        }

        auto parts = detail::split(path, '/');
        // "/games/x" splits into "", "games", "x".
        if (parts.empty() || !parts.front().empty())
            return fail(404, "not_found", "no route for " + std::string(path));
        parts.erase(parts.begin());

        if (parts == std::vector<std::string>{"decks"} && method == "GET")
            return list_decks();
        if (parts == std::vector<std::string>{"games"} && method == "POST")
            return create_session(body);
        if (parts.size() == 2 && parts[0] == "games" && method == "GET")
            return get_state(parts[1]);
        if (parts.size() == 3 && parts[0] == "games" && parts[2] == "actions" && method == "POST")
            return post_action(parts[1], body);
        if (parts.size() == 3 && parts[0] == "games" && parts[2] == "metrics" && method == "GET")
            return get_metrics(parts[1]);
        return fail(404, "not_found", "no route for " + std::string(method) + " " + std::string(path));
    }

    void mount(httplib::Server& server)
    {
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Headers", "Content-Type"},
                                    {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
        auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            response r;
            try {
                r = handle(req.method, req.path, req.body);
            } catch (const std::exception& e) {
                r = fail(500, "internal", e.what());
            }
            res.status = r.status;
            res.set_content(r.body.dump(), "application/json");
        };
        server.Get(R"(/.*)", forward);
        server.Post(R"(/.*)", forward);
        server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    }

private:
    struct session_slot {
        std::string id;
        mutable std::mutex mutex;
        std::optional<recorded_session> session;
        std::ofstream file;

        void write(const session_event& e)
        {
            if (file.is_open()) {
                file << to_json_line(e) << '\n';
                file.flush();
            }
        }
    };

    static response fail(int status, std::string code, std::string message)
    {
        return {status, {{"error", std::move(code)}, {"message", std::move(message)}}};
    }

    static response unknown_session(const std::string& id)
    {
        return fail(404, "unknown_session", "unknown session '" + id + "'");
    }

    static nlohmann::json state_body(const session_slot& slot)
    {
        const auto& s = slot.session->state();
        nlohmann::json body{{"session_id", slot.id}, {"phase", to_string(s.phase)}};
        if (s.finished() || slot.session->closed())
            body["result"] = to_json(result(s));
        else
            body["view"] = to_json(view(s));
        return body;
    }

    static response game_over(const session_slot& slot)
    {
        auto r = fail(409, "game_over", "game is over");
        r.body["result"] = to_json(result(slot.session->state()));
        return r;
    }

    std::shared_ptr<session_slot> find(const std::string& id) const
    {
        std::shared_lock lock(sessions_mutex_);
        auto it = sessions_.find(id);
        return it == sessions_.end() ? nullptr : it->second;
    }

    // Caller holds sessions_mutex_ exclusively.
    std::string fresh_id()
    {
        static constexpr char hex[] = "0123456789abcdef";
        for (;;) {
            std::string id;
            for (int i = 0; i < 4; ++i) {
                auto v = id_source_();
                for (int k = 0; k < 8; ++k, v >>= 4)
                    id += hex[v & 0xF];
            }
            if (!sessions_.count(id))
                return id;
        }
    }

    std::uint64_t entropy_seed()
    {
        std::lock_guard lock(entropy_mutex_);
        return (static_cast<std::uint64_t>(entropy_()) << 32) ^ entropy_();
    }

    deck_catalog decks_;
    service_options options_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<session_slot>> sessions_;
    std::random_device id_source_;
    std::mutex entropy_mutex_;
    std::random_device entropy_;
};

} // namespace phishfish
