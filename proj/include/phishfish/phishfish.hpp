#pragma once

#include "phishfish/error.hpp"
#include "phishfish/xorshift.hpp"
#include "phishfish/url_model.hpp"
#include "phishfish/phish_rules.hpp"
#include "phishfish/deck.hpp"
#include "phishfish/game_engine.hpp"
#include "phishfish/telemetry.hpp"
#include "phishfish/bots.hpp"
