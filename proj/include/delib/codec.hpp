#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "delib/events.hpp"
#include "delib/model.hpp"

namespace delib::codec {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Decoders throw Error(Invalid) on any shape or type mismatch.

json encode(const EngineConfig& cfg);
/// Reads a possibly partial config on top of `base`. Unknown keys are
/// rejected so that typos do not silently fall back to defaults.
EngineConfig decode_config(const json& j, const EngineConfig& base = {});

json encode(const NearDomination& nd);
NearDomination decode_near_domination(const json& j);

json encode(const TaskKind& kind);
TaskKind decode_task_kind(const json& j);

json encode_payload(const EventPayload& payload);
/// Throws Error(CorruptLog) for an unknown kind tag.
EventPayload decode_payload(std::string_view kind, const json& j);

json encode(const DeliberationState& state);
DeliberationState decode_state(const json& j);

/// Compact dump with keys in sorted order; equal values give equal bytes.
std::string canonical(const json& j);

}  // namespace delib::codec
