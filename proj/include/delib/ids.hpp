#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace delib {

/// Integer identifier tagged by the entity it names. Ids are allocated from a
/// per-deliberation counter and never reused.
template <class Tag>
struct Id {
  std::uint64_t value{0};

  constexpr Id() = default;
  constexpr explicit Id(std::uint64_t v) : value(v) {}

  friend constexpr auto operator<=>(Id, Id) = default;
};

using ParticipantId = Id<struct ParticipantTag>;
using ProposalId = Id<struct ProposalTag>;
using TaskId = Id<struct TaskTag>;
using RewriteId = Id<struct RewriteTag>;

/// Deliberations are named by a short token that is safe as a directory name
/// and contains no '.', so that "<deliberation>.<local>" is unambiguous.
using DeliberationId = std::string;

bool valid_deliberation_id(const std::string& id);

// Local rendering: "u7", "p3", "t12", "r2".
std::string to_string(ParticipantId id);
std::string to_string(ProposalId id);
std::string to_string(TaskId id);
std::string to_string(RewriteId id);

/// Globally unique rendering "<deliberation>.<local>", e.g. "d1.p3".
template <class Tag>
std::string public_id(const DeliberationId& deliberation, Id<Tag> id) {
  return deliberation + "." + to_string(id);
}

struct PublicRef {
  DeliberationId deliberation;
  char prefix = 0;  // 'u', 'p', 't' or 'r'
  std::uint64_t value = 0;
};

/// Parses "<deliberation>.<prefix><number>"; nullopt when malformed.
std::optional<PublicRef> parse_public_id(std::string_view text);

}  // namespace delib

template <class Tag>
struct std::hash<delib::Id<Tag>> {
  std::size_t operator()(delib::Id<Tag> id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
