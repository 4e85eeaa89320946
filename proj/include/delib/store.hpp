#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "delib/events.hpp"
#include "delib/model.hpp"

namespace delib {

/// One line of an events.log file, without the trailing newline.
std::string encode_record(const DeliberationId& deliberation, const Event& event);

/// Throws CorruptLog for malformed lines and unknown kinds, VersionError for a
/// schema_version this build does not read.
Event decode_record(std::string_view line, DeliberationId* deliberation = nullptr);

struct LogContents {
  DeliberationId deliberation;  // empty for an empty log
  std::vector<Event> events;
};

/// Parses a whole log. A final line without its newline is a torn write and
/// rejected as CorruptLog, as are sequence gaps and mixed deliberation ids.
LogContents parse_log(std::string_view text);
LogContents read_log(const std::filesystem::path& path);

std::string serialize_log(const DeliberationId& deliberation, std::span<const Event> events);

/// Applies every event in order to an empty state named `deliberation`.
DeliberationState replay(const DeliberationId& deliberation, std::span<const Event> events);
DeliberationState replay(const LogContents& log);

/// Canonical document; equal states give identical bytes.
std::string snapshot(const DeliberationState& state);
DeliberationState load_snapshot(std::string_view document);

/// Append-only writer for one events.log. Not thread-safe; the owner
/// serializes appends.
class EventLog {
 public:
  /// Opens or creates the log, validating any existing content.
  EventLog(std::filesystem::path path, DeliberationId deliberation, bool sync = true);
  ~EventLog();
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  /// Throws CorruptLog unless event.seq == last_seq() + 1.
  std::uint64_t append(const Event& event);
  std::uint64_t last_seq() const { return last_seq_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  DeliberationId deliberation_;
  bool sync_;
  int fd_ = -1;
  std::uint64_t last_seq_ = 0;
};

/// Directory layout: <root>/<deliberation>/events.log and
/// <root>/<deliberation>/snapshots/<seq>.snap.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path log_path(const DeliberationId& id) const;
  std::filesystem::path snapshot_dir(const DeliberationId& id) const;

  /// Deliberations with an events.log, ascending.
  std::vector<DeliberationId> list() const;
  bool exists(const DeliberationId& id) const;

  /// Writes snapshots/<last_seq>.snap and returns its path.
  std::filesystem::path write_snapshot(const DeliberationState& state) const;

 private:
  std::filesystem::path root_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace delib
