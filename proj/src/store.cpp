#include "delib/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "delib/codec.hpp"
#include "delib/error.hpp"

namespace delib {

namespace fs = std::filesystem;
using codec::json;

std::string encode_record(const DeliberationId& deliberation, const Event& event) {
  const json j = {{"schema_version", codec::kSchemaVersion},
                  {"seq", event.seq},
                  {"ts", event.timestamp},
                  {"deliberation", deliberation},
                  {"kind", std::string(event_kind(event.payload))},
                  {"payload", codec::encode_payload(event.payload)}};
  return codec::canonical(j);
}

Event decode_record(std::string_view line, DeliberationId* deliberation) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception&) {
    fail(ErrorCode::CorruptLog, "unparseable log record");
  }
  try {
    if (!j.is_object()) fail(ErrorCode::CorruptLog, "log record is not an object");
    if (j.at("schema_version").get<int>() != codec::kSchemaVersion)
      throw Error(ErrorCode::VersionError,
                  "unsupported log schema_version " + j.at("schema_version").dump());
    Event e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.timestamp = j.at("ts").get<std::string>();
    e.payload = codec::decode_payload(j.at("kind").get<std::string>(), j.at("payload"));
    if (deliberation) *deliberation = j.at("deliberation").get<std::string>();
    return e;
  } catch (const json::exception& ex) {
    fail(ErrorCode::CorruptLog, std::string("malformed log record: ") + ex.what());
  } catch (const Error& ex) {
    if (ex.code() == ErrorCode::VersionError || ex.code() == ErrorCode::CorruptLog) throw;
    fail(ErrorCode::CorruptLog, std::string("malformed log record: ") + ex.what());
  }
}

LogContents parse_log(std::string_view text) {
  LogContents out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    ++line_no;
    if (nl == std::string_view::npos)
      fail(ErrorCode::CorruptLog, "log truncated in record " + std::to_string(line_no));
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    DeliberationId id;
    Event e = decode_record(line, &id);
    if (out.events.empty())
      out.deliberation = id;
    else if (id != out.deliberation)
      fail(ErrorCode::CorruptLog, "record " + std::to_string(line_no) + " belongs to another deliberation");
    const std::uint64_t expected = out.events.empty() ? 1 : out.events.back().seq + 1;
    if (e.seq != expected)
      fail(ErrorCode::CorruptLog, "record " + std::to_string(line_no) + " has seq " +
                                      std::to_string(e.seq) + ", expected " + std::to_string(expected));
    out.events.push_back(std::move(e));
  }
  return out;
}

LogContents read_log(const fs::path& path) { return parse_log(read_file(path)); }

std::string serialize_log(const DeliberationId& deliberation, std::span<const Event> events) {
  std::string out;
  for (const auto& e : events) {
    out += encode_record(deliberation, e);
    out += '\n';
  }
  return out;
}

DeliberationState replay(const DeliberationId& deliberation, std::span<const Event> events) {
  DeliberationState s;
  s.id = deliberation;
  for (const auto& e : events) apply(s, e);
  return s;
}

DeliberationState replay(const LogContents& log) { return replay(log.deliberation, log.events); }

std::string snapshot(const DeliberationState& state) { return codec::canonical(codec::encode(state)); }

DeliberationState load_snapshot(std::string_view document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::exception&) {
    fail(ErrorCode::Invalid, "unparseable snapshot");
  }
  return codec::decode_state(j);
}

EventLog::EventLog(fs::path path, DeliberationId deliberation, bool sync)
    : path_(std::move(path)), deliberation_(std::move(deliberation)), sync_(sync) {
  if (fs::exists(path_)) {
    auto contents = read_log(path_);
    if (!contents.events.empty() && contents.deliberation != deliberation_)
      fail(ErrorCode::CorruptLog, "log at " + path_.string() + " belongs to " + contents.deliberation);
    if (!contents.events.empty()) last_seq_ = contents.events.back().seq;
  }
  fs::create_directories(path_.parent_path());
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) fail(ErrorCode::Invalid, "cannot open " + path_.string() + ": " + std::strerror(errno));
}

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

std::uint64_t EventLog::append(const Event& event) {
  if (event.seq != last_seq_ + 1)
    fail(ErrorCode::CorruptLog, "append with seq " + std::to_string(event.seq) + " after " +
                                    std::to_string(last_seq_));
  const std::string line = encode_record(deliberation_, event) + '\n';
  std::size_t done = 0;
  while (done < line.size()) {
    const auto n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::Invalid, "write to " + path_.string() + " failed: " + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
  if (sync_) ::fdatasync(fd_);
  last_seq_ = event.seq;
  return last_seq_;
}

Store::Store(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

fs::path Store::log_path(const DeliberationId& id) const { return root_ / id / "events.log"; }

fs::path Store::snapshot_dir(const DeliberationId& id) const { return root_ / id / "snapshots"; }

std::vector<DeliberationId> Store::list() const {
  std::vector<DeliberationId> out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && valid_deliberation_id(name) && fs::exists(entry.path() / "events.log"))
      out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Store::exists(const DeliberationId& id) const {
  return valid_deliberation_id(id) && fs::exists(log_path(id));
}

fs::path Store::write_snapshot(const DeliberationState& state) const {
  const auto dir = snapshot_dir(state.id);
  fs::create_directories(dir);
  const auto path = dir / (std::to_string(state.last_seq) + ".snap");
  write_file(path, snapshot(state));
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::NotFound, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Invalid, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::Invalid, "write to " + path.string() + " failed");
}

}  // namespace delib
