#pragma once

#include <json.hpp>

#include <mutex>
#include <string>
#include <vector>

namespace translab {

/// Structured run log: one JSON object per record, one record per line.
class RunLog {
public:
  RunLog() = default;
  explicit RunLog(std::string path) : path_(std::move(path)) {}

  void append(nlohmann::json record);
  const std::vector<nlohmann::json>& records() const noexcept { return records_; }

  /// Appends the records to `path` (no-op when constructed without a path).
  void flush() const;

private:
  std::string path_;
  std::vector<nlohmann::json> records_;
  mutable std::mutex mutex_;
};

} // namespace translab
