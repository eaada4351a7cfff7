#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tul {

/// One check-in event: user u visited POI p at time t.
struct CheckinRecord {
  std::string user_id;
  std::int64_t timestamp = 0; // epoch seconds, UTC
  std::string poi_id;
  std::string category_id;
  std::optional<double> lat;
  std::optional<double> lon;

  bool operator==(const CheckinRecord&) const = default;
};

/// A user's check-ins within one 24-hour interval, in chronological order.
struct SubTrajectory {
  std::string user_id;
  std::int64_t interval_index = 0; // floor(timestamp / 86400)
  std::vector<CheckinRecord> records;

  std::size_t length() const { return records.size(); }
  std::int64_t first_timestamp() const { return records.front().timestamp; }
  std::int64_t last_timestamp() const { return records.back().timestamp; }
};

/// Dense index spaces for POIs, categories, users and time slices.
/// Index 0 of the POI and category spaces is reserved for out-of-vocabulary
/// symbols; real ids start at 1 in first-occurrence order.
struct Vocabulary {
  std::unordered_map<std::string, int> poi_index;
  std::unordered_map<std::string, int> category_index;
  std::unordered_map<std::string, int> user_index;
  std::vector<std::string> user_ids; // inverse of user_index
  int num_time_slices = 24;

  int num_pois() const { return static_cast<int>(poi_index.size()) + 1; }
  int num_categories() const { return static_cast<int>(category_index.size()) + 1; }
  int num_users() const { return static_cast<int>(user_index.size()); }

  int poi_id_to_index(const std::string& id) const {
    auto it = poi_index.find(id);
    return it == poi_index.end() ? 0 : it->second;
  }
  int category_id_to_index(const std::string& id) const {
    auto it = category_index.find(id);
    return it == category_index.end() ? 0 : it->second;
  }
  /// -1 when the user is unknown.
  int user_id_to_index(const std::string& id) const {
    auto it = user_index.find(id);
    return it == user_index.end() ? -1 : it->second;
  }
};

using PerUserTrajectories = std::map<std::string, std::vector<SubTrajectory>>;

/// Chronological split: per user, training then validation then test.
struct DatasetSplit {
  PerUserTrajectories train;
  PerUserTrajectories validation;
  PerUserTrajectories test;
};

struct DatasetStats {
  std::int64_t num_users = 0;
  std::int64_t num_trajectories = 0;
  std::int64_t num_pois = 0;
  std::int64_t num_categories = 0;
  std::int64_t duration_days = 0;

  bool operator==(const DatasetStats&) const = default;
};

} // namespace tul
