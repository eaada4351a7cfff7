#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tul/types.hpp"

namespace tul {

constexpr std::int64_t kSecondsPerDay = 86400;

/// Describes the column layout of a check-in file. Default matches the
/// toolkit's own export: tab-separated
///   user_id  timestamp  poi_id  category_id  [lat]  [lon]
/// Timestamps are epoch seconds; ISO-8601 strings are accepted and
/// converted. Column indices can be remapped for raw LBSN exports;
/// lat/lon set to -1 when absent.
struct FormatSpec {
  char delimiter = '\t';
  int col_user = 0;
  int col_time = 1;
  int col_poi = 2;
  int col_category = 3;
  int col_lat = 4;
  int col_lon = 5;
};

struct ParseResult {
  std::vector<CheckinRecord> records;
  std::size_t malformed_lines = 0;
  std::size_t total_lines = 0;
};

/// Parses a line-oriented check-in stream. Malformed lines are counted and
/// skipped; more than 50% malformed (of a non-empty stream) is fatal.
ParseResult parse_checkins(std::istream& in, const FormatSpec& fmt = {});
ParseResult parse_checkins_file(const std::string& path, const FormatSpec& fmt = {});

/// Writes records in the default FormatSpec layout (round-trips through
/// parse_checkins).
void write_checkins(std::ostream& out, const std::vector<CheckinRecord>& records);

/// Parses "YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+hh:mm|-hh:mm]" to epoch seconds.
/// Returns false if the string is not a valid ISO-8601 timestamp.
bool parse_iso8601(const std::string& s, std::int64_t& epoch_out);

/// Groups records per user into 24-hour sub-trajectories (UTC days,
/// interval_index = floor(timestamp / 86400)). Input order may be
/// arbitrary; every record lands in exactly one sub-trajectory.
std::vector<SubTrajectory> segment_trajectories(const std::vector<CheckinRecord>& records);

/// Per-user chronological grouping of sub-trajectories.
PerUserTrajectories group_by_user(std::vector<SubTrajectory> trajectories);

/// Builds index spaces from the training split only. Index 0 of the POI and
/// category spaces is the OOV token; remaining ids are assigned in first-
/// occurrence order. Fatal on an empty training set.
Vocabulary build_vocab(const std::vector<SubTrajectory>& train_trajectories,
                       int num_time_slices = 24);
Vocabulary build_vocab(const PerUserTrajectories& train, int num_time_slices = 24);

/// Bucket of the day this timestamp falls in:
/// floor((timestamp mod 86400) / (86400 / num_time_slices)).
int time_slice(std::int64_t timestamp, int num_time_slices);

struct SplitResult {
  DatasetSplit split;
  std::vector<std::string> dropped_users; // fewer than min_subtrajectories
};

/// Chronological 80/20 split per user; the most recent 20% (rounded up) of
/// the training pool becomes validation. Users with fewer than
/// min_subtrajectories sub-trajectories are dropped; dropping everyone is
/// fatal.
SplitResult split_dataset(const PerUserTrajectories& per_user, std::size_t min_subtrajectories = 5);

/// Counts over the union of all three splits.
DatasetStats compute_stats(const DatasetSplit& split);

/// Keeps only the top `n` users by total check-in count (ties broken by
/// user id). n == 0 keeps everyone.
PerUserTrajectories filter_top_users(const PerUserTrajectories& per_user, std::size_t n);

} // namespace tul
