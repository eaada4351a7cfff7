#include "tul/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tul/errors.hpp"

namespace tul {
namespace {

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool parse_i64(const std::string& s, std::int64_t& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e && !s.empty();
}

bool parse_f64(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

} // namespace

bool parse_iso8601(const std::string& s, std::int64_t& epoch_out) {
  int y, mo, d, h, mi, sec;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &consumed) != 3 || consumed != 10)
    return false;
  std::size_t pos = 10;
  if (pos >= s.size() || (s[pos] != 'T' && s[pos] != ' ')) return false;
  ++pos;
  if (std::sscanf(s.c_str() + pos, "%2d:%2d:%2d%n", &h, &mi, &sec, &consumed) != 3 ||
      consumed != 8)
    return false;
  pos += 8;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60) return false;

  if (pos < s.size() && s[pos] == '.') { // fractional seconds: ignored
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, ++digits;
    if (digits == 0) return false;
  }

  std::int64_t offset = 0;
  if (pos < s.size()) {
    char c = s[pos];
    if (c == 'Z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      int oh, om = 0;
      ++pos;
      if (std::sscanf(s.c_str() + pos, "%2d%n", &oh, &consumed) != 1 || consumed != 2)
        return false;
      pos += 2;
      if (pos < s.size() && s[pos] == ':') ++pos;
      if (pos + 2 <= s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        if (std::sscanf(s.c_str() + pos, "%2d%n", &om, &consumed) != 1 || consumed != 2)
          return false;
        pos += 2;
      }
      offset = (std::int64_t(oh) * 60 + om) * 60;
      if (c == '-') offset = -offset;
    }
  }
  if (pos != s.size()) return false;

  epoch_out = days_from_civil(y, mo, d) * kSecondsPerDay + h * 3600 + mi * 60 + sec - offset;
  return true;
}

ParseResult parse_checkins(std::istream& in, const FormatSpec& fmt) {
  if (!in) throw DataError("parse_checkins: unreadable input stream");
  ParseResult res;
  const int max_col = std::max({fmt.col_user, fmt.col_time, fmt.col_poi, fmt.col_category});
  std::string line;
  while (std::getline(in, line)) {
    ++res.total_lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line, fmt.delimiter);
    if (static_cast<int>(fields.size()) <= max_col) {
      ++res.malformed_lines;
      continue;
    }
    CheckinRecord rec;
    rec.user_id = fields[fmt.col_user];
    rec.poi_id = fields[fmt.col_poi];
    rec.category_id = fields[fmt.col_category];
    const std::string& ts = fields[fmt.col_time];
    if (!parse_i64(ts, rec.timestamp) && !parse_iso8601(ts, rec.timestamp)) {
      ++res.malformed_lines;
      continue;
    }
    if (rec.timestamp < 0 || rec.user_id.empty() || rec.poi_id.empty() ||
        rec.category_id.empty()) {
      ++res.malformed_lines;
      continue;
    }
    double v;
    if (fmt.col_lat >= 0 && fmt.col_lat < static_cast<int>(fields.size()) &&
        parse_f64(fields[fmt.col_lat], v))
      rec.lat = v;
    if (fmt.col_lon >= 0 && fmt.col_lon < static_cast<int>(fields.size()) &&
        parse_f64(fields[fmt.col_lon], v))
      rec.lon = v;
    res.records.push_back(std::move(rec));
  }
  if (in.bad()) throw DataError("parse_checkins: read error");
  if (res.total_lines > 0 && res.malformed_lines * 2 > res.total_lines)
    throw DataError("parse_checkins: " + std::to_string(res.malformed_lines) + " of " +
                    std::to_string(res.total_lines) + " lines malformed");
  return res;
}

ParseResult parse_checkins_file(const std::string& path, const FormatSpec& fmt) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open check-in file: " + path);
  return parse_checkins(in, fmt);
}

void write_checkins(std::ostream& out, const std::vector<CheckinRecord>& records) {
  for (const auto& r : records) {
    out << r.user_id << '\t' << r.timestamp << '\t' << r.poi_id << '\t' << r.category_id;
    if (r.lat && r.lon) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "\t%.6f\t%.6f", *r.lat, *r.lon);
      out << buf;
    }
    out << '\n';
  }
}

std::vector<SubTrajectory> segment_trajectories(const std::vector<CheckinRecord>& records) {
  // Group per user preserving first-occurrence user order.
  std::vector<std::string> user_order;
  std::unordered_map<std::string, std::vector<CheckinRecord>> by_user;
  for (const auto& r : records) {
    auto [it, inserted] = by_user.try_emplace(r.user_id);
    if (inserted) user_order.push_back(r.user_id);
    it->second.push_back(r);
  }

  std::vector<SubTrajectory> out;
  for (const auto& uid : user_order) {
    auto& recs = by_user[uid];
    std::stable_sort(recs.begin(), recs.end(),
                     [](const CheckinRecord& a, const CheckinRecord& b) {
                       return a.timestamp < b.timestamp;
                     });
    SubTrajectory cur;
    for (auto& r : recs) {
      std::int64_t day = floor_div(r.timestamp, kSecondsPerDay);
      if (!cur.records.empty() && day != cur.interval_index) {
        out.push_back(std::move(cur));
        cur = SubTrajectory{};
      }
      if (cur.records.empty()) {
        cur.user_id = uid;
        cur.interval_index = day;
      }
      cur.records.push_back(std::move(r));
    }
    if (!cur.records.empty()) out.push_back(std::move(cur));
  }
  return out;
}

PerUserTrajectories group_by_user(std::vector<SubTrajectory> trajectories) {
  PerUserTrajectories per_user;
  for (auto& t : trajectories) per_user[t.user_id].push_back(std::move(t));
  for (auto& [uid, trajs] : per_user)
    std::sort(trajs.begin(), trajs.end(), [](const SubTrajectory& a, const SubTrajectory& b) {
      return a.interval_index < b.interval_index;
    });
  return per_user;
}

Vocabulary build_vocab(const std::vector<SubTrajectory>& train_trajectories,
                       int num_time_slices) {
  if (train_trajectories.empty()) throw DataError("build_vocab: empty training set");
  Vocabulary v;
  v.num_time_slices = num_time_slices;
  for (const auto& t : train_trajectories) {
    if (v.user_index.try_emplace(t.user_id, static_cast<int>(v.user_index.size())).second)
      v.user_ids.push_back(t.user_id);
    for (const auto& r : t.records) {
      // 0 is the OOV token in both spaces.
      v.poi_index.try_emplace(r.poi_id, static_cast<int>(v.poi_index.size()) + 1);
      v.category_index.try_emplace(r.category_id, static_cast<int>(v.category_index.size()) + 1);
    }
  }
  return v;
}

Vocabulary build_vocab(const PerUserTrajectories& train, int num_time_slices) {
  std::vector<SubTrajectory> flat;
  for (const auto& [uid, trajs] : train) flat.insert(flat.end(), trajs.begin(), trajs.end());
  return build_vocab(flat, num_time_slices);
}

int time_slice(std::int64_t timestamp, int num_time_slices) {
  std::int64_t tod = timestamp - floor_div(timestamp, kSecondsPerDay) * kSecondsPerDay;
  std::int64_t width = kSecondsPerDay / num_time_slices;
  return static_cast<int>(tod / width);
}

SplitResult split_dataset(const PerUserTrajectories& per_user, std::size_t min_subtrajectories) {
  SplitResult res;
  for (const auto& [uid, trajs_in] : per_user) {
    if (trajs_in.size() < min_subtrajectories) {
      res.dropped_users.push_back(uid);
      continue;
    }
    auto trajs = trajs_in;
    std::sort(trajs.begin(), trajs.end(), [](const SubTrajectory& a, const SubTrajectory& b) {
      return a.interval_index < b.interval_index;
    });
    const std::size_t n = trajs.size();
    const std::size_t pool = n * 4 / 5;         // floor(0.8 n)
    const std::size_t val_n = (pool + 4) / 5;   // ceil(0.2 pool), most recent part of the pool
    const std::size_t train_n = pool - val_n;
    if (train_n == 0 || val_n == 0 || pool == n) {
      res.dropped_users.push_back(uid);
      continue;
    }
    auto& tr = res.split.train[uid];
    auto& va = res.split.validation[uid];
    auto& te = res.split.test[uid];
    tr.assign(trajs.begin(), trajs.begin() + train_n);
    va.assign(trajs.begin() + train_n, trajs.begin() + pool);
    te.assign(trajs.begin() + pool, trajs.end());
  }
  if (res.split.train.empty())
    throw DataError("split_dataset: no user has enough sub-trajectories (minimum " +
                    std::to_string(min_subtrajectories) + ")");
  return res;
}

DatasetStats compute_stats(const DatasetSplit& split) {
  DatasetStats st;
  std::set<std::string> users, pois, cats;
  std::int64_t min_day = 0, max_day = 0;
  bool any = false;
  auto absorb = [&](const PerUserTrajectories& part) {
    for (const auto& [uid, trajs] : part) {
      if (trajs.empty()) continue;
      users.insert(uid);
      for (const auto& t : trajs) {
        ++st.num_trajectories;
        if (!any) {
          min_day = max_day = t.interval_index;
          any = true;
        }
        min_day = std::min(min_day, t.interval_index);
        max_day = std::max(max_day, t.interval_index);
        for (const auto& r : t.records) {
          pois.insert(r.poi_id);
          cats.insert(r.category_id);
        }
      }
    }
  };
  absorb(split.train);
  absorb(split.validation);
  absorb(split.test);
  st.num_users = static_cast<std::int64_t>(users.size());
  st.num_pois = static_cast<std::int64_t>(pois.size());
  st.num_categories = static_cast<std::int64_t>(cats.size());
  st.duration_days = any ? max_day - min_day + 1 : 0;
  return st;
}

PerUserTrajectories filter_top_users(const PerUserTrajectories& per_user, std::size_t n) {
  if (n == 0 || per_user.size() <= n) return per_user;
  std::vector<std::pair<std::size_t, std::string>> counts;
  for (const auto& [uid, trajs] : per_user) {
    std::size_t c = 0;
    for (const auto& t : trajs) c += t.records.size();
    counts.emplace_back(c, uid);
  }
  std::sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  PerUserTrajectories out;
  for (std::size_t i = 0; i < n; ++i) out[counts[i].second] = per_user.at(counts[i].second);
  return out;
}

} // namespace tul
