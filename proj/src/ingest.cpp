#include "skiprec/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <random>

#include "skiprec/error.hpp"
#include "text_util.hpp"

namespace skiprec {

std::string_view class_code(InteractionClass cls) noexcept {
  switch (cls) {
    case InteractionClass::HighlyPositive: return "H";
    case InteractionClass::LessPositive: return "L";
    case InteractionClass::Negative: return "N";
  }
  return "?";
}

InteractionClass parse_class_code(std::string_view code) {
  if (code == "H") return InteractionClass::HighlyPositive;
  if (code == "L") return InteractionClass::LessPositive;
  if (code == "N") return InteractionClass::Negative;
  throw DataError("unknown interaction class '" + std::string(code) + "'");
}

std::uint32_t IdMap::add(const std::string& id) {
  const auto [it, inserted] = index_.try_emplace(id, static_cast<std::uint32_t>(ids_.size()));
  if (inserted) ids_.push_back(id);
  return it->second;
}

std::optional<std::uint32_t> IdMap::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t IdMap::at(std::string_view id) const {
  if (auto idx = find(id)) return *idx;
  throw DataError("unknown id '" + std::string(id) + "'");
}

std::vector<Interaction> parse_interactions(std::istream& in) {
  std::vector<Interaction> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (detail::trim(text).empty()) continue;
    const auto fields = detail::split_fields(text);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 5 || detail::trim(fields[0]) != "user_id" ||
          detail::trim(fields[1]) != "video_id" || detail::trim(fields[2]) != "playing_time" ||
          detail::trim(fields[3]) != "duration" || detail::trim(fields[4]) != "timestamp") {
        throw ParseError(line_no,
                         "expected header user_id,video_id,playing_time,duration,timestamp");
      }
      continue;
    }
    if (fields.size() != 5) {
      throw ParseError(line_no, "expected 5 fields, found " + std::to_string(fields.size()));
    }
    Interaction row;
    row.user_id = std::string(detail::trim(fields[0]));
    row.video_id = std::string(detail::trim(fields[1]));
    if (row.user_id.empty() || row.video_id.empty()) throw ParseError(line_no, "empty id");
    const auto playing = detail::parse_double(fields[2]);
    const auto duration = detail::parse_double(fields[3]);
    const auto stamp = detail::parse_int(fields[4]);
    if (!playing || !duration || !stamp) throw ParseError(line_no, "malformed numeric field");
    if (!std::isfinite(*playing) || *playing < 0.0) {
      throw ParseError(line_no, "playing_time must be a non-negative number");
    }
    if (!std::isfinite(*duration) || *duration <= 0.0) {
      throw ParseError(line_no, "duration must be positive");
    }
    row.playing_time = *playing;
    row.duration = *duration;
    row.timestamp = *stamp;
    out.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError(1, "empty interactions file");
  return out;
}

InteractionClass classify(const Interaction& interaction, double threshold) {
  if (interaction.playing_time >= interaction.duration) return InteractionClass::HighlyPositive;
  if (interaction.playing_time <= threshold) return InteractionClass::Negative;
  return InteractionClass::LessPositive;
}

IdMaps build_id_maps(const std::vector<Interaction>& interactions) {
  IdMaps ids;
  for (const auto& it : interactions) {
    ids.users.add(it.user_id);
    ids.videos.add(it.video_id);
  }
  return ids;
}

std::vector<LabeledPair> deduplicate_and_label(const std::vector<Interaction>& interactions,
                                               const IdMaps& ids, double threshold) {
  struct Seen {
    std::size_t count = 0;
    InteractionClass first = InteractionClass::Negative;
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, Seen> seen;
  for (const auto& it : interactions) {
    auto& slot = seen[{ids.users.at(it.user_id), ids.videos.at(it.video_id)}];
    if (slot.count++ == 0) slot.first = classify(it, threshold);
  }
  std::vector<LabeledPair> out;
  out.reserve(seen.size());
  for (const auto& [key, s] : seen) {
    out.push_back({key.first, key.second, s.count >= 2 ? InteractionClass::HighlyPositive : s.first});
  }
  return out;
}

std::vector<UserInteractionProfile> user_profiles(const std::vector<LabeledPair>& pairs,
                                                  std::size_t n_users) {
  std::vector<UserInteractionProfile> out(n_users);
  for (const auto& p : pairs) {
    auto& prof = out.at(p.user);
    switch (p.cls) {
      case InteractionClass::HighlyPositive: ++prof.n_highly; break;
      case InteractionClass::LessPositive: ++prof.n_less; break;
      case InteractionClass::Negative: ++prof.n_negative; break;
    }
  }
  return out;
}

DatasetSplit split_per_user(const std::vector<LabeledPair>& pairs, SplitRatios ratios,
                            std::uint64_t seed) {
  std::map<std::uint32_t, std::vector<LabeledPair>> by_user;
  for (const auto& p : pairs) by_user[p.user].push_back(p);

  DatasetSplit split;
  split.seed = seed;
  for (auto& [user, items] : by_user) {
    // Canonical order first so the result does not depend on input order.
    std::sort(items.begin(), items.end(), [](const LabeledPair& a, const LabeledPair& b) {
      return a.video < b.video;
    });
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      user};
    std::mt19937_64 rng(seq);
    std::shuffle(items.begin(), items.end(), rng);

    const std::size_t n = items.size();
    // Small epsilon guards products like 0.6 * n landing just below an integer.
    // A lone pair goes to train rather than leaving the user without one.
    const auto n_train =
        std::max<std::size_t>(static_cast<std::size_t>(std::floor(ratios.train * n + 1e-9)), n > 0);
    const auto n_val = static_cast<std::size_t>(std::floor(ratios.validation * n + 1e-9));
    for (std::size_t i = 0; i < n; ++i) {
      if (i < n_train) {
        split.train.push_back(items[i]);
      } else if (i < n_train + n_val) {
        split.validation.push_back(items[i]);
      } else {
        split.test.push_back(items[i]);
      }
    }
  }
  return split;
}

Matrix load_features(std::istream& in, const IdMap& videos, std::size_t dim) {
  Matrix out(videos.size(), dim);
  std::vector<bool> filled(videos.size(), false);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (detail::trim(text).empty()) continue;
    const auto fields = detail::split_fields(text);
    if (!header_seen) {
      header_seen = true;
      if (detail::trim(fields[0]) == "video_id") {
        if (fields.size() != dim + 1) {
          throw ParseError(line_no, "feature header has " + std::to_string(fields.size() - 1) +
                                        " columns, expected " + std::to_string(dim));
        }
        continue;
      }
    }
    if (fields.size() != dim + 1) {
      throw ParseError(line_no, "feature dimension mismatch: found " +
                                    std::to_string(fields.size() - 1) + ", expected " +
                                    std::to_string(dim));
    }
    const auto idx = videos.find(detail::trim(fields[0]));
    if (!idx) continue;
    if (filled[*idx]) throw ParseError(line_no, "duplicate feature row for video");
    for (std::size_t c = 0; c < dim; ++c) {
      const auto v = detail::parse_double(fields[c + 1]);
      if (!v || !std::isfinite(*v)) throw ParseError(line_no, "malformed feature value");
      out(*idx, c) = *v;
    }
    filled[*idx] = true;
  }
  for (std::size_t i = 0; i < filled.size(); ++i) {
    if (!filled[i]) throw DataError("missing feature row for video '" + videos.id(i) + "'");
  }
  return out;
}

std::array<std::size_t, 3> class_histogram(const std::vector<LabeledPair>& pairs) {
  std::array<std::size_t, 3> out{};
  for (const auto& p : pairs) ++out[static_cast<std::size_t>(p.cls)];
  return out;
}

}  // namespace skiprec
