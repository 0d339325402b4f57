#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "skiprec/matrix.hpp"

namespace skiprec {

/// One raw viewing event.
struct Interaction {
  std::string user_id;
  std::string video_id;
  double playing_time = 0.0;  // seconds
  double duration = 0.0;      // seconds
  std::int64_t timestamp = 0;  // epoch ms, carried but unused

  bool operator==(const Interaction&) const = default;
};

enum class InteractionClass : std::uint8_t { HighlyPositive, LessPositive, Negative };

std::string_view class_code(InteractionClass cls) noexcept;  // "H", "L", "N"
InteractionClass parse_class_code(std::string_view code);

inline constexpr double kDefaultSkipThreshold = 5.0;

/// A deduplicated (user, video) pair with its interaction level.
struct LabeledPair {
  std::uint32_t user = 0;
  std::uint32_t video = 0;
  InteractionClass cls = InteractionClass::Negative;

  /// Binary supervision label: 1 only for fully viewed.
  int label() const noexcept { return cls == InteractionClass::HighlyPositive ? 1 : 0; }
  bool operator==(const LabeledPair&) const = default;
};

struct UserInteractionProfile {
  std::size_t n_highly = 0;
  std::size_t n_less = 0;
  std::size_t n_negative = 0;
  bool operator==(const UserInteractionProfile&) const = default;
};

/// Bijection between opaque external ids and dense indices, in
/// first-appearance order.
class IdMap {
 public:
  std::uint32_t add(const std::string& id);
  std::optional<std::uint32_t> find(std::string_view id) const;
  std::uint32_t at(std::string_view id) const;  // throws DataError when unknown
  const std::string& id(std::uint32_t index) const { return ids_.at(index); }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct IdMaps {
  IdMap users;
  IdMap videos;
};

struct DatasetSplit {
  std::vector<LabeledPair> train;
  std::vector<LabeledPair> validation;
  std::vector<LabeledPair> test;
  std::uint64_t seed = 0;
};

struct SplitRatios {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
};

/// Reads the interactions CSV (header user_id,video_id,playing_time,duration,timestamp).
/// Throws ParseError carrying the offending line number.
std::vector<Interaction> parse_interactions(std::istream& in);

InteractionClass classify(const Interaction& interaction, double threshold = kDefaultSkipThreshold);

IdMaps build_id_maps(const std::vector<Interaction>& interactions);

/// One pair per distinct (user, video), sorted by (user, video). Repeated
/// pairs are highly positive whatever their individual events look like.
std::vector<LabeledPair> deduplicate_and_label(const std::vector<Interaction>& interactions,
                                               const IdMaps& ids,
                                               double threshold = kDefaultSkipThreshold);

std::vector<UserInteractionProfile> user_profiles(const std::vector<LabeledPair>& pairs,
                                                  std::size_t n_users);

/// Per-user shuffle then slice: n_train = floor(0.6 n), n_val = floor(0.2 n),
/// the remainder goes to test; a user with a single pair keeps it in train.
/// Each user draws from its own seeded stream.
DatasetSplit split_per_user(const std::vector<LabeledPair>& pairs, SplitRatios ratios,
                            std::uint64_t seed);

/// Reads `video_id,f0,...,f{d-1}` rows into a |V| x d table ordered by dense
/// video index. Rows for unknown videos are ignored; a missing video or a
/// row of the wrong width is an error.
Matrix load_features(std::istream& in, const IdMap& videos, std::size_t dim);

std::array<std::size_t, 3> class_histogram(const std::vector<LabeledPair>& pairs);

}  // namespace skiprec
