#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fedbench {

// Flat model parameters split into named segments. The segment layout
// (names, order, lengths) is the unit of compatibility: all arithmetic and
// aggregation requires identical layouts.
class ParamVector {
 public:
  struct Segment {
    std::string name;
    std::vector<double> values;
  };

  ParamVector() = default;
  explicit ParamVector(std::vector<Segment> segments);

  static ParamVector zeros_like(const ParamVector& other);

  std::size_t total_len() const { return total_len_; }
  std::size_t n_segments() const { return segments_.size(); }
  const std::vector<Segment>& segments() const { return segments_; }

  bool has_segment(std::string_view name) const;
  const std::vector<double>& values(std::string_view name) const;
  std::vector<double>& values(std::string_view name);

  bool same_layout(const ParamVector& other) const;
  void require_same_layout(const ParamVector& other, std::string_view what) const;
  std::uint64_t layout_hash() const;

  bool all_finite() const;

  // this += alpha * other
  void add_scaled(const ParamVector& other, double alpha);
  void scale(double alpha);
  void fill(double value);

  // Segments in layout order, concatenated.
  std::vector<double> to_flat() const;
  void assign_flat(std::span<const double> flat);

  // Keeps only the named segments (order preserved).
  ParamVector restricted_to(const std::vector<std::string>& names) const;
  // Overwrites the named segments from `src` (layouts of those segments must match).
  void overwrite_segments(const ParamVector& src, const std::vector<std::string>& names);

  double squared_distance(const ParamVector& other) const;

  bool operator==(const ParamVector& other) const;

  // Checkpoint format: {"<segment>": [numbers...], ..., "layout_hash": "<hex>"}.
  nlohmann::json to_checkpoint_json() const;
  // JSON objects do not preserve order, so loading needs the expected layout.
  static ParamVector from_checkpoint_json(const nlohmann::json& j, const ParamVector& expected_layout);

 private:
  std::size_t index_of(std::string_view name) const;
  std::vector<Segment> segments_;
  std::size_t total_len_ = 0;
};

ParamVector operator-(const ParamVector& a, const ParamVector& b);
ParamVector operator+(const ParamVector& a, const ParamVector& b);

}  // namespace fedbench
