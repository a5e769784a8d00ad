#include "fedbench/param_vector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "fedbench/error.hpp"
#include "fedbench/rng.hpp"

namespace fedbench {

ParamVector::ParamVector(std::vector<Segment> segments) : segments_(std::move(segments)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& seg : segments_) {
    if (!seen.insert(seg.name).second) {
      throw ShapeError("duplicate segment name: " + seg.name);
    }
    total_len_ += seg.values.size();
  }
}

ParamVector ParamVector::zeros_like(const ParamVector& other) {
  ParamVector out = other;
  out.fill(0.0);
  return out;
}

std::size_t ParamVector::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].name == name) return i;
  }
  throw ShapeError("no such segment: " + std::string(name));
}

bool ParamVector::has_segment(std::string_view name) const {
  return std::any_of(segments_.begin(), segments_.end(),
                     [&](const Segment& s) { return s.name == name; });
}

const std::vector<double>& ParamVector::values(std::string_view name) const {
  return segments_[index_of(name)].values;
}

std::vector<double>& ParamVector::values(std::string_view name) {
  return segments_[index_of(name)].values;
}

bool ParamVector::same_layout(const ParamVector& other) const {
  if (segments_.size() != other.segments_.size()) return false;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].name != other.segments_[i].name ||
        segments_[i].values.size() != other.segments_[i].values.size()) {
      return false;
    }
  }
  return true;
}

void ParamVector::require_same_layout(const ParamVector& other, std::string_view what) const {
  if (!same_layout(other)) {
    throw ShapeError("parameter layout mismatch in " + std::string(what));
  }
}

std::uint64_t ParamVector::layout_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ULL;
  };
  for (const auto& seg : segments_) {
    mix(fnv1a64(seg.name));
    mix(seg.values.size());
  }
  return h;
}

bool ParamVector::all_finite() const {
  for (const auto& seg : segments_) {
    for (double v : seg.values) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void ParamVector::add_scaled(const ParamVector& other, double alpha) {
  require_same_layout(other, "add_scaled");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    auto& dst = segments_[i].values;
    const auto& src = other.segments_[i].values;
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += alpha * src[k];
  }
}

void ParamVector::scale(double alpha) {
  for (auto& seg : segments_) {
    for (double& v : seg.values) v *= alpha;
  }
}

void ParamVector::fill(double value) {
  for (auto& seg : segments_) {
    std::fill(seg.values.begin(), seg.values.end(), value);
  }
}

std::vector<double> ParamVector::to_flat() const {
  std::vector<double> flat;
  flat.reserve(total_len_);
  for (const auto& seg : segments_) {
    flat.insert(flat.end(), seg.values.begin(), seg.values.end());
  }
  return flat;
}

void ParamVector::assign_flat(std::span<const double> flat) {
  if (flat.size() != total_len_) {
    throw ShapeError("flat length " + std::to_string(flat.size()) + " != total_len " +
                     std::to_string(total_len_));
  }
  std::size_t offset = 0;
  for (auto& seg : segments_) {
    std::copy(flat.begin() + offset, flat.begin() + offset + seg.values.size(),
              seg.values.begin());
    offset += seg.values.size();
  }
}

ParamVector ParamVector::restricted_to(const std::vector<std::string>& names) const {
  std::vector<Segment> kept;
  for (const auto& seg : segments_) {
    if (std::find(names.begin(), names.end(), seg.name) != names.end()) {
      kept.push_back(seg);
    }
  }
  return ParamVector(std::move(kept));
}

void ParamVector::overwrite_segments(const ParamVector& src, const std::vector<std::string>& names) {
  for (const auto& name : names) {
    auto& dst = values(name);
    const auto& s = src.values(name);
    if (dst.size() != s.size()) {
      throw ShapeError("segment size mismatch for " + name);
    }
    dst = s;
  }
}

double ParamVector::squared_distance(const ParamVector& other) const {
  require_same_layout(other, "squared_distance");
  double acc = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& a = segments_[i].values;
    const auto& b = other.segments_[i].values;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double d = a[k] - b[k];
      acc += d * d;
    }
  }
  return acc;
}

bool ParamVector::operator==(const ParamVector& other) const {
  if (!same_layout(other)) return false;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].values != other.segments_[i].values) return false;
  }
  return true;
}

nlohmann::json ParamVector::to_checkpoint_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& seg : segments_) {
    j[seg.name] = seg.values;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(layout_hash()));
  j["layout_hash"] = buf;
  return j;
}

ParamVector ParamVector::from_checkpoint_json(const nlohmann::json& j,
                                              const ParamVector& expected_layout) {
  if (!j.is_object()) throw CheckpointError("checkpoint is not a JSON object");
  ParamVector out = ParamVector::zeros_like(expected_layout);
  for (auto& seg : out.segments_) {
    auto it = j.find(seg.name);
    if (it == j.end() || !it->is_array() || it->size() != seg.values.size()) {
      throw CheckpointError("checkpoint segment missing or wrong size: " + seg.name);
    }
    seg.values = it->get<std::vector<double>>();
  }
  if (j.contains("layout_hash")) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(out.layout_hash()));
    if (j["layout_hash"].get<std::string>() != buf) {
      throw CheckpointError("checkpoint layout_hash does not match expected layout");
    }
  }
  return out;
}

ParamVector operator-(const ParamVector& a, const ParamVector& b) {
  ParamVector out = a;
  out.add_scaled(b, -1.0);
  return out;
}

ParamVector operator+(const ParamVector& a, const ParamVector& b) {
  ParamVector out = a;
  out.add_scaled(b, 1.0);
  return out;
}

}  // namespace fedbench
