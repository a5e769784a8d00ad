#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fedbench::data {

enum class Split { Train, Test1, Test2, External };

std::string split_name(Split s);
Split split_from_name(const std::string& name);

struct SiteSpec {
  int site_id = 0;
  // Samples are generated per split in this order: Train, Test1, Test2, External.
  int n_train = 0;
  int n_test1 = 0;
  int n_test2 = 0;
  int n_external = 0;
  std::array<double, 4> class_probs{0.25, 0.25, 0.25, 0.25};
  std::vector<double> feature_shift;  // length d; empty means zero shift
  std::vector<std::pair<std::string, double>> demo_probs;
  double age_mean = 54.3;
  double age_sd = 10.3;
  std::uint64_t seed = 0;

  void validate(int d) const;  // throws ConfigError
  int count(Split s) const;
  int total() const { return n_train + n_test1 + n_test2 + n_external; }
};

struct Sample {
  std::int64_t image_id = 0;
  std::vector<double> features;
  int label = 1;  // ordinal, 1..4
  int site_id = 0;
  Split split = Split::Train;
  std::string race;
  int age = 0;
};

struct SiteDataset {
  SiteSpec spec;
  std::vector<Sample> samples;

  int count(Split s) const;
  std::vector<const Sample*> split_samples(Split s) const;
};

using Federation = std::vector<SiteDataset>;

// Class-conditional Gaussians: mean(label c) = c * u + site shift, with u the
// fixed unit diagonal direction and isotropic unit covariance. Deterministic
// in (specs, d).
Federation generate_federation(const std::vector<SiteSpec>& specs, int d);

// Per-class proportions over one split; throws EmptySplitError on empty split.
std::array<double, 4> empirical_label_dist(const SiteDataset& ds, Split split);

// Concatenates sites in site_id order. With a split given, keeps only that
// split's samples; with nullopt, keeps everything.
SiteDataset pooled_dataset(const Federation& sites, std::optional<Split> split);

// CSV: image_id,site_id,split,label,race,age,f0..f{d-1}
void save_federation_csv(const Federation& fed, const std::string& path);
Federation load_federation_csv(const std::string& path);

nlohmann::json federation_to_json(const Federation& fed);
Federation federation_from_json(const nlohmann::json& j);
void save_federation_json(const Federation& fed, const std::string& path);
Federation load_federation_json(const std::string& path);

int feature_dim(const Federation& fed);
const SiteDataset* find_site(const Federation& fed, int site_id);

}  // namespace fedbench::data
