#include "fedbench/synthdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "fedbench/error.hpp"
#include "fedbench/rng.hpp"

namespace fedbench::data {

std::string split_name(Split s) {
  switch (s) {
    case Split::Train:
      return "Train";
    case Split::Test1:
      return "Test1";
    case Split::Test2:
      return "Test2";
    case Split::External:
      return "External";
  }
  return "?";
}

Split split_from_name(const std::string& name) {
  if (name == "Train") return Split::Train;
  if (name == "Test1") return Split::Test1;
  if (name == "Test2") return Split::Test2;
  if (name == "External") return Split::External;
  throw SchemaError("unknown split name: " + name);
}

void SiteSpec::validate(int d) const {
  if (d < 2) throw ConfigError("feature dimension d must be >= 2");
  if (n_train < 0 || n_test1 < 0 || n_test2 < 0 || n_external < 0) {
    throw ConfigError("site " + std::to_string(site_id) + ": negative split count");
  }
  double sum = 0.0;
  for (double p : class_probs) {
    if (p < 0.0) throw ConfigError("site " + std::to_string(site_id) + ": negative class prob");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("site " + std::to_string(site_id) + ": class_probs sum to " +
                      std::to_string(sum) + ", expected 1");
  }
  if (!feature_shift.empty() && static_cast<int>(feature_shift.size()) != d) {
    throw ConfigError("site " + std::to_string(site_id) + ": feature_shift length != d");
  }
  if (!demo_probs.empty()) {
    double dsum = 0.0;
    for (const auto& [name, p] : demo_probs) {
      if (p < 0.0) throw ConfigError("site " + std::to_string(site_id) + ": negative demo prob for " + name);
      dsum += p;
    }
    if (std::abs(dsum - 1.0) > 1e-9) {
      throw ConfigError("site " + std::to_string(site_id) + ": demo_probs sum to " +
                        std::to_string(dsum) + ", expected 1");
    }
  }
  if (age_sd < 0.0) throw ConfigError("age_sd must be >= 0");
}

int SiteSpec::count(Split s) const {
  switch (s) {
    case Split::Train:
      return n_train;
    case Split::Test1:
      return n_test1;
    case Split::Test2:
      return n_test2;
    case Split::External:
      return n_external;
  }
  return 0;
}

int SiteDataset::count(Split s) const {
  int n = 0;
  for (const auto& sample : samples) n += sample.split == s ? 1 : 0;
  return n;
}

std::vector<const Sample*> SiteDataset::split_samples(Split s) const {
  std::vector<const Sample*> out;
  for (const auto& sample : samples) {
    if (sample.split == s) out.push_back(&sample);
  }
  return out;
}

namespace {

int draw_categorical(Rng& rng, const std::vector<double>& probs) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  // u landed in the rounding slack at the top; return the last positive bin.
  for (std::size_t i = probs.size(); i > 0; --i) {
    if (probs[i - 1] > 0.0) return static_cast<int>(i - 1);
  }
  throw ConfigError("categorical distribution has no positive mass");
}

Sample draw_sample(Rng& rng, const SiteSpec& spec, int d, Split split, std::int64_t image_id) {
  Sample s;
  s.image_id = image_id;
  s.site_id = spec.site_id;
  s.split = split;

  const std::vector<double> class_probs(spec.class_probs.begin(), spec.class_probs.end());
  s.label = draw_categorical(rng, class_probs) + 1;

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  s.features.resize(d);
  for (int k = 0; k < d; ++k) {
    double mean = s.label * inv_sqrt_d;
    if (!spec.feature_shift.empty()) mean += spec.feature_shift[k];
    s.features[k] = rng.normal(mean, 1.0);
  }

  if (!spec.demo_probs.empty()) {
    std::vector<double> probs;
    probs.reserve(spec.demo_probs.size());
    for (const auto& [name, p] : spec.demo_probs) probs.push_back(p);
    s.race = spec.demo_probs[draw_categorical(rng, probs)].first;
  } else {
    s.race = "Unknown";
  }

  const double raw_age = rng.normal(spec.age_mean, spec.age_sd);
  s.age = static_cast<int>(std::lround(std::clamp(raw_age, 23.0, 90.0)));
  return s;
}

}  // namespace

Federation generate_federation(const std::vector<SiteSpec>& specs, int d) {
  if (d < 2) throw ConfigError("feature dimension d must be >= 2");
  for (const auto& spec : specs) spec.validate(d);

  Federation fed;
  fed.reserve(specs.size());
  for (const auto& spec : specs) {
    Rng rng(derive_seed(spec.seed, "site-data", {static_cast<std::uint64_t>(spec.site_id)}));
    SiteDataset ds;
    ds.spec = spec;
    ds.samples.reserve(spec.total());
    std::int64_t next_id = static_cast<std::int64_t>(spec.site_id) * 1000000;
    for (Split split : {Split::Train, Split::Test1, Split::Test2, Split::External}) {
      for (int i = 0; i < spec.count(split); ++i) {
        ds.samples.push_back(draw_sample(rng, spec, d, split, next_id++));
      }
    }
    fed.push_back(std::move(ds));
  }
  return fed;
}

std::array<double, 4> empirical_label_dist(const SiteDataset& ds, Split split) {
  std::array<double, 4> counts{};
  int n = 0;
  for (const auto& s : ds.samples) {
    if (s.split != split) continue;
    counts[s.label - 1] += 1.0;
    ++n;
  }
  if (n == 0) {
    throw EmptySplitError("site " + std::to_string(ds.spec.site_id) + ": split " +
                          split_name(split) + " is empty");
  }
  for (double& c : counts) c /= n;
  return counts;
}

SiteDataset pooled_dataset(const Federation& sites, std::optional<Split> split) {
  if (sites.empty()) throw DataError("pooled_dataset: no sites");

  std::vector<const SiteDataset*> ordered;
  for (const auto& s : sites) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const SiteDataset* a, const SiteDataset* b) { return a->spec.site_id < b->spec.site_id; });

  if (sites.size() == 1 && !split.has_value()) return sites.front();

  SiteDataset out;
  std::int64_t total_weight = 0;
  std::array<double, 4> probs{};
  for (const SiteDataset* site : ordered) {
    for (const auto& sample : site->samples) {
      if (!split.has_value() || sample.split == *split) out.samples.push_back(sample);
    }
    const std::int64_t w = site->spec.total();
    total_weight += w;
    for (int c = 0; c < 4; ++c) probs[c] += w * site->spec.class_probs[c];
  }

  out.spec = ordered.front()->spec;
  if (sites.size() > 1) {
    out.spec.site_id = 0;
    if (total_weight > 0) {
      for (double& p : probs) p /= static_cast<double>(total_weight);
      out.spec.class_probs = probs;
    }
    out.spec.feature_shift.clear();
    out.spec.demo_probs.clear();
  }
  out.spec.n_train = out.count(Split::Train);
  out.spec.n_test1 = out.count(Split::Test1);
  out.spec.n_test2 = out.count(Split::Test2);
  out.spec.n_external = out.count(Split::External);
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoError("failed to format double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw SchemaError("bad numeric field: " + std::string(s));
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw IoError("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void save_federation_csv(const Federation& fed, const std::string& path) {
  const int d = feature_dim(fed);
  std::string out = "image_id,site_id,split,label,race,age";
  for (int k = 0; k < d; ++k) out += ",f" + std::to_string(k);
  out += "\n";

  std::vector<const SiteDataset*> ordered;
  for (const auto& s : fed) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const SiteDataset* a, const SiteDataset* b) { return a->spec.site_id < b->spec.site_id; });

  for (const SiteDataset* site : ordered) {
    for (const auto& s : site->samples) {
      out += std::to_string(s.image_id);
      out += ',';
      out += std::to_string(s.site_id);
      out += ',';
      out += split_name(s.split);
      out += ',';
      out += std::to_string(s.label);
      out += ',';
      out += s.race;
      out += ',';
      out += std::to_string(s.age);
      for (double f : s.features) {
        out += ',';
        out += format_double(f);
      }
      out += '\n';
    }
  }
  atomic_write(path, out);
}

Federation load_federation_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path);

  std::string header;
  if (!std::getline(in, header)) throw SchemaError("empty dataset file: " + path);
  const auto cols = split_csv_line(header);
  const std::vector<std::string> fixed = {"image_id", "site_id", "split", "label", "race", "age"};
  if (cols.size() < fixed.size() + 1) throw SchemaError("dataset header too short");
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (cols[i] != fixed[i]) throw SchemaError("dataset header column " + std::to_string(i) +
                                               " is '" + cols[i] + "', expected '" + fixed[i] + "'");
  }
  const int d = static_cast<int>(cols.size() - fixed.size());
  for (int k = 0; k < d; ++k) {
    if (cols[fixed.size() + k] != "f" + std::to_string(k)) {
      throw SchemaError("dataset header feature columns must be f0..f" + std::to_string(d - 1));
    }
  }

  std::map<int, SiteDataset> sites;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != cols.size()) {
      throw SchemaError("dataset row has " + std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(cols.size()));
    }
    Sample s;
    s.image_id = static_cast<std::int64_t>(parse_double(fields[0]));
    s.site_id = static_cast<int>(parse_double(fields[1]));
    s.split = split_from_name(fields[2]);
    s.label = static_cast<int>(parse_double(fields[3]));
    if (s.label < 1 || s.label > 4) throw SchemaError("label out of range 1..4");
    s.race = fields[4];
    s.age = static_cast<int>(parse_double(fields[5]));
    s.features.resize(d);
    for (int k = 0; k < d; ++k) s.features[k] = parse_double(fields[6 + k]);
    sites[s.site_id].samples.push_back(std::move(s));
  }
  if (sites.empty()) throw SchemaError("dataset has no rows: " + path);

  Federation fed;
  for (auto& [site_id, ds] : sites) {
    ds.spec.site_id = site_id;
    ds.spec.n_train = ds.count(Split::Train);
    ds.spec.n_test1 = ds.count(Split::Test1);
    ds.spec.n_test2 = ds.count(Split::Test2);
    ds.spec.n_external = ds.count(Split::External);
    fed.push_back(std::move(ds));
  }
  return fed;
}

nlohmann::json federation_to_json(const Federation& fed) {
  nlohmann::json sites = nlohmann::json::array();
  std::vector<const SiteDataset*> ordered;
  for (const auto& s : fed) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const SiteDataset* a, const SiteDataset* b) { return a->spec.site_id < b->spec.site_id; });
  for (const SiteDataset* site : ordered) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : site->samples) {
      samples.push_back({{"image_id", s.image_id},
                         {"features", s.features},
                         {"label", s.label},
                         {"split", split_name(s.split)},
                         {"race", s.race},
                         {"age", s.age}});
    }
    sites.push_back({{"site_id", site->spec.site_id}, {"samples", std::move(samples)}});
  }
  return {{"sites", std::move(sites)}};
}

Federation federation_from_json(const nlohmann::json& j) {
  if (!j.contains("sites") || !j["sites"].is_array()) throw SchemaError("federation JSON: missing sites array");
  Federation fed;
  for (const auto& sj : j["sites"]) {
    SiteDataset ds;
    ds.spec.site_id = sj.at("site_id").get<int>();
    for (const auto& samp : sj.at("samples")) {
      Sample s;
      s.image_id = samp.at("image_id").get<std::int64_t>();
      s.features = samp.at("features").get<std::vector<double>>();
      s.label = samp.at("label").get<int>();
      s.site_id = ds.spec.site_id;
      s.split = split_from_name(samp.at("split").get<std::string>());
      s.race = samp.at("race").get<std::string>();
      s.age = samp.at("age").get<int>();
      ds.samples.push_back(std::move(s));
    }
    ds.spec.n_train = ds.count(Split::Train);
    ds.spec.n_test1 = ds.count(Split::Test1);
    ds.spec.n_test2 = ds.count(Split::Test2);
    ds.spec.n_external = ds.count(Split::External);
    fed.push_back(std::move(ds));
  }
  return fed;
}

void save_federation_json(const Federation& fed, const std::string& path) {
  atomic_write(path, federation_to_json(fed).dump(2) + "\n");
}

Federation load_federation_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path);
  nlohmann::json j;
  in >> j;
  return federation_from_json(j);
}

int feature_dim(const Federation& fed) {
  for (const auto& site : fed) {
    if (!site.samples.empty()) return static_cast<int>(site.samples.front().features.size());
  }
  throw DataError("federation has no samples");
}

const SiteDataset* find_site(const Federation& fed, int site_id) {
  for (const auto& site : fed) {
    if (site.spec.site_id == site_id) return &site;
  }
  return nullptr;
}

}  // namespace fedbench::data
