#include "switchlab/causal/manifest.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace switchlab::causal {

using ordered_json = nlohmann::ordered_json;

const CausalStructure& StructureManifest::by_id(int id) const {
  if (id < 0 || id >= total()) {
    throw std::out_of_range("structure id " + std::to_string(id) + " out of range");
  }
  if (id < static_cast<int>(train.size())) return train[id];
  return test[id - train.size()];
}

void save_manifest(const std::filesystem::path& path, const StructureManifest& manifest) {
  ordered_json doc;
  doc["version"] = 1;
  doc["n"] = manifest.n;
  doc["family"] = family_name(manifest.family);
  doc["structures"] = ordered_json::array();
  int id = 0;
  auto emit = [&](const CausalStructure& s, const char* split) {
    ordered_json item;
    item["id"] = id++;
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < s.n; ++i) {
      ordered_json row = ordered_json::array();
      for (int j = 0; j < s.n; ++j) row.push_back(s.edge(i, j) ? 1 : 0);
      rows.push_back(std::move(row));
    }
    item["adjacency"] = std::move(rows);
    if (s.master >= 0) {
      item["master"] = s.master;
    } else {
      item["master"] = nullptr;
    }
    item["split"] = split;
    doc["structures"].push_back(std::move(item));
  };
  for (const auto& s : manifest.train) emit(s, "train");
  for (const auto& s : manifest.test) emit(s, "test");

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << doc.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

StructureManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open manifest " + path.string());
  ordered_json doc;
  try {
    f >> doc;
  } catch (const std::exception& e) {
    throw std::runtime_error("manifest " + path.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.contains("version") || doc["version"] != 1) {
    throw std::runtime_error("manifest " + path.string() + ": unsupported or missing version");
  }
  StructureManifest m;
  m.n = doc.at("n").get<int>();
  m.family = family_from_name(doc.at("family").get<std::string>());

  int expected_id = 0;
  std::set<std::pair<std::vector<uint8_t>, int>> seen;
  for (const auto& item : doc.at("structures")) {
    if (item.at("id").get<int>() != expected_id) {
      throw std::runtime_error("manifest " + path.string() + ": ids must be dense from 0");
    }
    ++expected_id;
    CausalStructure s;
    s.n = m.n;
    s.family = m.family;
    s.master = item.at("master").is_null() ? -1 : item.at("master").get<int>();
    const auto& rows = item.at("adjacency");
    if (static_cast<int>(rows.size()) != m.n) {
      throw std::runtime_error("manifest " + path.string() + ": adjacency must have n rows");
    }
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != m.n) {
        throw std::runtime_error("manifest " + path.string() + ": adjacency rows must have n entries");
      }
      for (const auto& v : row) s.adj.push_back(static_cast<uint8_t>(v.get<int>()));
    }
    s.validate();
    if (!seen.insert({s.adj, s.master}).second) {
      throw std::runtime_error("manifest " + path.string() +
                               ": duplicate structure (train/test sets must be disjoint)");
    }
    std::string split = item.at("split").get<std::string>();
    if (split == "train") {
      if (!m.test.empty()) {
        throw std::runtime_error("manifest " + path.string() +
                                 ": train entries must precede test entries");
      }
      m.train.push_back(std::move(s));
    } else if (split == "test") {
      m.test.push_back(std::move(s));
    } else {
      throw std::runtime_error("manifest " + path.string() + ": split must be train|test");
    }
  }
  return m;
}

}  // namespace switchlab::causal
