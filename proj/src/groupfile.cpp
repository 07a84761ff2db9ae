#include "carnot/groupfile.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace carnot {

namespace {

using nlohmann::json;

std::vector<Mat> parse_matrices(const json& arr, const std::string& what) {
  if (!arr.is_array() || arr.empty())
    throw ConfigError("group file: '" + what + "' must be a non-empty array of matrices");
  std::vector<Mat> out;
  for (const auto& mj : arr) {
    if (!mj.is_array() || mj.empty())
      throw ConfigError("group file: each " + what + " entry must be a matrix");
    const int rows = static_cast<int>(mj.size());
    Mat m(rows, rows);
    for (int r = 0; r < rows; ++r) {
      const auto& row = mj[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != rows)
        throw ConfigError("group file: matrices must be square");
      for (int c = 0; c < rows; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    out.push_back(std::move(m));
  }
  return out;
}

json matrices_to_json(const std::vector<Mat>& mats) {
  json arr = json::array();
  for (const auto& m : mats) {
    json mj = json::array();
    for (int r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      mj.push_back(row);
    }
    arr.push_back(mj);
  }
  return arr;
}

}  // namespace

GroupSpec parse_group_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("group file: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("group file: top level must be an object");

  static const std::set<std::string> known = {"name", "type", "n", "J", "b"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("group file: unknown key '" + it.key() + "'");
  if (!j.contains("type")) throw ConfigError("group file: missing 'type'");
  const std::string type = j["type"].get<std::string>();
  const std::string name = j.value("name", type);

  try {
    if (type == "heisenberg") {
      if (!j.contains("n")) throw ConfigError("group file: heisenberg needs 'n'");
      GroupSpec spec = make_heisenberg(j["n"].get<int>());
      spec.name = name;
      return spec;
    }
    if (type == "euclidean") {
      if (!j.contains("n")) throw ConfigError("group file: euclidean needs 'n'");
      GroupSpec spec = make_euclidean(j["n"].get<int>());
      spec.name = name;
      return spec;
    }
    if (type == "htype") {
      if (!j.contains("J")) throw ConfigError("group file: htype needs 'J'");
      return make_htype(name, parse_matrices(j["J"], "J"));
    }
    if (type == "step_two") {
      if (!j.contains("b")) throw ConfigError("group file: step_two needs 'b'");
      return make_step_two(name, parse_matrices(j["b"], "b"));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("group file: ") + e.what());
  }
  throw ConfigError("group file: unknown type '" + type + "'");
}

GroupSpec load_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open group file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_group_json(ss.str());
}

std::string group_to_json(const GroupSpec& spec) {
  json j;
  j["name"] = spec.name;
  switch (spec.kind) {
    case GroupKind::Heisenberg:
      j["type"] = "heisenberg";
      j["n"] = spec.heis_n;
      break;
    case GroupKind::Euclidean:
      j["type"] = "euclidean";
      j["n"] = spec.dim();
      break;
    case GroupKind::HType:
      j["type"] = "htype";
      j["J"] = matrices_to_json(spec.jmaps);
      break;
    case GroupKind::StepTwoGeneric:
      j["type"] = "step_two";
      j["b"] = matrices_to_json(spec.bracket);
      break;
  }
  return j.dump(2) + "\n";
}

void save_group_file(const GroupSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write group file '" + path + "'");
  out << group_to_json(spec);
}

GroupSpec resolve_group(const std::string& name_or_path) {
  try {
    return builtin_group(name_or_path);
  } catch (const InvalidArgument&) {
    return load_group_file(name_or_path);
  }
}

}  // namespace carnot
