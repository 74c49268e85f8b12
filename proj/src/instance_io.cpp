#include "cfm/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cfm/error.hpp"

namespace cfm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::parse_error, msg); }

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + " must be a number");
  return v.get<double>();
}

std::vector<double> number_array(const json& v, const std::string& where, std::size_t expected) {
  if (!v.is_array()) fail(where + " must be an array");
  if (v.size() != expected) {
    fail(where + " has " + std::to_string(v.size()) + " entries, expected " +
         std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(number(v[k], where + " entry " + std::to_string(k + 1)));
  }
  return out;
}

std::size_t count(const json& v, const char* key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(std::string("\"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

MarketInstance instance_from_json(std::string_view text) {
  const json doc = parse(text);
  if (!doc.is_object()) fail("instance document must be a JSON object");
  const std::size_t n = count(field(doc, "n"), "n");
  const std::size_t m = count(field(doc, "m"), "m");

  const json& u = field(doc, "utilities");
  if (!u.is_array() || u.size() != n) {
    fail("\"utilities\" must be an array of " + std::to_string(n) + " rows");
  }
  Matrix utilities(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = number_array(u[i], "utilities row " + std::to_string(i + 1), m);
    std::copy(row.begin(), row.end(), utilities.row(i).begin());
  }
  auto budgets = number_array(field(doc, "budgets"), "\"budgets\"", n);
  auto capacities = number_array(field(doc, "capacities"), "\"capacities\"", m);

  std::vector<TypeSet> types;
  if (auto it = doc.find("types"); it != doc.end()) {
    if (!it->is_array()) fail("\"types\" must be an array of index arrays");
    for (std::size_t t = 0; t < it->size(); ++t) {
      const json& set = (*it)[t];
      if (!set.is_array()) fail("type " + std::to_string(t + 1) + " must be an array");
      TypeSet goods;
      for (const json& g : set) {
        if (!g.is_number_integer() || g.get<long long>() < 0) {
          fail("type " + std::to_string(t + 1) + " entries must be non-negative integers");
        }
        goods.push_back(g.get<std::size_t>());
      }
      types.push_back(std::move(goods));
    }
  }

  std::vector<std::vector<bool>> participation;
  if (auto it = doc.find("participation"); it != doc.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != n) {
      fail("\"participation\" must have " + std::to_string(n) + " rows");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const json& row = (*it)[i];
      if (!row.is_array() || row.size() != types.size()) {
        fail("participation row " + std::to_string(i + 1) + " must have " +
             std::to_string(types.size()) + " entries");
      }
      std::vector<bool> flags;
      for (const json& f : row) {
        if (!f.is_boolean()) fail("participation row " + std::to_string(i + 1) + " must hold booleans");
        flags.push_back(f.get<bool>());
      }
      participation.push_back(std::move(flags));
    }
  }
  try {
    return MarketInstance(std::move(utilities), std::move(budgets), std::move(capacities),
                          std::move(types), std::move(participation));
  } catch (const Error& e) {
    fail(e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MarketInstance load_instance(const std::string& path) {
  return instance_from_json(read_text_file(path));
}

std::string instance_to_json(const MarketInstance& inst) {
  json doc;
  doc["n"] = inst.n_agents();
  doc["m"] = inst.n_goods();
  doc["utilities"] = inst.utilities().to_rows();
  doc["budgets"] = inst.budgets();
  doc["capacities"] = inst.capacities();
  doc["types"] = inst.types();
  bool all = true;
  for (const auto& row : inst.participation()) {
    for (bool f : row) all = all && f;
  }
  if (!all) doc["participation"] = inst.participation();
  return doc.dump(2) + "\n";
}

PriceVector prices_from_json(std::string_view text) {
  json doc = parse(text);
  if (doc.is_object() && doc.contains("prices")) doc = doc["prices"];
  if (!doc.is_array()) fail("prices must be a JSON array (or an object with \"prices\")");
  PriceVector p;
  for (std::size_t k = 0; k < doc.size(); ++k) p.push_back(number(doc[k], "price " + std::to_string(k + 1)));
  return p;
}

Allocation allocation_from_json(std::string_view text) {
  json doc = parse(text);
  if (doc.is_object() && doc.contains("allocation")) doc = doc["allocation"];
  if (!doc.is_array()) fail("allocation must be a JSON array of rows (or an object with \"allocation\")");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_array()) fail("allocation row " + std::to_string(i + 1) + " must be an array");
    rows.push_back(number_array(doc[i], "allocation row " + std::to_string(i + 1), doc[i].size()));
  }
  try {
    return Matrix::from_rows(rows);
  } catch (const Error& e) {
    fail(std::string("allocation: ") + e.what());
  }
}

}  // namespace cfm
