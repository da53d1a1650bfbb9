#include "ermfdr/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "ermfdr/errors.hpp"

namespace ermfdr {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    while (!tok.empty() && (tok.back() == '\r' || tok.back() == ' ')) tok.pop_back();
    std::size_t begin = 0;
    while (begin < tok.size() && tok[begin] == ' ') ++begin;
    out.push_back(tok.substr(begin));
  }
  return out;
}

double parse_double(const std::string& tok, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error("cannot parse number '" + tok + "' in " + where);
  }
}

}  // namespace

DiscreteModelSpace load_space_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": empty file");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header.back() != "risk") {
    throw Error(path + ": last header column must be 'risk'");
  }
  const bool has_weight = header.size() >= 2 && header[header.size() - 2] == "weight";
  const int dim = static_cast<int>(header.size()) - 1 - (has_weight ? 1 : 0);
  if (dim < 1) throw Error(path + ": expected at least one theta column");
  for (int d = 0; d < dim; ++d) {
    const std::string expected = "theta_" + std::to_string(d + 1);
    if (header[d] != expected) {
      throw Error(path + ": unexpected column '" + header[d] + "', want '" +
                  expected + "'");
    }
  }

  DiscreteModelSpace space;
  space.dim = dim;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(path + ": row " + std::to_string(row) + " has " +
                  std::to_string(cells.size()) + " cells, want " +
                  std::to_string(header.size()));
    }
    const std::string where = path + ":" + std::to_string(row);
    for (int d = 0; d < dim; ++d) {
      space.atoms.push_back(parse_double(cells[d], where));
    }
    if (has_weight) space.weights.push_back(parse_double(cells[dim], where));
    space.risks.push_back(parse_double(cells.back(), where));
  }
  if (!has_weight) {
    space.weights.assign(space.risks.size(),
                         1.0 / static_cast<double>(space.risks.size()));
  }
  space.validate();
  return space;
}

DiscreteModelSpace load_space_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw Error(path + ": invalid JSON: " + e.what());
  }
  if (!doc.contains("risks")) throw Error(path + ": missing 'risks'");

  DiscreteModelSpace space;
  space.risks = doc["risks"].get<std::vector<double>>();
  if (doc.contains("weights")) {
    space.weights = doc["weights"].get<std::vector<double>>();
  } else {
    space.weights.assign(space.risks.size(),
                         1.0 / static_cast<double>(space.risks.size()));
  }
  if (doc.contains("atoms")) {
    const auto& atoms = doc["atoms"];
    if (!atoms.empty()) {
      space.dim = static_cast<int>(atoms.front().size());
      for (const auto& atom : atoms) {
        for (const auto& coord : atom) {
          space.atoms.push_back(coord.get<double>());
        }
      }
    }
  }
  space.validate();
  return space;
}

DiscreteModelSpace load_space(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".json") return load_space_json(path);
  if (ext == ".csv") return load_space_csv(path);
  throw Error("unsupported space file extension: " + path);
}

}  // namespace ermfdr
