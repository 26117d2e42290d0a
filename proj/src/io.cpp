#include "matquad/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "matquad/errors.hpp"

namespace matquad {

namespace {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Eigen::MatrixXd parse_matrix(const json& node, int p, const std::string& what) {
  if (!node.is_array() || static_cast<int>(node.size()) != p) {
    throw InvalidInput(what + ": expected " + std::to_string(p) + " rows");
  }
  Eigen::MatrixXd out(p, p);
  for (int r = 0; r < p; ++r) {
    const json& row = node[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != p) {
      throw InvalidInput(what + ": expected " + std::to_string(p) + " columns in row " +
                         std::to_string(r));
    }
    for (int c = 0; c < p; ++c) {
      const json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) {
        throw InvalidInput(what + ": non-numeric entry");
      }
      out(r, c) = cell.get<double>();
    }
  }
  return out;
}

json parse_document(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("invalid JSON document: ") + e.what());
  }
}

std::vector<Eigen::MatrixXd> parse_moment_list(const json& doc) {
  if (!doc.is_object() || !doc.contains("p") || !doc.contains("moments")) {
    throw InvalidInput("moment document: required fields are \"p\" and \"moments\"");
  }
  if (!doc["p"].is_number_integer()) {
    throw InvalidInput("moment document: \"p\" must be an integer");
  }
  const int p = doc["p"].get<int>();
  if (p < 1) {
    throw InvalidInput("moment document: \"p\" must be positive");
  }
  const json& list = doc["moments"];
  if (!list.is_array() || list.empty()) {
    throw InvalidInput("moment document: \"moments\" must be a non-empty array");
  }
  std::vector<Eigen::MatrixXd> moments;
  moments.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    moments.push_back(parse_matrix(list[i], p, "moment " + std::to_string(i)));
  }
  return moments;
}

void append_matrix(std::string& out, const Eigen::MatrixXd& m) {
  out += "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r > 0) {
      out += ",";
    }
    out += "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) {
        out += ",";
      }
      out += format_number(m(r, c));
    }
    out += "]";
  }
  out += "]";
}

}  // namespace

MomentSequence read_moment_sequence(std::istream& in) {
  const json doc = parse_document(in);
  if (doc.is_object() && doc.contains("min_index") && doc["min_index"].get<int>() < 0) {
    throw InvalidInput("moment document carries a negative \"min_index\"; use the strong reader");
  }
  return MomentSequence(parse_moment_list(doc));
}

MomentSequence read_moment_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open input file: " + path);
  }
  return read_moment_sequence(in);
}

StrongSequence read_strong_sequence(std::istream& in) {
  const json doc = parse_document(in);
  int min_index = 0;
  if (doc.is_object() && doc.contains("min_index")) {
    if (!doc["min_index"].is_number_integer()) {
      throw InvalidInput("moment document: \"min_index\" must be an integer");
    }
    min_index = doc["min_index"].get<int>();
  }
  if (min_index > 0 || min_index % 2 != 0) {
    throw InvalidInput("moment document: \"min_index\" must be an even nonpositive integer");
  }
  std::vector<Eigen::MatrixXd> moments = parse_moment_list(doc);
  const int n1 = -min_index / 2;
  const int span = static_cast<int>(moments.size()) - 1;  // = 2n1 + 2n2
  const int twice_n2 = span - 2 * n1;
  if (twice_n2 < 2 || twice_n2 % 2 != 0) {
    throw InvalidInput("moment document: length inconsistent with \"min_index\"");
  }
  return StrongSequence(n1, twice_n2 / 2, std::move(moments));
}

StrongSequence read_strong_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open input file: " + path);
  }
  return read_strong_sequence(in);
}

bool is_strong_document_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open input file: " + path);
  }
  const json doc = parse_document(in);
  return doc.is_object() && doc.contains("min_index") && doc["min_index"].is_number_integer() &&
         doc["min_index"].get<int>() < 0;
}

std::string measure_to_json(const AtomicMeasure& measure, double residual) {
  std::string out = "{\"atoms\":[";
  for (std::size_t i = 0; i < measure.atoms.size(); ++i) {
    if (i > 0) {
      out += ",";
    }
    out += "{\"x\":" + format_number(measure.atoms[i].position) + ",\"mass\":";
    append_matrix(out, measure.atoms[i].mass);
    out += "}";
  }
  out += "]";
  if (measure.infinity_mass.has_value()) {
    out += ",\"infinity_mass\":";
    append_matrix(out, *measure.infinity_mass);
  }
  out += ",\"residual\":" + format_number(residual) + "}\n";
  return out;
}

void write_measure_file(const std::string& path, const AtomicMeasure& measure, double residual) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidInput("cannot open output file: " + path);
  }
  out << measure_to_json(measure, residual);
}

AtomicMeasure read_measure(std::istream& in) {
  const json doc = parse_document(in);
  if (!doc.is_object() || !doc.contains("atoms") || !doc["atoms"].is_array()) {
    throw InvalidInput("measure document: required field \"atoms\"");
  }
  AtomicMeasure measure;
  const json& atoms = doc["atoms"];
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const json& entry = atoms[i];
    if (!entry.is_object() || !entry.contains("x") || !entry.contains("mass")) {
      throw InvalidInput("measure document: every atom needs \"x\" and \"mass\"");
    }
    const json& mass_node = entry["mass"];
    if (!mass_node.is_array() || mass_node.empty()) {
      throw InvalidInput("measure document: empty mass");
    }
    const int p = static_cast<int>(mass_node.size());
    if (measure.p == 0) {
      measure.p = p;
    }
    measure.atoms.push_back({entry["x"].get<double>(),
                             parse_matrix(mass_node, measure.p, "mass " + std::to_string(i))});
  }
  if (doc.contains("infinity_mass")) {
    if (measure.p == 0) {
      measure.p = static_cast<int>(doc["infinity_mass"].size());
    }
    measure.infinity_mass = parse_matrix(doc["infinity_mass"], measure.p, "infinity_mass");
  }
  if (measure.p == 0) {
    throw InvalidInput("measure document: no masses present");
  }
  return measure;
}

AtomicMeasure read_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open measure file: " + path);
  }
  return read_measure(in);
}

}  // namespace matquad
