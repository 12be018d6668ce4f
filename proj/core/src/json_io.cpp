#include "json_io.hpp"

#include <fstream>
#include <sstream>

#include "kocrs/error.hpp"

namespace kocrs::json_io {

nlohmann::json parse_document(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                           std::to_string(column) + ": malformed JSON");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for " + path.string());
}

void Cursor::fail(const std::string& message) const {
  throw Error(ErrorCode::ParseError,
              "field '" + (path_.empty() ? std::string("<root>") : path_) + "': " + message);
}

bool Cursor::has(const std::string& key) const {
  return node_->is_object() && node_->contains(key);
}

Cursor Cursor::field(const std::string& key) const {
  if (!node_->is_object()) fail("expected an object");
  const auto it = node_->find(key);
  const std::string sub = path_.empty() ? key : path_ + "." + key;
  if (it == node_->end()) throw Error(ErrorCode::ParseError, "missing field '" + sub + "'");
  return Cursor(*it, sub);
}

Cursor Cursor::at(std::size_t index) const {
  if (!node_->is_array()) fail("expected an array");
  return Cursor((*node_)[index], path_ + "[" + std::to_string(index) + "]");
}

std::size_t Cursor::size() const {
  if (!node_->is_array()) fail("expected an array");
  return node_->size();
}

std::string Cursor::string() const {
  if (!node_->is_string()) fail("expected a string");
  return node_->get<std::string>();
}

Rational Cursor::rational() const {
  if (node_->is_number_integer()) return Rational(node_->get<long>());
  if (!node_->is_string()) fail("expected a rational string such as \"1/3\" or \"0.25\"");
  try {
    return Rational::parse(node_->get<std::string>());
  } catch (const Error& e) {
    fail(e.what());
  }
}

std::size_t Cursor::count() const {
  if (!node_->is_number_unsigned() && !(node_->is_number_integer() && node_->get<long>() >= 0)) {
    fail("expected a non-negative integer");
  }
  return node_->get<std::size_t>();
}

SizeDistribution read_atoms(const Cursor& atoms) {
  std::vector<Atom> raw;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const Cursor atom = atoms.at(a);
    raw.push_back({atom.field("size").rational(), atom.field("prob").rational()});
  }
  try {
    return SizeDistribution::make(std::move(raw));
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, "field '" + atoms.path() + "': " + e.what());
  }
}

nlohmann::ordered_json write_atoms(const SizeDistribution& dist) {
  auto atoms = nlohmann::ordered_json::array();
  for (const auto& a : dist.atoms()) {
    nlohmann::ordered_json entry;
    entry["size"] = a.size.str();
    entry["prob"] = a.prob.str();
    atoms.push_back(std::move(entry));
  }
  return atoms;
}

void read_meta(const Cursor& meta, std::string& name, std::map<std::string, std::string>& params) {
  if (!meta.node().is_object()) meta.fail("expected an object");
  for (const auto& [key, value] : meta.node().items()) {
    if (!value.is_string()) meta.field(key).fail("metadata values must be strings");
    if (key == "name") {
      name = value.get<std::string>();
    } else {
      params[key] = value.get<std::string>();
    }
  }
}

nlohmann::ordered_json write_meta(const std::string& name,
                                  const std::map<std::string, std::string>& params) {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  if (!name.empty()) meta["name"] = name;
  for (const auto& [key, value] : params) meta[key] = value;
  return meta;
}

}  // namespace kocrs::json_io
