#pragma once

// Helpers shared by the KOCRS and OSGAP instance readers/writers.

#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "kocrs/distribution.hpp"
#include "kocrs/rational.hpp"

namespace kocrs::json_io {

/// Parses JSON text; syntax errors become Error(ParseError) with line and column.
nlohmann::json parse_document(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

/// A position in a parsed document that remembers its path for diagnostics.
class Cursor {
 public:
  Cursor(const nlohmann::json& node, std::string path) : node_(&node), path_(std::move(path)) {}

  bool has(const std::string& key) const;
  Cursor field(const std::string& key) const;
  Cursor at(std::size_t index) const;
  std::size_t size() const;  // array length

  std::string string() const;
  Rational rational() const;
  std::size_t count() const;  // non-negative integer
  const nlohmann::json& node() const { return *node_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const;

 private:
  const nlohmann::json* node_;
  std::string path_;
};

/// Atom list [{"size": r, "prob": r}, ...]; invalid laws raise Error(ValidationError).
SizeDistribution read_atoms(const Cursor& atoms);
nlohmann::ordered_json write_atoms(const SizeDistribution& dist);

void read_meta(const Cursor& meta, std::string& name, std::map<std::string, std::string>& params);
nlohmann::ordered_json write_meta(const std::string& name,
                                  const std::map<std::string, std::string>& params);

}  // namespace kocrs::json_io
