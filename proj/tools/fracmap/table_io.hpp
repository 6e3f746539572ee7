#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fracmap::app {

/// Shortest decimal representation that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

/// Parses a full-token double (accepts inf/nan). nullopt on trailing garbage.
[[nodiscard]] std::optional<double> parse_double(std::string_view text);

/// Semicolon-joined list, as used for list values in CSV metadata lines.
[[nodiscard]] std::string join_doubles(std::span<const double> values);
[[nodiscard]] std::vector<double> split_doubles(std::string_view text);

/// Ordered key=value provenance pairs, written as a leading "# k=v k=v" line.
using Meta = std::vector<std::pair<std::string, std::string>>;

class CsvBuilder {
 public:
  CsvBuilder(const Meta& meta, std::initializer_list<std::string_view> header);

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    (cell(first, cells), ...);
    out_ += '\n';
  }

  [[nodiscard]] std::string str() && { return std::move(out_); }

 private:
  void cell(bool& first, double v);
  void cell(bool& first, std::size_t v);
  void cell(bool& first, std::string_view v);
  void cell(bool& first, const std::string& v) { cell(first, std::string_view(v)); }
  void cell(bool& first, const char* v) { cell(first, std::string_view(v)); }
  void cell(bool& first, bool v) { cell(first, std::string_view(v ? "1" : "0")); }

  std::string out_;
};

/// A parsed CSV file: metadata from "# k=v" lines, the header row, and raw rows.
struct CsvTable {
  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::size_t column(std::string_view name) const;
  [[nodiscard]] bool has_column(std::string_view name) const;
  [[nodiscard]] double number(std::size_t row, std::size_t col) const;
  [[nodiscard]] const std::string& meta_value(const std::string& key) const;
};

[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

[[nodiscard]] std::string sha256_hex(std::string_view content);

/// Collects the data files of one run and writes them with a deterministic
/// provenance sidecar (provenance.json: config echo, version, checksums) and a
/// separate run-manifest.json holding the non-deterministic run facts.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(std::string name, std::string content);
  void add_json(std::string name, const nlohmann::json& j);

  /// Writes everything; returns the written paths. Throws IoError.
  std::vector<std::filesystem::path> commit(const nlohmann::json& provenance_config,
                                            const nlohmann::json& manifest_extra) const;

  [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace fracmap::app
