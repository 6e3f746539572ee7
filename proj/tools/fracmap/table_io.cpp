#include "table_io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <system_error>

#include <openssl/evp.h>

#include "config.hpp"
#include "fracmap/version.hpp"

namespace fracmap::app {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("to_chars failed");
  return std::string(buf.data(), ptr);
}

std::optional<double> parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::string join_doubles(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<double> split_doubles(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(';', start);
    const auto token = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    const auto v = parse_double(token);
    if (!v) throw IoError("malformed number list '" + std::string(text) + "'");
    out.push_back(*v);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

CsvBuilder::CsvBuilder(const Meta& meta, std::initializer_list<std::string_view> header) {
  out_ += '#';
  for (const auto& [key, value] : meta) {
    out_ += ' ';
    out_ += key;
    out_ += '=';
    out_ += value;
  }
  out_ += '\n';
  bool first = true;
  for (auto h : header) cell(first, h);
  out_ += '\n';
}

void CsvBuilder::cell(bool& first, double v) { cell(first, std::string_view(format_double(v))); }

void CsvBuilder::cell(bool& first, std::size_t v) { cell(first, std::string_view(std::to_string(v))); }

void CsvBuilder::cell(bool& first, std::string_view v) {
  if (!first) out_ += ',';
  first = false;
  out_ += v;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw IoError("input CSV has no column '" + std::string(name) + "'");
}

bool CsvTable::has_column(std::string_view name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const auto v = parse_double(rows.at(row).at(col));
  if (!v) {
    throw IoError("row " + std::to_string(row + 1) + ", column '" + header.at(col) + "': malformed number '" +
                  rows[row][col] + "'");
  }
  return *v;
}

const std::string& CsvTable::meta_value(const std::string& key) const {
  const auto it = meta.find(key);
  if (it == meta.end()) throw IoError("input CSV metadata lacks '" + key + "'");
  return it->second;
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(',', start);
    cells.push_back(line.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return cells;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file '" + path.string() + "'");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream tokens(line.substr(1));
      std::string token;
      while (tokens >> token) {
        const auto eq = token.find('=');
        if (eq != std::string::npos) table.meta[token.substr(0, eq)] = token.substr(eq + 1);
      }
      continue;
    }
    auto cells = split_row(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
    } else {
      if (cells.size() != table.header.size()) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " fields, found " + std::to_string(cells.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (table.header.empty()) throw IoError("input file '" + path.string() + "' has no header row");
  return table;
}

std::string sha256_hex(std::string_view content) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(content.data(), content.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void OutputSet::add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }

void OutputSet::add_json(std::string name, const nlohmann::json& j) { add(std::move(name), j.dump(2) + "\n"); }

std::vector<std::filesystem::path> OutputSet::commit(const nlohmann::json& provenance_config,
                                                     const nlohmann::json& manifest_extra) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  nlohmann::json checksums = nlohmann::json::object();
  for (const auto& [name, content] : files_) {
    const auto path = dir_ / name;
    write_file(path, content);
    checksums[name] = sha256_hex(content);
    written.push_back(path);
  }

  nlohmann::json provenance;
  provenance["tool"] = "fracmap";
  provenance["version"] = std::string(kVersion);
  provenance["config"] = provenance_config;
  provenance["files"] = checksums;
  write_file(dir_ / "provenance.json", provenance.dump(2) + "\n");
  written.push_back(dir_ / "provenance.json");

  nlohmann::json manifest = manifest_extra;
  const auto now = std::chrono::system_clock::now();
  manifest["created_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  write_file(dir_ / "run-manifest.json", manifest.dump(2) + "\n");
  written.push_back(dir_ / "run-manifest.json");
  return written;
}

}  // namespace fracmap::app
