#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linscan/density.hpp"
#include "linscan/pipeline.hpp"
#include "linscan/types.hpp"

namespace linscan::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Two real columns per line, separated by a comma and/or whitespace. A
/// non-numeric first line is taken as a header; blank lines are skipped.
/// Throws ParseError (with the 1-based line number) on a malformed line and
/// on input with no points.
PointCloud parse_points(std::string_view text);
PointCloud ingest(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

// Shortest form that still has 17 significant digits: "inf", "-inf", "nan"
// for non-finite values.
std::string format_double(double v);

std::string points_csv(const PointCloud& cloud);                           // x,y
std::string labels_csv(const PointCloud& cloud, const Labeling& labels);   // id,x,y,cluster
std::string reachability_csv(const OpticsResult& result);                  // position,id,reachability,core
std::string summaries_csv(const std::vector<ClusterSummary>& summaries);   // cluster,...,kept
std::string scatter_svg(const PointCloud& cloud, const Labeling& labels);

std::string sha256_hex(std::string_view data);

/// Output files staged in memory and published together: each is written
/// to a temporary name in the target directory, then renamed into place.
class ArtifactSet {
 public:
  void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }
  void commit(const std::filesystem::path& dir) const;

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace linscan::io
