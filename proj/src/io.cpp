#include "linscan/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace linscan::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ',' && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i < line.size() && line[i] == ',') {
      ++i;
      // "a,,b" leaves an empty field, which fails to parse below.
      std::size_t k = i;
      while (k < line.size() && (line[k] == ' ' || line[k] == '\t')) ++k;
      if (k >= line.size() || line[k] == ',') fields.emplace_back();
    }
  }
  return fields;
}

bool parse_real(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

PointCloud parse_points(std::string_view text) {
  std::vector<Vec2> pts;
  std::size_t line_no = 0;
  bool first_content = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    double x = 0.0, y = 0.0;
    const bool ok = fields.size() == 2 && parse_real(fields[0], x) && parse_real(fields[1], y);
    if (!ok) {
      if (first_content) {
        first_content = false;  // header
        continue;
      }
      throw ParseError(line_no, "expected two numeric columns, got '" + std::string(line) + "'");
    }
    first_content = false;
    if (!std::isfinite(x) || !std::isfinite(y)) throw ParseError(line_no, "non-finite coordinate");
    pts.push_back({x, y});
  }
  if (pts.empty()) throw ParseError(line_no, "no points in input");
  return PointCloud(std::move(pts));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PointCloud ingest(const std::filesystem::path& path) { return parse_points(read_file(path)); }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string points_csv(const PointCloud& cloud) {
  std::string out = "x,y\n";
  for (Vec2 p : cloud) out += format_double(p.x) + "," + format_double(p.y) + "\n";
  return out;
}

std::string labels_csv(const PointCloud& cloud, const Labeling& labels) {
  std::string out = "id,x,y,cluster\n";
  for (PointId i = 0; i < cloud.size(); ++i) {
    out += std::to_string(i) + "," + format_double(cloud[i].x) + "," + format_double(cloud[i].y) + "," +
           std::to_string(labels[i]) + "\n";
  }
  return out;
}

std::string reachability_csv(const OpticsResult& result) {
  std::string out = "position,id,reachability,core\n";
  for (std::size_t pos = 0; pos < result.order.size(); ++pos) {
    const PointId id = result.order[pos];
    out += std::to_string(pos) + "," + std::to_string(id) + "," + format_double(result.reach[id]) + "," +
           format_double(result.core[id]) + "\n";
  }
  return out;
}

std::string summaries_csv(const std::vector<ClusterSummary>& summaries) {
  const double nan = std::nan("");
  std::string out = "cluster,size,cx,cy,lambda1,lambda2,ratio,orientation_deg,kept\n";
  for (const auto& s : summaries) {
    out += std::to_string(s.cluster_id) + "," + std::to_string(s.size) + "," + format_double(s.centroid.x) +
           "," + format_double(s.centroid.y) + "," + format_double(s.lambda1) + "," +
           format_double(s.lambda2) + "," + format_double(s.spectral_ratio.value_or(nan)) + "," +
           format_double(s.orientation_deg.value_or(nan)) + "," + (s.kept ? "1" : "0") + "\n";
  }
  return out;
}

std::string scatter_svg(const PointCloud& cloud, const Labeling& labels) {
  static constexpr std::array<const char*, 10> kPalette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#393b79"};
  constexpr double kSize = 800.0;
  constexpr double kPad = 20.0;

  Vec2 lo = cloud[0], hi = cloud[0];
  for (Vec2 p : cloud) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-12});
  const double scale = (kSize - 2 * kPad) / span;

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  out += "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  // Noise first so clusters draw on top.
  for (int pass = 0; pass < 2; ++pass) {
    for (PointId i = 0; i < cloud.size(); ++i) {
      const bool noise = labels.is_noise(i);
      if (noise != (pass == 0)) continue;
      const double sx = kPad + (cloud[i].x - lo.x) * scale;
      const double sy = kSize - kPad - (cloud[i].y - lo.y) * scale;
      const char* color = noise ? "#bbbbbb" : kPalette[static_cast<std::size_t>(labels[i]) % kPalette.size()];
      std::array<char, 160> buf{};
      std::snprintf(buf.data(), buf.size(), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%s\" fill=\"%s\"/>\n", sx, sy,
                    noise ? "1.5" : "2.5", color);
      out += buf.data();
    }
  }
  out += "</svg>\n";
  return out;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

void ArtifactSet::commit(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> staged;
  try {
    for (const auto& [name, content] : files_) {
      const auto tmp = dir / ("." + name + ".tmp");
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.close();
      if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
      staged.push_back(tmp);
    }
  } catch (...) {
    for (const auto& tmp : staged) std::filesystem::remove(tmp);
    throw;
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::filesystem::rename(staged[i], dir / files_[i].first);
  }
}

}  // namespace linscan::io
