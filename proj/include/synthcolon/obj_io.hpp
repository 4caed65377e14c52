#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "synthcolon/errors.hpp"
#include "synthcolon/mesh.hpp"

namespace synthcolon::obj {

namespace detail {

inline void append_fixed(std::string& out, double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 6);
  if (ec != std::errc{}) {
    throw DataError("cannot format coordinate");
  }
  out.append(buf, end);
}

inline void append_int(std::string& out, std::uint64_t value) {
  char buf[24];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  out.append(buf, end);
}

template <typename T>
T parse_number(std::string_view token, const std::filesystem::path& path, std::size_t line_no) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ReadError(path, "line " + std::to_string(line_no) + ": bad number '" + std::string(token) + "'");
  }
  return value;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
      ++i;
    }
    if (i > start) {
      tokens.push_back(line.substr(start, i - start));
    }
  }
  return tokens;
}

}  // namespace detail

/// ASCII Wavefront OBJ text: one `v` and one `vn` per vertex (six decimals),
/// one `f v//vn` line per triangle, 1-based indices.
inline std::string to_obj_string(const Mesh& mesh, std::string_view object_name) {
  std::string out;
  out.reserve(mesh.vertex_count() * 80 + mesh.triangle_count() * 40);
  out += "# synthcolon mesh: ";
  detail::append_int(out, mesh.vertex_count());
  out += " vertices, ";
  detail::append_int(out, mesh.triangle_count());
  out += " faces\no ";
  out += object_name;
  out += '\n';
  for (const auto& v : mesh.vertices()) {
    out += "v ";
    detail::append_fixed(out, v.x);
    out += ' ';
    detail::append_fixed(out, v.y);
    out += ' ';
    detail::append_fixed(out, v.z);
    out += '\n';
  }
  for (const auto& n : mesh.normals()) {
    out += "vn ";
    detail::append_fixed(out, n.x);
    out += ' ';
    detail::append_fixed(out, n.y);
    out += ' ';
    detail::append_fixed(out, n.z);
    out += '\n';
  }
  for (const auto& t : mesh.triangles()) {
    out += 'f';
    for (const auto idx : t) {
      out += ' ';
      detail::append_int(out, idx + 1ull);
      out += "//";
      detail::append_int(out, idx + 1ull);
    }
    out += '\n';
  }
  return out;
}

inline void write(const std::filesystem::path& path, const Mesh& mesh, std::string_view object_name) {
  const std::string text = to_obj_string(mesh, object_name);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw WriteError(path, "cannot open for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw WriteError(path, "write failed");
  }
}

/// Reads triangle meshes written by write() and most other triangulated OBJ
/// files. Normals are taken from the file when every face vertex pairs with
/// the same-numbered normal, otherwise recomputed.
inline Mesh read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ReadError(path, "cannot open file");
  }
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<Triangle> triangles;
  bool normals_match = true;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::split(line);
    if (tokens.empty() || tokens[0].starts_with('#')) {
      continue;
    }
    const auto& tag = tokens[0];
    if (tag == "v" || tag == "vn") {
      if (tokens.size() < 4) {
        throw ReadError(path, "line " + std::to_string(line_no) + ": expected 3 coordinates");
      }
      const Vec3 p{detail::parse_number<double>(tokens[1], path, line_no),
                   detail::parse_number<double>(tokens[2], path, line_no),
                   detail::parse_number<double>(tokens[3], path, line_no)};
      (tag == "v" ? vertices : normals).push_back(p);
    } else if (tag == "f") {
      if (tokens.size() != 4) {
        throw ReadError(path, "line " + std::to_string(line_no) + ": only triangular faces are supported");
      }
      Triangle t{};
      for (int k = 0; k < 3; ++k) {
        const std::string_view ref = tokens[k + 1];
        const auto slash = ref.find('/');
        const auto vi = detail::parse_number<std::int64_t>(ref.substr(0, slash), path, line_no);
        if (vi < 1 || static_cast<std::size_t>(vi) > vertices.size()) {
          throw ReadError(path, "line " + std::to_string(line_no) + ": vertex index out of range");
        }
        t[k] = static_cast<std::uint32_t>(vi - 1);
        const auto last_slash = ref.rfind('/');
        if (slash == std::string_view::npos || last_slash == slash) {
          // "v" or "v/vt": no normal reference
          normals_match = false;
        } else {
          const auto ni = detail::parse_number<std::int64_t>(ref.substr(last_slash + 1), path, line_no);
          normals_match = normals_match && ni == vi;
        }
      }
      triangles.push_back(t);
    }
  }
  try {
    if (normals_match && normals.size() == vertices.size()) {
      return Mesh(std::move(vertices), std::move(triangles), std::move(normals));
    }
    return Mesh(std::move(vertices), std::move(triangles));
  } catch (const DataError& e) {
    throw ReadError(path, e.what());
  }
}

}  // namespace synthcolon::obj
