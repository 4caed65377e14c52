#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace synthcolon {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter failed validation. `field()` names the offending field.
class ParameterError : public Error {
 public:
  ParameterError(std::string field, const std::string& what)
      : Error("invalid parameter '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class PlacementError : public Error {
 public:
  using Error::Error;
};

/// Filesystem write failure; carries the path.
class WriteError : public Error {
 public:
  WriteError(std::filesystem::path path, const std::string& what)
      : Error("write failed for '" + path.string() + "': " + what), path_(std::move(path)) {}
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

/// Missing or corrupt input; carries the path.
class ReadError : public Error {
 public:
  ReadError(std::filesystem::path path, const std::string& what)
      : Error("read failed for '" + path.string() + "': " + what), path_(std::move(path)) {}
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class SchemaVersionError : public Error {
 public:
  SchemaVersionError(int found, int expected)
      : Error("manifest schema_version " + std::to_string(found) + " is not supported (expected " +
              std::to_string(expected) + ")"),
        found_(found) {}
  int found() const noexcept { return found_; }

 private:
  int found_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class PairingError : public Error {
 public:
  using Error::Error;
};

/// Retry budget exhausted or impossible threshold.
class GenerationError : public Error {
 public:
  GenerationError(std::size_t index, std::size_t last_polyp_pixels, const std::string& what)
      : Error(what), index_(index), last_polyp_pixels_(last_polyp_pixels) {}
  std::size_t index() const noexcept { return index_; }
  std::size_t last_polyp_pixels() const noexcept { return last_polyp_pixels_; }

 private:
  std::size_t index_;
  std::size_t last_polyp_pixels_;
};

}  // namespace synthcolon
