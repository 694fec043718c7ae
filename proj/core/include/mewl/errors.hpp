#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mewl {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnknownObjectId : public Error {
 public:
  explicit UnknownObjectId(int id)
      : Error("unknown object id " + std::to_string(id)), id_(id) {}
  int id() const noexcept { return id_; }

 private:
  int id_;
};

class AmbiguousReferent : public Error {
 public:
  using Error::Error;
};

class MalformedScene : public Error {
 public:
  using Error::Error;
};

class MalformedEpisode : public Error {
 public:
  using Error::Error;
};

class AmbiguousEpisode : public Error {
 public:
  AmbiguousEpisode(const std::string& episode_id, int supported)
      : Error("episode " + episode_id + " has " + std::to_string(supported) +
              " supported options"),
        supported_(supported) {}
  int supported() const noexcept { return supported_; }

 private:
  int supported_;
};

class MissingPointer : public Error {
 public:
  using Error::Error;
};

class EmptySyllableList : public Error {
 public:
  EmptySyllableList() : Error("pseudo-word needs at least one syllable") {}
};

class GenerationExhausted : public Error {
 public:
  using Error::Error;
};

class LayoutExhausted : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownEpisodeId : public Error {
 public:
  explicit UnknownEpisodeId(const std::string& id)
      : Error("unknown episode id '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

}  // namespace mewl
