#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seldiac {

// Base of everything thrown by the library. The CLI maps these to exit
// code 2 (data error); usage errors never reach this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

class UnknownCharacter : public Error {
 public:
  explicit UnknownCharacter(std::size_t position)
      : Error("no transliteration for character at position " +
              std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownWord : public Error {
 public:
  explicit UnknownWord(const std::string& word)
      : Error("unknown word: " + word) {}
};

class EmptyVocabulary : public Error {
 public:
  EmptyVocabulary() : Error("no word type survives the frequency cutoff") {}
};

class TooFewPoints : public Error {
 public:
  TooFewPoints(std::size_t distinct, std::size_t k)
      : Error("need at least " + std::to_string(k) +
              " distinct points, got " + std::to_string(distinct)) {}
};

class TooFewTypes : public Error {
 public:
  TooFewTypes(std::size_t types, std::size_t k)
      : Error("need at least " + std::to_string(k) + " word types, got " +
              std::to_string(types)) {}
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("parallel corpus is empty") {}
};

class KeyingMismatch : public Error {
 public:
  using Error::Error;
};

class SchemeMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyTagset : public Error {
 public:
  EmptyTagset() : Error("training data carries no tags") {}
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : Error("score lists differ in length: " + std::to_string(a) + " vs " +
              std::to_string(b)) {}
};

}  // namespace seldiac
