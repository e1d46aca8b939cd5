#pragma once

#include <stdexcept>
#include <string>

namespace lossest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Design matrix (or a submatrix) is numerically rank deficient.
// `column` is the 0-based index of the first offending column.
class RankDeficient : public Error {
 public:
  RankDeficient(int column, const std::string& msg) : Error(msg), column(column) {}
  int column;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ZeroVariance : public Error {
 public:
  using Error::Error;
};

class ZeroResidual : public Error {
 public:
  using Error::Error;
};

class SingularS : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class UnsupportedStarLaw : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class NonFiniteOutput : public Error {
 public:
  using Error::Error;
};

class DivergenceUnavailable : public Error {
 public:
  using Error::Error;
};

// CSV / report ingestion failure; positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(long line, long column, const std::string& msg)
      : Error(msg), line(line), column(column) {}
  long line;
  long column;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lossest
