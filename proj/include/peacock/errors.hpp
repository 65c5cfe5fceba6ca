#ifndef PEACOCK_ERRORS_HPP
#define PEACOCK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace peacock {

struct NonPositiveDuration : std::invalid_argument {
  explicit NonPositiveDuration(const std::string& msg) : std::invalid_argument(msg) {}
};

struct NonFiniteInput : std::invalid_argument {
  explicit NonFiniteInput(const std::string& msg) : std::invalid_argument(msg) {}
};

struct TimeOutOfRange : std::out_of_range {
  explicit TimeOutOfRange(const std::string& msg) : std::out_of_range(msg) {}
};

struct InvalidDerivativeOrder : std::invalid_argument {
  explicit InvalidDerivativeOrder(const std::string& msg) : std::invalid_argument(msg) {}
};

struct InvalidParams : std::invalid_argument {
  explicit InvalidParams(const std::string& msg) : std::invalid_argument(msg) {}
};

struct IndexOutOfRange : std::out_of_range {
  explicit IndexOutOfRange(const std::string& msg) : std::out_of_range(msg) {}
};

struct OriginOutOfBounds : std::invalid_argument {
  explicit OriginOutOfBounds(const std::string& msg) : std::invalid_argument(msg) {}
};

struct ParseError : std::runtime_error {
  int line = 0;
  int column = 0;
  ParseError(int line_, int column_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ", col " +
                           std::to_string(column_) + ": " + msg),
        line(line_), column(column_) {}
};

struct SemanticError : std::runtime_error {
  int line = 0;
  SemanticError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct NonUnitDirection : std::invalid_argument {
  explicit NonUnitDirection(const std::string& msg) : std::invalid_argument(msg) {}
};

struct DegenerateThrust : std::runtime_error {
  explicit DegenerateThrust(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateHeading : std::runtime_error {
  explicit DegenerateHeading(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidTimestep : std::invalid_argument {
  explicit InvalidTimestep(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace peacock

#endif
