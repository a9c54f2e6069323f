#ifndef QDECAY_ERRORS_HPP
#define QDECAY_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdecay {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An intermediate quantity does not fit in a double.
class overflow_error : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Iterative method or quadrature failed to reach its tolerance.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Coincident poles or a vanishing denominator.
class degenerate_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation failure at one point of a sampling grid.
class grid_error : public std::runtime_error {
 public:
  grid_error(std::size_t index, const std::string& what)
      : std::runtime_error("grid point " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Malformed input file or value, with location context in the message.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdecay

#endif  // QDECAY_ERRORS_HPP
