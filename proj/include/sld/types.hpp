#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sld {

// Dense node index. Users and items live in separate index spaces.
using Index = std::uint32_t;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Item-indexed diffusion resource (f, f^(n), F^u).
using ResourceVector = VectorX<double>;

struct Edge {
  Index user = 0;
  Index item = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Malformed input data: unreadable files, bad edge lists, empty graphs.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a user without training edges is asked for scores.
class ColdStartError : public std::runtime_error {
 public:
  explicit ColdStartError(Index user)
      : std::runtime_error("user " + std::to_string(user) +
                           " has no training edges"),
        user_(user) {}

  Index user() const { return user_; }

 private:
  Index user_;
};

}  // namespace sld
