#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strelmine {

// Error categories aligned with the CLI exit codes: config=2, data=3, eval=4.

class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

class data_error : public std::runtime_error {
public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

class eval_error : public std::runtime_error {
public:
  explicit eval_error(const std::string& msg) : std::runtime_error(msg) {}
};

class syntax_error : public std::runtime_error {
public:
  syntax_error(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

}  // namespace strelmine
