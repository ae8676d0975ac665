#pragma once

#include <stdexcept>
#include <string>

namespace wigsim {

// Error categories map onto CLI exit codes: config -> 2, numerical -> 3, io -> 4.
enum class error_category { config, numerical, io };

class error : public std::runtime_error {
public:
  error(error_category cat, const std::string& msg)
      : std::runtime_error(msg), cat_(cat) {}
  error_category category() const { return cat_; }

private:
  error_category cat_;
};

class config_error : public error {
public:
  explicit config_error(const std::string& msg) : error(error_category::config, msg) {}
};

class numerical_error : public error {
public:
  explicit numerical_error(const std::string& msg) : error(error_category::numerical, msg) {}
};

class io_error : public error {
public:
  explicit io_error(const std::string& msg) : error(error_category::io, msg) {}
};

inline int exit_code(error_category cat) {
  switch (cat) {
    case error_category::config: return 2;
    case error_category::numerical: return 3;
    case error_category::io: return 4;
  }
  return 1;
}

}  // namespace wigsim
