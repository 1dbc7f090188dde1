#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vortlab::cli {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;

/// Config violation; `key()` is the dotted path of the offending key.
class SchemaError : public std::invalid_argument {
 public:
  SchemaError(std::string key, const std::string& message)
      : std::invalid_argument("config: key '" + key + "': " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vortlab::cli
