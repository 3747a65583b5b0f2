#pragma once

// Flat key=value run configuration with a typed schema. Unknown keys and
// malformed values are rejected when set.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rrc/algos.hpp"
#include "rrc/data.hpp"
#include "rrc/env.hpp"
#include "rrc/eval.hpp"

namespace rrc {

class RunConfig {
 public:
  enum class Kind { Real, Int, IntList, Choice };

  struct Key {
    std::string name;
    Kind kind;
    std::string default_value;
    std::vector<std::string> choices;  // Choice only
    std::string help;
  };

  RunConfig();

  static const std::vector<Key>& schema();

  /// Parses "key = value" lines; '#' starts a comment.
  void load_file(const std::filesystem::path& path);
  void load_text(std::string_view text, std::string_view origin = "<text>");
  /// Throws InputError for unknown keys or values that do not parse.
  void set(std::string_view key, std::string_view value);
  /// "key=value" override syntax used by --set.
  void set_assignment(std::string_view assignment);
  bool explicitly_set(std::string_view key) const;

  double real(std::string_view key) const;
  std::int64_t integer(std::string_view key) const;
  std::vector<int> int_list(std::string_view key) const;
  const std::string& text(std::string_view key) const;

  /// Fully resolved config in schema order, one "key=value" per line.
  std::string echo() const;

  EnvConfig env_config() const;
  WeakParams weak_params() const;
  TrainConfig train_config(Algo algo) const;
  FilterConfig filter_config() const;
  PoseFilterConfig pose_filter_config() const;
  EvalProtocolConfig eval_config() const;

 private:
  const Key& key(std::string_view name) const;
  std::map<std::string, std::string, std::less<>> values_;
  std::map<std::string, bool, std::less<>> explicit_;
};

}  // namespace rrc
