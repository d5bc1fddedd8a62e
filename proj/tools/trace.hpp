#pragma once

#include <chrono>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace psdrank::cli {

std::string sha256_hex(std::string_view bytes);

/// Line-oriented key=value records, one per pipeline stage.
class Trace {
 public:
  explicit Trace(std::ostream& out) : out_(out) {}

  class Stage {
   public:
    Stage(Trace& trace, std::string name);
    Stage& param(const std::string& key, const std::string& value);
    Stage& input(std::string_view bytes);
    Stage& output(std::string_view bytes);
    /// Emits the record; called once.
    void finish();

   private:
    Trace& trace_;
    std::string name_;
    std::vector<std::pair<std::string, std::string>> fields_;
    std::chrono::steady_clock::time_point start_;
  };

  Stage stage(std::string name) { return Stage(*this, std::move(name)); }
  /// Free-form record from library traces: "note stage=<s> <text>".
  void note(const std::string& stage, const std::string& text);

 private:
  std::ostream& out_;
};

}  // namespace psdrank::cli
