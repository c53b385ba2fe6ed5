#pragma once
// CSV and JSON serialisation shared by the commands. Numbers are written in
// shortest round-trip form so repeated runs are byte-identical.

#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "hillwave/pipeline.hpp"

namespace hillwave::io {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  template <class... T>
  void row(const T&... values) {
    std::string line;
    bool first = true;
    ((line += (first ? "" : ","), line += cell(values), first = false), ...);
    line += '\n';
    out_ << line;
  }

  void close();

 private:
  template <class T>
  static std::string cell(const T& v) {
    if constexpr (std::is_same_v<T, bool>) {
      return v ? "1" : "0";
    } else if constexpr (std::is_floating_point_v<T>) {
      return fmt::format("{}", static_cast<double>(v));
    } else {
      return fmt::format("{}", v);
    }
  }

  std::string path_;
  std::ofstream out_;
};

void write_text(const std::string& path, const std::string& text);

nlohmann::json to_json(const InstabilityInterval& iv);
nlohmann::json to_json(const GrowthReport& g);
nlohmann::json to_json(const BlowupReport& r);
nlohmann::json to_json(const CrossValReport& r);

}  // namespace hillwave::io
