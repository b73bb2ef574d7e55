#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "cubespec/json_io.hpp"

namespace cubespec {

std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_file(const std::string& path);

// Accumulates one command's report:
//
//   {command, argv, config, inputs, results, assertions, timings}
//
// inputs maps each input path to its content hash. assertions carry the
// checked claims with a pass flag each; any failure flips the run to exit
// code 1 while the report is still written. timings are wall-clock seconds
// and are the one section excluded when comparing reports for determinism.
class ReportBuilder {
 public:
  ReportBuilder(std::string command, std::vector<std::string> argv, RunConfig config);

  void add_input(const std::string& path);
  nlohmann::json& results() { return results_; }
  void add_assertion(const std::string& name, bool pass);
  void add_assertion(const std::string& name, bool pass, nlohmann::json detail);
  void add_timing(const std::string& name, double seconds);

  bool all_passed() const { return failures_ == 0; }
  nlohmann::json finish() const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  RunConfig config_;
  nlohmann::json inputs_ = nlohmann::json::object();
  nlohmann::json results_ = nlohmann::json::object();
  nlohmann::json assertions_ = nlohmann::json::array();
  nlohmann::json timings_ = nlohmann::json::object();
  int failures_ = 0;
};

}  // namespace cubespec
