#pragma once

#include <json.hpp>
#include <string>

#include "cubespec/bits.hpp"
#include "cubespec/coset_sum.hpp"
#include "cubespec/cube_function.hpp"
#include "cubespec/subspace.hpp"

namespace cubespec {

// On-disk shapes. All readers throw UsageError with the offending field in
// the message; file-level parse errors carry nlohmann's byte position.
//
//   CubeFunction   {"n": 3, "side": "point"|"spectral", "values": [..2^n..]}
//                  ("side" optional on input, point assumed)
//   SubsetOfCube   {"n": 3, "bits": "8f"}   hex, most significant digit
//                                           covers the highest points
//                  {"n": 3, "members": [0, 1, 2, 3, 7]}   also accepted
//   Coset          {"n": 3, "basis": [1, 2], "rep": 4}
//   SignedCosetSum {"n": 3, "terms": [{"sign": 1, "coset": {...}}, ...]}

nlohmann::json to_json(const CubeFunction& f);
CubeFunction cube_function_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SubsetOfCube& a);
SubsetOfCube subset_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Coset& c);
Coset coset_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SignedCosetSum& s);
SignedCosetSum coset_sum_from_json(const nlohmann::json& j);

// Knobs shared by every command, echoed verbatim into reports so a run can
// be reproduced from its report alone.
struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t exhaustive_budget = 100'000'000;
  std::uint64_t mc_samples = 100'000;
  std::uint64_t tuple_budget = 1'000'000'000;
  std::uint64_t work_budget = 100'000'000;
  double tolerance = 1e-9;
  std::string out_dir = ".";
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

// Parse failures surface as UsageError naming the file and byte position.
nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

// printf %.17g: enough digits to reproduce the double exactly.
std::string format_double(double x);

}  // namespace cubespec
