#include "cubespec/json_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

#include "cubespec/errors.hpp"

namespace cubespec {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw UsageError(std::string("missing field \"") + key + "\"");
  return *it;
}

int read_n(const nlohmann::json& j) {
  const nlohmann::json& v = field(j, "n");
  if (!v.is_number_integer()) throw UsageError("field \"n\" must be an integer");
  const long long n = v.get<long long>();
  if (n < 0 || n > kMaxN) throw UsageError("field \"n\" is out of range");
  return static_cast<int>(n);
}

point_t read_point(const nlohmann::json& v, int n, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw UsageError(std::string(what) + " must be a nonnegative integer");
  }
  const unsigned long long p = v.get<unsigned long long>();
  if (p >= cube_size(n)) throw UsageError(std::string(what) + " is outside the cube");
  return static_cast<point_t>(p);
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

nlohmann::json to_json(const CubeFunction& f) {
  nlohmann::json values = nlohmann::json::array();
  for (Eigen::Index i = 0; i < f.values().size(); ++i) values.push_back(f.values()[i]);
  return nlohmann::json{{"n", f.n()},
                        {"side", f.side() == Side::Point ? "point" : "spectral"},
                        {"values", std::move(values)}};
}

CubeFunction cube_function_from_json(const nlohmann::json& j) {
  const int n = read_n(j);
  Side side = Side::Point;
  if (const auto it = j.find("side"); it != j.end()) {
    if (*it == "point") {
      side = Side::Point;
    } else if (*it == "spectral") {
      side = Side::Spectral;
    } else {
      throw UsageError("field \"side\" must be \"point\" or \"spectral\"");
    }
  }
  const nlohmann::json& values = field(j, "values");
  if (!values.is_array() || values.size() != cube_size(n)) {
    throw UsageError("field \"values\" must be an array of 2^n numbers");
  }
  Eigen::ArrayXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].is_number()) throw UsageError("field \"values\" must contain numbers only");
    v[static_cast<Eigen::Index>(i)] = values[i].get<double>();
  }
  return CubeFunction(n, side, std::move(v));
}

nlohmann::json to_json(const SubsetOfCube& a) {
  const std::uint64_t points = a.domain_size();
  const std::size_t digits = points < 4 ? 1 : static_cast<std::size_t>(points / 4);
  std::string hex(digits, '0');
  const auto& words = a.words();
  for (std::size_t d = 0; d < digits; ++d) {
    const std::size_t bit = d * 4;
    const std::uint64_t word = words[bit / 64];
    const int nibble = static_cast<int>((word >> (bit % 64)) & 0xf);
    hex[digits - 1 - d] = "0123456789abcdef"[nibble];
  }
  return nlohmann::json{{"n", a.n()}, {"bits", std::move(hex)}};
}

SubsetOfCube subset_from_json(const nlohmann::json& j) {
  const int n = read_n(j);
  const bool has_bits = j.contains("bits");
  const bool has_members = j.contains("members");
  if (has_bits == has_members) {
    throw UsageError("a set needs exactly one of \"bits\" or \"members\"");
  }
  SubsetOfCube a(n);
  if (has_members) {
    const nlohmann::json& mem = field(j, "members");
    if (!mem.is_array()) throw UsageError("field \"members\" must be an array");
    for (const auto& v : mem) a.insert(read_point(v, n, "set member"));
    return a;
  }
  const nlohmann::json& bits = field(j, "bits");
  if (!bits.is_string()) throw UsageError("field \"bits\" must be a hex string");
  std::string s = bits.get<std::string>();
  if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) s = s.substr(2);
  if (s.empty()) throw UsageError("field \"bits\" is empty");
  const std::uint64_t points = cube_size(n);
  for (std::size_t d = 0; d < s.size(); ++d) {
    const int nibble = hex_digit(s[s.size() - 1 - d]);
    if (nibble < 0) throw UsageError("field \"bits\" has a non-hex character");
    for (int b = 0; b < 4; ++b) {
      if (!(nibble & (1 << b))) continue;
      const std::uint64_t point = d * 4 + static_cast<std::uint64_t>(b);
      if (point >= points) throw UsageError("field \"bits\" sets a point outside the cube");
      a.insert(static_cast<point_t>(point));
    }
  }
  return a;
}

nlohmann::json to_json(const Coset& c) {
  nlohmann::json basis = nlohmann::json::array();
  for (point_t b : c.space().basis()) basis.push_back(b);
  return nlohmann::json{{"n", c.n()}, {"basis", std::move(basis)}, {"rep", c.rep()}};
}

Coset coset_from_json(const nlohmann::json& j) {
  const int n = read_n(j);
  const nlohmann::json& basis = field(j, "basis");
  if (!basis.is_array()) throw UsageError("field \"basis\" must be an array");
  std::vector<point_t> gens;
  for (const auto& v : basis) gens.push_back(read_point(v, n, "basis vector"));
  const point_t rep = read_point(field(j, "rep"), n, "field \"rep\"");
  return Coset(Subspace::from_generators(n, gens), rep);
}

nlohmann::json to_json(const SignedCosetSum& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const SignedTerm& t : s.terms()) {
    terms.push_back(nlohmann::json{{"sign", t.sign}, {"coset", to_json(t.coset)}});
  }
  return nlohmann::json{{"n", s.n()}, {"terms", std::move(terms)}};
}

SignedCosetSum coset_sum_from_json(const nlohmann::json& j) {
  const int n = read_n(j);
  const nlohmann::json& terms = field(j, "terms");
  if (!terms.is_array()) throw UsageError("field \"terms\" must be an array");
  SignedCosetSum s(n);
  for (const auto& t : terms) {
    const nlohmann::json& sign = field(t, "sign");
    if (!sign.is_number_integer()) throw UsageError("term sign must be an integer");
    const Coset c = coset_from_json(field(t, "coset"));
    if (c.n() != n) throw UsageError("term coset lives in a different cube");
    s.add(sign.get<int>(), c);
  }
  return s;
}

nlohmann::json to_json(const RunConfig& c) {
  return nlohmann::json{{"seed", c.seed},
                        {"budgets",
                         nlohmann::json{{"exhaustive", c.exhaustive_budget},
                                        {"mc_samples", c.mc_samples},
                                        {"tuples", c.tuple_budget},
                                        {"work", c.work_budget}}},
                        {"tolerance", c.tolerance},
                        {"out_dir", c.out_dir}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  if (const auto it = j.find("seed"); it != j.end()) c.seed = it->get<std::uint64_t>();
  if (const auto it = j.find("budgets"); it != j.end()) {
    const nlohmann::json& b = *it;
    if (const auto f = b.find("exhaustive"); f != b.end()) {
      c.exhaustive_budget = f->get<std::uint64_t>();
    }
    if (const auto f = b.find("mc_samples"); f != b.end()) c.mc_samples = f->get<std::uint64_t>();
    if (const auto f = b.find("tuples"); f != b.end()) c.tuple_budget = f->get<std::uint64_t>();
    if (const auto f = b.find("work"); f != b.end()) c.work_budget = f->get<std::uint64_t>();
  }
  if (const auto it = j.find("tolerance"); it != j.end()) c.tolerance = it->get<double>();
  if (const auto it = j.find("out_dir"); it != j.end()) c.out_dir = it->get<std::string>();
  return c;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw UsageError("write to " + path + " failed");
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace cubespec
