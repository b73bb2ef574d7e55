#include "cubespec/report.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>

#include "cubespec/errors.hpp"

namespace cubespec {

namespace {

using MdCtx = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

std::string finish_hex(EVP_MD_CTX* ctx) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    throw VerificationError("sha256: digest finalization failed");
  }
  std::string hex(2 * len, '0');
  for (unsigned int i = 0; i < len; ++i) {
    hex[2 * i] = "0123456789abcdef"[digest[i] >> 4];
    hex[2 * i + 1] = "0123456789abcdef"[digest[i] & 0xf];
  }
  return hex;
}

}  // namespace

std::string sha256_hex(const void* data, std::size_t size) {
  MdCtx ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw VerificationError("sha256: cannot initialize digest");
  }
  if (EVP_DigestUpdate(ctx.get(), data, size) != 1) {
    throw VerificationError("sha256: digest update failed");
  }
  return finish_hex(ctx.get());
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  MdCtx ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw VerificationError("sha256: cannot initialize digest");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    const std::streamsize got = in.gcount();
    if (got > 0 && EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(got)) != 1) {
      throw VerificationError("sha256: digest update failed");
    }
  }
  return finish_hex(ctx.get());
}

ReportBuilder::ReportBuilder(std::string command, std::vector<std::string> argv,
                             RunConfig config)
    : command_(std::move(command)), argv_(std::move(argv)), config_(std::move(config)) {}

void ReportBuilder::add_input(const std::string& path) { inputs_[path] = sha256_file(path); }

void ReportBuilder::add_assertion(const std::string& name, bool pass) {
  add_assertion(name, pass, nlohmann::json::object());
}

void ReportBuilder::add_assertion(const std::string& name, bool pass, nlohmann::json detail) {
  nlohmann::json a{{"name", name}, {"pass", pass}};
  if (!detail.empty()) a["detail"] = std::move(detail);
  assertions_.push_back(std::move(a));
  if (!pass) ++failures_;
}

void ReportBuilder::add_timing(const std::string& name, double seconds) {
  timings_[name] = seconds;
}

nlohmann::json ReportBuilder::finish() const {
  return nlohmann::json{{"command", command_}, {"argv", argv_},
                        {"config", to_json(config_)}, {"inputs", inputs_},
                        {"results", results_},       {"assertions", assertions_},
                        {"timings", timings_}};
}

}  // namespace cubespec
