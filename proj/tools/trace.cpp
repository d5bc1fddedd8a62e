#include "trace.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <stdexcept>

namespace psdrank::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

Trace::Stage::Stage(Trace& trace, std::string name)
    : trace_(trace), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

Trace::Stage& Trace::Stage::param(const std::string& key, const std::string& value) {
  fields_.emplace_back("param." + key, value);
  return *this;
}

Trace::Stage& Trace::Stage::input(std::string_view bytes) {
  fields_.emplace_back("input.sha256", sha256_hex(bytes));
  return *this;
}

Trace::Stage& Trace::Stage::output(std::string_view bytes) {
  fields_.emplace_back("output.sha256", sha256_hex(bytes));
  return *this;
}

void Trace::Stage::finish() {
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  trace_.out_ << "stage=" << name_;
  for (const auto& [k, v] : fields_) trace_.out_ << ' ' << k << '=' << v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", elapsed);
  trace_.out_ << " wall_ms=" << buf << '\n';
}

void Trace::note(const std::string& stage, const std::string& text) {
  out_ << "note stage=" << stage << ' ' << text << '\n';
}

}  // namespace psdrank::cli
