#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "qcdense/json_io.hpp"

namespace cli_capture {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

inline Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = qcdense::cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Output text up to the header, i.e. the serialized payload member.
inline std::string payload_text(const std::string& out) {
  const auto pos = out.rfind(",\n\"header\":");
  return pos == std::string::npos ? std::string() : out.substr(0, pos);
}

inline qcdense::Json document(const std::string& out) { return qcdense::Json::parse(out); }

}  // namespace cli_capture
