#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace heis::cli {

enum class Format { Json, Csv };

// Everything a run depends on. Numeric arguments live in params under the
// flag name without dashes ("p", "q", "r", "annulus", ...).
struct RunConfig {
  std::string command;
  std::string surface = "plane-t";
  int n = 0;  // 0: taken from --p, else 1
  std::string patch;   // JSON file; empty means --annulus/--box or the surface default
  std::string method = "auto";  // tube: auto, h1, hn, umbilic, mc
  std::map<std::string, std::vector<double>> params;
  std::string output;  // empty: stdout
  Format format = Format::Json;
  int threads = 0;
};

inline constexpr int kSchema = 1;

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& commands();

// Throws UsageError on unknown commands or keys and on malformed values.
void validate(const RunConfig& cfg);

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

// Runs the command and writes to cfg.output (or out when that is empty).
int run(const RunConfig& cfg, std::ostream& out);
int run(const RunConfig& cfg);

// argv front end; also accepts --config FILE holding an echoed config.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct Check {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tol = 0.0;
  bool pass = false;
};

std::vector<Check> verify_suite(std::uint64_t seed, int threads);

}  // namespace heis::cli
