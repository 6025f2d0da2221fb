#ifndef TORIC_REPORT_HPP
#define TORIC_REPORT_HPP

#include "toric/config.hpp"

namespace toric {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a run produces: the deterministic JSON payload (config echo,
/// command, results) plus any field dumps as named CSV bodies.
struct RunReport {
  nlohmann::json payload;
  std::vector<std::pair<std::string, std::string>> csv_files;
};

RunReport run_command(const RunConfig& cfg);

/// Writes report.json, the CSV dumps and manifest.json (file hashes, a
/// timestamp and the wall time, which are quarantined here so report.json
/// stays byte-identical across reruns).
void emit_outputs(const RunReport& report, const std::string& dir,
                  double wall_ms);

std::string sha256_hex(const std::string& data);

}  // namespace toric

#endif
