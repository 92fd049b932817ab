#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "percolab/coupling.hpp"
#include "percolab/estimators.hpp"
#include "percolab/exact.hpp"
#include "percolab/lattice.hpp"
#include "percolab/strassen.hpp"
#include "percolab/verify.hpp"

namespace percolab {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr int kCsvSchemaVersion = 1;

[[nodiscard]] Json to_json(const GraphBall& ball);
[[nodiscard]] Json to_json(const ExplorationTrace& trace);  // [[edge, bit], ...]
[[nodiscard]] Json to_json(const CoupledPair& pair);
[[nodiscard]] Json to_json(const DominationCertificate& cert, std::size_t num_edges);
[[nodiscard]] Json to_json(const EstimateCI& est);
[[nodiscard]] Json to_json(const MagnetizationInterval& m);
[[nodiscard]] Json to_json(const LemmaCheck& check, std::size_t num_edges);
[[nodiscard]] Json to_json(const DecayFit& fit);

[[nodiscard]] ExplorationTrace trace_from_json(const Json& j);

/// Configuration as a hex string, digit j holding edges 4j..4j+3.
[[nodiscard]] std::string config_hex(std::uint32_t mask, std::size_t num_edges);

/// Minimal CSV writer: fixed header, comma separated, LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  [[nodiscard]] std::string str() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Shortest round-trip decimal form, stable across runs.
[[nodiscard]] std::string fmt(double x);
[[nodiscard]] std::string fmt(std::size_t x);

[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes);
[[nodiscard]] std::string hex64(std::uint64_t x);

/// Writes `content` and returns its digest.
std::string write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace percolab
