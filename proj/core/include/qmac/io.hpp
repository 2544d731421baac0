#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qmac/access_bounds.hpp"
#include "qmac/gaussian_mac.hpp"
#include "qmac/mode_dynamics.hpp"
#include "qmac/quantum_core.hpp"

namespace qmac::io {

/// Malformed document. `line` is 1-based when known, 0 otherwise.
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& where, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads a TOML (.toml) or JSON (anything else) document into JSON form.
/// Parse errors carry the offending line.
nlohmann::json load_document(const std::filesystem::path& path);

/// Line of every value in a loaded document, keyed by JSON pointer
/// ("/grid/t/0"); the root is "".
using KeyLines = std::map<std::string, std::size_t>;

struct LocatedDocument {
  nlohmann::json value;
  KeyLines lines;
  std::string source;
  /// Line of the value at `pointer`, else of its nearest recorded ancestor;
  /// 0 when unknown.
  std::size_t line_of(std::string pointer) const;
};

LocatedDocument load_located(const std::filesystem::path& path);

nlohmann::json parse_toml(const std::string& text, const std::string& source_name = "<toml>");
nlohmann::json parse_json(const std::string& text, const std::string& source_name = "<json>");

// Complex matrices are arrays of rows; each row is an array of [re, im]
// pairs. A bare real number is accepted for an entry with zero imaginary part.
CMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMatrix& m);

/// Quantum multi-access instance:
///   { "states": [[M, ...], [M, ...]],   one list of matrices per source
///     "probs":  [[p, ...], [p, ...]],
///     "kraus":  [B, ...],               rho -> sum B rho B^dagger (optional, default identity)
///     "povm":   [E, ...] }              optional
struct QuantumInstance {
  LabeledEnsemble source1;
  LabeledEnsemble source2;
  KrausChannel channel;
  std::optional<Povm> povm;
};

QuantumInstance quantum_instance_from_json(const nlohmann::json& j);
nlohmann::json quantum_instance_to_json(const QuantumInstance& instance);

/// { "p_alpha": [...], "p_beta": [...], "p_out_given_in": [[[...]]] } indexed [a][b][g].
JointChannelTable table_from_json(const nlohmann::json& j);
nlohmann::json table_to_json(const JointChannelTable& table);

nlohmann::json rate_point_to_json(const RatePoint& p);
RatePoint rate_point_from_json(const nlohmann::json& j);

/// Keys: omega1, omega2, coupling (alias k), gamma (alias gamma_damp),
/// temperature (alias T). Units: hbar = k_B = 1.
ChannelParams channel_params_from_json(const nlohmann::json& j);
nlohmann::json channel_params_to_json(const ChannelParams& p);

}  // namespace qmac::io
