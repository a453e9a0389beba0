#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qwell/quantization.hpp"

namespace qwell {

// Bad flag combination or malformed config; the CLI maps it to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Solve, Compare, Curves, Verify };
enum class OutputFormat { Json, Csv };

Mode parse_mode(std::string_view name);
const char* to_string(Mode mode);
OutputFormat parse_format(std::string_view name);

struct RunConfig {
  Mode mode = Mode::Solve;
  std::optional<double> kappa_c;
  std::optional<double> kappa_q;
  std::optional<double> v1;
  std::optional<double> v2;
  std::optional<double> v3;
  double a = 1.0;
  double refine_tol = 1e-12;
  // Unset: 1e-8 for root validation, 1e-10 for the verify reality check.
  std::optional<double> validate_tol;
  // Scan points (solve, compare) or curve samples (curves); 0 = default.
  int grid = 0;
  OutputFormat format = OutputFormat::Json;
  std::optional<std::string> output_path;
};

// Applies one setting by its flag name without dashes ("kappa-c", "v1",
// "format", ...). Throws UsageError for unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Flat key=value text; blank lines and lines starting with '#' are skipped.
void apply_config_text(RunConfig& config, std::string_view text);

// Exactly one of the kappa pair or the potential triple must be present.
// Verify runs fall back to kappa_c = 5 pi, kappa_q = 2.5 pi when neither is.
QuantizationProblem resolve_problem(const RunConfig& config);

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Document {
  nlohmann::json json;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  int exit_code = 0;
};

// %.17g; NaN prints as "nan".
std::string format_number(double value);

std::string render(const Document& doc, OutputFormat format);

Document run_solve(const RunConfig& config);
Document run_compare(const RunConfig& config);
Document run_curves(const RunConfig& config);
Document run_verify(const RunConfig& config);
Document run(const RunConfig& config);

// Clip applied to the tan(x) curve column.
inline constexpr double kTanClip = 1e3;

}  // namespace qwell
