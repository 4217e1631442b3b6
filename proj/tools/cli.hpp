#ifndef NEGDEP_TOOLS_CLI_HPP
#define NEGDEP_TOOLS_CLI_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace negdep::cli {

// Exit codes (stable contract for CI).
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitDomainError = 3;

/// Malformed input file / unknown scenario (exit 2). Domain violations keep
/// their std::domain_error / std::invalid_argument types (exit 3).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One parsed input file: a p or e column plus the optional companions.
struct InputTable {
  std::vector<double> p;
  std::vector<double> e;
  std::vector<double> weight;
  std::vector<std::string> group;
  std::vector<bool> is_null;

  bool has_p() const { return !p.empty(); }
  bool has_e() const { return !e.empty(); }
  bool has_weight() const { return !weight.empty(); }
  bool has_group() const { return !group.empty(); }
  bool has_null() const { return !is_null.empty(); }
  int rows() const { return static_cast<int>(has_p() ? p.size() : e.size()); }
};

/// Reads CSV (header row: p|e[,weight][,group][,is_null]) or JSON (object of
/// arrays with the same keys). Format chosen by extension, falling back to
/// content sniffing. Throws InputError with a line-numbered message.
InputTable read_input_table(const std::string& path);

/// Doubles rendered with 17 significant digits for round-trip fidelity.
std::string format_double(double v);

/// Runs the full CLI. Returns an exit code; never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace negdep::cli

#endif  // NEGDEP_TOOLS_CLI_HPP
