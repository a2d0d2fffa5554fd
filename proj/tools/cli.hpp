#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ecstel::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailed = 1,
    kInvalidInput = 2,
};

/// Runs one invocation. `args` excludes the program name. Reports go to `out`
/// (or to --output), diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// "0.8", "-1e-3", "0.5+0.3i", "0.5-0.3i", "0.3i". Throws InvalidArgument.
std::complex<double> parse_complex(std::string_view text);

/// 17 significant digits, scientific notation, '.' decimal separator.
std::string format_number(double value);

/// Reads key=value lines and appends `--key value` for every key not already
/// present in `args`. Blank lines and lines starting with '#' are skipped.
std::vector<std::string> merge_config(std::vector<std::string> args, const std::string &config_text);

}  // namespace ecstel::cli
