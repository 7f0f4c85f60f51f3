#pragma once

namespace multcount {

// Entry point behind the multcount binary. Subcommands: count, predict,
// volume, bohr, exponent, experiment, selfcheck. Returns 0 on success, 1 on
// usage errors, 2 when --strict elevates hypothesis warnings.
int run_cli(int argc, const char* const* argv);

}  // namespace multcount
