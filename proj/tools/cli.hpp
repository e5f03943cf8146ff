#pragma once

namespace flagrig {

/// Entry point of the batch CLI. Returns 0 on success, 1 on domain errors,
/// 2 on usage errors.
int run_cli(int argc, const char* const* argv);

} // namespace flagrig
