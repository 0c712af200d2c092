#pragma once

#include <cstddef>

namespace mertens {

// Selects between the OpenMP kernels and the serial reference paths.
// Both paths produce bit-identical results; the serial path exists for
// testing and benchmarking.
enum class Execution { serial, parallel };

// Number of OpenMP threads available to parallel kernels (1 without OpenMP).
int max_threads();

}  // namespace mertens
