#pragma once

namespace wallspace {

/// Execution policy for kernels that have a serial reference and an OpenMP version.
enum class Exec { Serial, Parallel };

}  // namespace wallspace
