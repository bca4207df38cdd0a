#pragma once

namespace orthostab {

// Execution policy for batch kernels. Both produce identical results.
enum class Exec { Serial, Parallel };

}  // namespace orthostab
