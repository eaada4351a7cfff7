#pragma once

namespace tul::simd {

enum class Isa { scalar, avx2 };

/// Best instruction set supported by the running CPU (and this build).
Isa detect_isa();

/// Instruction set the kernel table currently dispatches to.
Isa active_isa();

/// Force a kernel table. Selecting an unsupported ISA falls back to the
/// best supported one. Honors the TUL_ISA environment variable
/// ("scalar" | "avx2") on first use.
void select_isa(Isa isa);

const char* isa_name(Isa isa);

} // namespace tul::simd
