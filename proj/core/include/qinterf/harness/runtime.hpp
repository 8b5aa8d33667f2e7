#pragma once

namespace qinterf::harness {

/// Keeps large temporaries (activation matrices of the evaluation buffer) on
/// the heap instead of mapping and unmapping them on every update. Call once
/// at program start; a no-op outside glibc.
void tune_allocator();

}  // namespace qinterf::harness
