#pragma once

namespace gatehold {

/// Worker count for OpenMP regions: GATEHOLD_THREADS when set and positive,
/// otherwise the OpenMP default.
int worker_threads();

}  // namespace gatehold
