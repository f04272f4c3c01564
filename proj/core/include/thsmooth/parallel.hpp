#pragma once

namespace thsmooth {

/// Caps the worker threads used by the per-pixel loops. Values < 1 restore
/// the runtime default. Results do not depend on this setting.
void set_thread_count(int threads);

[[nodiscard]] int thread_count();

}  // namespace thsmooth
