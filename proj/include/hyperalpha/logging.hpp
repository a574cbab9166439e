#pragma once

namespace hyperalpha {

/// Sets the global log level from HYPERALPHA_LOG (trace, debug, info, warn,
/// error, critical, off). Unset or unrecognized values leave "warn".
void configure_logging();

}  // namespace hyperalpha
