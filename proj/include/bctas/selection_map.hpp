// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace bctas {

/// Active transmit antenna per subcarrier, 0-based: J[k] in [0, N_t).
using SelectionMap = std::vector<std::uint32_t>;

}  // namespace bctas
