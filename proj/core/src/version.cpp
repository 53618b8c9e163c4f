#include "clsel/version.hpp"

namespace clsel {

const char* version() { return CLSEL_VERSION; }

}  // namespace clsel
