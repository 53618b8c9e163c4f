#pragma once

namespace clsel {

const char* version();

}  // namespace clsel
