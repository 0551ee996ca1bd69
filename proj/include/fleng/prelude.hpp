#pragma once

namespace fleng {

// Source text of the built-in prelude, parsed and compiled ahead of any user
// module unless the caller opts out.
const char* preludeSource();

}  // namespace fleng
