#pragma once

#include <iosfwd>

namespace cpgenus::cli {

// Exit codes: 0 success, 1 domain or input error (error JSON on `out`),
// 2 usage error (message on `err`).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cpgenus::cli
