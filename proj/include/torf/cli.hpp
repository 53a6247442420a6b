#pragma once

// The torf command line front end.  Exit codes: 0 success, 1 usage or parse
// error, 2 validation failure, 3 internal postcondition failure.

#include "torf/error.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace torf {

int exit_code(ErrorKind k);

// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

// args excludes the program name.  `in` is read when no file is given or
// the file is "-".
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace torf
