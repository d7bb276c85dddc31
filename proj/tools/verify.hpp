#pragma once

#include <iosfwd>

// Cross-checks the shared library against the reference computations. Prints
// one line per check and returns the number of failed checks.
int run_verify(bool quick, std::ostream& out);
