#pragma once

#include <iosfwd>

#include "defhyper/so_client.hpp"

namespace defhyper {

// Hooks the tests replace; defaults talk to the network and really sleep.
struct CliEnvironment {
  Transport transport;
  Sleeper sleeper;
  std::istream* in = nullptr;  // predict reads the sentence here when no flag is given
};

// Exit codes: 0 artifact fully produced, 1 runtime failure, 2 usage error,
// 3 partial output (fetch-so stopped by the API quota).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const CliEnvironment& env = {});

}  // namespace defhyper
