#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mtjsc/config.hpp"

namespace mtjsc::cli {

const std::vector<std::string>& subcommands();

// Executes one subcommand, writing its files under cfg.out_dir. Returns 0 on
// success; module errors are reported on err with the subcommand name and
// yield 1.
int run(const std::string& subcommand, const config::RunConfig& cfg, std::ostream& out,
        std::ostream& err);

// Full command-line entry point (flag parsing included).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mtjsc::cli
