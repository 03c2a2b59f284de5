#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace acslab {

/* run-time options shared by the subcommands; resolution order is
 * built-in defaults, then ./acslab.json, then ACSLAB_GRID, then flags */
struct RunConfig {
    int gridSize = 9;
    double tolerance = 1e-9;
    long seed = 1;
    std::string outputMode = "table";
};

/* args are argv[1..]; returns the process exit code:
 * 0 success, 1 failed check, 2 unusable input */
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace acslab
