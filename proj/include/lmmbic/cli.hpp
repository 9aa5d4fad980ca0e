#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lmmbic {

// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/**
 * Entry point of the `lmmbic` command line tool. args excludes the program
 * name. Results go to `out` (or the --out file); diagnostics go to `err`.
 *
 *   fit      --data FILE --candidate OxMy [--out FILE]
 *   select   --data FILE [--criteria N,n,ne,h] [--out FILE]
 *   ess      --data FILE --candidate OxMy [--out FILE]
 *   simulate --design a,b,c,d --replicates R --seed S --out DIR [--threads T]
 *   generate --design L --truth OxMy --seed S [--out FILE]
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmmbic
