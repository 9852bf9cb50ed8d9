#pragma once

#include <string>
#include <vector>

namespace inls {

// Command-line entry point shared by the inlslab binary and the in-process
// tests. args excludes the program name. Returns the process exit code:
// 0 on success, 2 when a subcommand finishes with a scientifically
// inconclusive verdict, 1 on schema violations or runtime errors.
//
// Subcommands: classify, feasible, hfun, weight-evolve, duhamel-probe,
// evolve, ineq, regress, rerun. Every run writes a manifest.json with the
// full effective configuration (defaults resolved), library versions, wall
// time and verdicts, next to its CSV artifacts; rerun replays a recorded
// manifest and reproduces the CSVs byte for byte on the same build.
//
// The output directory is <root>/<subcommand> where <root> is the
// INLSLAB_OUT environment variable or ./out, unless --out overrides the
// directory explicitly.
int run_cli(const std::vector<std::string>& args);

}  // namespace inls
