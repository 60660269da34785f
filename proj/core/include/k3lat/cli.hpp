#pragma once

namespace k3lat {

// Entry point for the k3lat command-line tool; returns the process exit
// status (0 success, 1 verification/data failure, 2 usage error).
int cli_run(int argc, char** argv);

}  // namespace k3lat
