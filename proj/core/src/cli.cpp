#include "k3lat/cli.hpp"

namespace k3lat {

int cli_run(int, char**) { return 2; }

}  // namespace k3lat
