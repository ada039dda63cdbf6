#pragma once

namespace obd::cli {

// 0 ok, 1 usage or IO error, 2 audit failure.
int run_cli(int argc, char** argv);

}  // namespace obd::cli
