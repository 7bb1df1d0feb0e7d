// SPDX-License-Identifier: Apache-2.0
#include "gpf/cli/cli.hpp"

int main(int argc, char** argv) { return gpf::run_cli({argv + 1, argv + argc}); }
